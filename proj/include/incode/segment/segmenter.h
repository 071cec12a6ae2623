#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "incode/corpus/dataset.h"

namespace incode::segment {

using corpus::MessageId;

// A contiguous span of core messages plus context borrowed from the
// neighbouring chunks. Context ids never overlap the core.
struct Chunk {
  std::size_t index = 0;
  std::vector<MessageId> core_ids;
  std::vector<MessageId> leading_context_ids;
  std::vector<MessageId> trailing_context_ids;

  bool operator==(const Chunk&) const = default;
};

enum class SegmentationMethod { GapThreshold, SmoothedActivity };

std::string to_string(SegmentationMethod method);

struct SegmentationConfig {
  SegmentationMethod method = SegmentationMethod::GapThreshold;
  std::chrono::minutes min_gap{180};
  std::chrono::minutes kernel_bandwidth{30};
  std::size_t min_chunk_size = 3;

  // Throws ConfigError.
  void validate() const;
};

// Positions p (0 < p < size) such that a chunk starts at message p, before
// runt merging. Gap threshold: the gap to the previous message is strictly
// greater than min_gap.
std::vector<std::size_t> gap_boundaries(const corpus::Dataset& dataset,
                                        std::chrono::minutes min_gap);

// Gaussian-smoothed message rate; boundaries sit at local minima whose value
// is below half the mean of the two neighbouring peaks.
std::vector<std::size_t> activity_boundaries(const corpus::Dataset& dataset,
                                             std::chrono::minutes bandwidth);

// Sum of unnormalized Gaussian kernels over the message times, at time x
// in minutes since the first message.
double activity_signal(const std::vector<double>& event_minutes, double bandwidth, double x);

std::vector<Chunk> segment(const corpus::Dataset& dataset, const SegmentationConfig& config);

// Chunks below min_chunk_size are folded into the chunk before them.
std::vector<Chunk> chunks_from_boundaries(const corpus::Dataset& dataset,
                                          const std::vector<std::size_t>& boundaries,
                                          std::size_t min_chunk_size);

// Each chunk gets min(k, |previous core|) leading and min(k, |next core|)
// trailing context ids.
std::vector<Chunk> attach_context(std::vector<Chunk> chunks, std::size_t k = 3);

}  // namespace incode::segment
