#include "incode/segment/segmenter.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace incode::segment {

std::string to_string(SegmentationMethod method) {
  return method == SegmentationMethod::GapThreshold ? "gap" : "activity";
}

void SegmentationConfig::validate() const {
  if (min_gap.count() <= 0) throw ConfigError("min_gap must be positive");
  if (kernel_bandwidth.count() <= 0) throw ConfigError("kernel_bandwidth must be positive");
  if (min_chunk_size < 1) throw ConfigError("min_chunk_size must be at least 1");
}

std::vector<std::size_t> gap_boundaries(const corpus::Dataset& dataset,
                                        std::chrono::minutes min_gap) {
  std::vector<std::size_t> out;
  const auto& msgs = dataset.messages();
  for (std::size_t i = 1; i < msgs.size(); ++i) {
    if (msgs[i].timestamp - msgs[i - 1].timestamp > min_gap) out.push_back(i);
  }
  return out;
}

double activity_signal(const std::vector<double>& event_minutes, double bandwidth, double x) {
  const double reach = 6.0 * bandwidth;
  auto first = std::lower_bound(event_minutes.begin(), event_minutes.end(), x - reach);
  double sum = 0.0;
  for (auto it = first; it != event_minutes.end() && *it <= x + reach; ++it) {
    const double z = (x - *it) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum;
}

std::vector<std::size_t> activity_boundaries(const corpus::Dataset& dataset,
                                             std::chrono::minutes bandwidth) {
  const auto& msgs = dataset.messages();
  if (msgs.size() < 2) return {};
  std::vector<double> events;
  events.reserve(msgs.size());
  for (const auto& m : msgs) {
    events.push_back(static_cast<double>((m.timestamp - msgs.front().timestamp).count()));
  }
  const double h = static_cast<double>(bandwidth.count());
  const double lo = -3.0 * h;
  const double hi = events.back() + 3.0 * h;
  constexpr double kMaxGrid = 2.0e6;
  const double step = std::max(h / 4.0, (hi - lo) / kMaxGrid);
  const auto points = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;

  // Runs of equal values, so flat stretches count as a single extremum.
  struct Run {
    double value;
    double center;
  };
  std::vector<Run> runs;
  double run_start = lo;
  double prev_x = lo;
  double current = activity_signal(events, h, lo);
  for (std::size_t g = 1; g < points; ++g) {
    const double x = lo + static_cast<double>(g) * step;
    const double v = activity_signal(events, h, x);
    if (v != current) {
      runs.push_back({current, 0.5 * (run_start + prev_x)});
      current = v;
      run_start = x;
    }
    prev_x = x;
  }
  runs.push_back({current, 0.5 * (run_start + prev_x)});

  std::vector<std::size_t> minima;
  std::vector<std::size_t> maxima;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    const double v = runs[r].value;
    if (runs[r - 1].value > v && runs[r + 1].value > v) minima.push_back(r);
    if (runs[r - 1].value < v && runs[r + 1].value < v) maxima.push_back(r);
  }

  std::set<std::size_t> cuts;
  for (const auto r : minima) {
    const auto right = std::upper_bound(maxima.begin(), maxima.end(), r);
    if (right == maxima.end() || right == maxima.begin()) continue;
    const auto left = std::prev(right);
    const double peak_mean = 0.5 * (runs[*left].value + runs[*right].value);
    if (!(runs[r].value < 0.5 * peak_mean)) continue;
    const auto first_after =
        std::upper_bound(events.begin(), events.end(), runs[r].center) - events.begin();
    const auto pos = static_cast<std::size_t>(first_after);
    if (pos > 0 && pos < events.size()) cuts.insert(pos);
  }
  return {cuts.begin(), cuts.end()};
}

std::vector<Chunk> chunks_from_boundaries(const corpus::Dataset& dataset,
                                          const std::vector<std::size_t>& boundaries,
                                          std::size_t min_chunk_size) {
  const auto& msgs = dataset.messages();
  std::vector<Chunk> chunks;
  if (msgs.empty()) return chunks;
  std::vector<std::size_t> starts{0};
  for (auto b : boundaries) {
    if (b > starts.back() && b < msgs.size()) starts.push_back(b);
  }
  for (std::size_t c = 0; c < starts.size(); ++c) {
    const auto end = c + 1 < starts.size() ? starts[c + 1] : msgs.size();
    std::vector<MessageId> ids;
    for (auto i = starts[c]; i < end; ++i) ids.push_back(msgs[i].id);
    if (!chunks.empty() && ids.size() < min_chunk_size) {
      auto& prev = chunks.back().core_ids;
      prev.insert(prev.end(), ids.begin(), ids.end());
      continue;
    }
    chunks.push_back(Chunk{chunks.size(), std::move(ids), {}, {}});
  }
  return chunks;
}

std::vector<Chunk> segment(const corpus::Dataset& dataset, const SegmentationConfig& config) {
  config.validate();
  if (dataset.empty()) return {};
  const auto boundaries = config.method == SegmentationMethod::GapThreshold
                              ? gap_boundaries(dataset, config.min_gap)
                              : activity_boundaries(dataset, config.kernel_bandwidth);
  return chunks_from_boundaries(dataset, boundaries, config.min_chunk_size);
}

std::vector<Chunk> attach_context(std::vector<Chunk> chunks, std::size_t k) {
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    auto& chunk = chunks[c];
    chunk.leading_context_ids.clear();
    chunk.trailing_context_ids.clear();
    if (c > 0) {
      const auto& prev = chunks[c - 1].core_ids;
      const auto n = std::min(k, prev.size());
      chunk.leading_context_ids.assign(prev.end() - static_cast<std::ptrdiff_t>(n), prev.end());
    }
    if (c + 1 < chunks.size()) {
      const auto& next = chunks[c + 1].core_ids;
      const auto n = std::min(k, next.size());
      chunk.trailing_context_ids.assign(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(n));
    }
  }
  return chunks;
}

}  // namespace incode::segment
