#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "incode/codebook/codebook.h"
#include "incode/common/json_io.h"
#include "incode/eval/annotation_store.h"

namespace incode::eval {

struct ApproachMetrics {
  Approach approach = Approach::Topic;
  std::size_t code_count = 0;
  std::vector<std::string> groundedness;  // codes with a final groundedness flag
  std::vector<std::string> overly_broad;
  std::vector<std::string> unresolved;
  std::vector<std::string> verb_nonconforming;
  bool finalized = false;
};

struct MetricsReport {
  std::vector<ApproachMetrics> rows;
  bool draft = true;
};

// Counts only decided flags; rows whose approach is not finalizable make
// the whole report a draft.
MetricsReport metrics_report(const std::vector<codebook::Codebook>& codebooks, const AnnotationStore& store);

// Throws EvaluationError(NotFinalizable) naming every unresolved code.
MetricsReport finalize_report(const std::vector<codebook::Codebook>& codebooks, const AnnotationStore& store);

// k / n as "2.58%".
std::string format_percent(std::size_t k, std::size_t n);
// "23 / 2 / 2"
std::string summary_row(const ApproachMetrics& row);

// Overview table plus per-flag listings, with a DRAFT banner when unfinalized.
std::string render_report_table(const MetricsReport& report);
json to_json(const MetricsReport& report);

}  // namespace incode::eval
