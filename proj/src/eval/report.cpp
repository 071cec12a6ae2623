#include "incode/eval/report.h"

#include <cstdio>

#include "incode/common/text.h"

namespace incode::eval {

MetricsReport metrics_report(const std::vector<codebook::Codebook>& codebooks, const AnnotationStore& store) {
  MetricsReport report;
  report.draft = codebooks.empty();
  for (const auto& cb : codebooks) {
    ApproachMetrics row;
    row.approach = cb.approach();
    row.code_count = codebook::count_codes(cb);
    for (const auto& code : cb.codes()) {
      if (code.flags.verb_nonconforming) row.verb_nonconforming.push_back(code.normalized_label);
      const auto flags = store.final_flags(cb.approach(), code.normalized_label);
      if (!flags) continue;
      if (flags->count(Flag::GroundednessIssue)) row.groundedness.push_back(code.normalized_label);
      if (flags->count(Flag::OverlyBroad)) row.overly_broad.push_back(code.normalized_label);
    }
    row.unresolved = store.unresolved(cb.approach());
    row.finalized = store.finalizable(cb.approach());
    if (!row.finalized) report.draft = true;
    report.rows.push_back(std::move(row));
  }
  return report;
}

MetricsReport finalize_report(const std::vector<codebook::Codebook>& codebooks, const AnnotationStore& store) {
  auto report = metrics_report(codebooks, store);
  if (!report.draft) return report;
  std::vector<std::string> problems;
  for (const auto& row : report.rows) {
    const auto name = std::string(codebook::to_string(row.approach));
    if (!row.unresolved.empty()) {
      problems.push_back(name + ": unresolved " + text::join(row.unresolved, ", "));
    } else if (!row.finalized) {
      problems.push_back(name + ": raters have not completed");
    }
  }
  if (problems.empty()) problems.push_back("no codebooks");
  throw EvaluationError(EvaluationError::Kind::NotFinalizable,
                        "report not finalizable: " + text::join(problems, "; "));
}

std::string format_percent(std::size_t k, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", n == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n));
  return buf;
}

std::string summary_row(const ApproachMetrics& row) {
  return std::to_string(row.code_count) + " / " + std::to_string(row.groundedness.size()) + " / " +
         std::to_string(row.overly_broad.size());
}

std::string render_report_table(const MetricsReport& report) {
  std::string out;
  if (report.draft) out += "DRAFT: not all disagreements are reconciled\n\n";
  std::string header = "| |";
  std::string rule = "| --- |";
  std::string codes = "| # of codes |";
  std::string grounded = "| # of groundedness issues |";
  std::string broad = "| # of overly broad |";
  for (const auto& row : report.rows) {
    header += " " + std::string(codebook::display_name(row.approach)) + " |";
    rule += " --- |";
    codes += " " + std::to_string(row.code_count) + " |";
    grounded += " " + std::to_string(row.groundedness.size()) + " (" +
                format_percent(row.groundedness.size(), row.code_count) + ") |";
    broad += " " + std::to_string(row.overly_broad.size()) + " (" +
             format_percent(row.overly_broad.size(), row.code_count) + ") |";
  }
  out += header + "\n" + rule + "\n" + codes + "\n" + grounded + "\n" + broad + "\n";

  for (const auto& row : report.rows) {
    out += "\n## " + std::string(codebook::display_name(row.approach)) + " (" + summary_row(row) + ")\n";
    const auto list = [&](const char* title, const std::vector<std::string>& labels) {
      if (labels.empty()) return;
      out += std::string(title) + ": " + text::join(labels, "; ") + "\n";
    };
    list("groundedness issues", row.groundedness);
    list("overly broad", row.overly_broad);
    list("unresolved", row.unresolved);
    if (!row.verb_nonconforming.empty()) {
      out += "not verb phrases: " + std::to_string(row.verb_nonconforming.size()) + "\n";
    }
  }
  return out;
}

json to_json(const MetricsReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"approach", codebook::to_string(row.approach)},
                    {"name", codebook::display_name(row.approach)},
                    {"codes", row.code_count},
                    {"groundedness_issues", row.groundedness.size()},
                    {"overly_broad", row.overly_broad.size()},
                    {"groundedness_percent", format_percent(row.groundedness.size(), row.code_count)},
                    {"overly_broad_percent", format_percent(row.overly_broad.size(), row.code_count)},
                    {"groundedness_labels", row.groundedness},
                    {"overly_broad_labels", row.overly_broad},
                    {"unresolved", row.unresolved},
                    {"verb_nonconforming", row.verb_nonconforming.size()},
                    {"finalized", row.finalized},
                    {"summary", summary_row(row)}});
  }
  return {{"format", "incode.report"}, {"version", 1}, {"draft", report.draft}, {"rows", std::move(rows)}};
}

}  // namespace incode::eval
