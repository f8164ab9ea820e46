#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fairbench/experiment/config.hpp"
#include "fairbench/experiment/report.hpp"

namespace fairbench::experiment {

// Markdown writes performance.md and fairness.md; Json writes report.json;
// Svg writes importance_<model>_<protocol>_<split>.svg per entry and split.
// Creates out_dir if needed. Throws IoError.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir);

// Shared by the Markdown tables: percent with one decimal, trailing ".0"
// removed (1.0 -> "100", 0.9917 -> "99.2").
std::string format_percent(double score);

std::string render_performance_markdown(const ExperimentReport& report);
std::string render_fairness_markdown(const ExperimentReport& report);

struct ImportanceBar {
  std::string feature;
  double mean_drop = 0.0;
  double std_drop = 0.0;
};

// Fold-averaged bars for one split, per-column features then groups, sorted
// by descending mean drop (ties keep column order).
std::vector<ImportanceBar> importance_bars(const ReportEntry& entry, importance::Split split);
std::string render_importance_svg(const ReportEntry& entry, importance::Split split);

std::string slug(std::string_view text);

}  // namespace fairbench::experiment
