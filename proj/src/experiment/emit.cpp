#include "fairbench/experiment/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "fairbench/error.hpp"

namespace fairbench::experiment {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string attribute_title(std::string_view a) {
  if (a == "gender") return "Gender";
  if (a == "race") return "Race";
  if (a == "age") return "Age";
  return std::string(a);
}

}  // namespace

std::string format_percent(double score) {
  std::string s = fmt::format("{:.1f}", score * 100.0);
  if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
  if (s == "-0") s = "0";
  return s;
}

std::string slug(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '-')
      out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string render_performance_markdown(const ExperimentReport& report) {
  std::ostringstream md;
  md << "# Macro-F1 (%) per fold\n\n| Model |";
  for (const auto& p : report.protocols) {
    for (std::size_t f = 0; f < report.k_folds; ++f) md << ' ' << p << ' ' << (f + 1) << " |";
    md << ' ' << p << " mean |";
  }
  md << "\n|---|";
  for (std::size_t i = 0; i < report.protocols.size() * (report.k_folds + 1); ++i) md << "---:|";
  md << '\n';
  for (const auto& m : report.models) {
    md << "| " << m << " |";
    for (const auto& p : report.protocols) {
      const ReportEntry* e = report.find(m, p);
      for (std::size_t f = 0; f < report.k_folds; ++f)
        md << ' ' << (e && f < e->fold_f1.size() ? format_percent(e->fold_f1[f]) : std::string("-")) << " |";
      md << ' ' << (e ? "**" + format_percent(e->mean_f1) + "**" : std::string("-")) << " |";
    }
    md << '\n';
  }

  std::vector<std::string> warned;
  for (const auto& e : report.entries)
    for (const auto& w : e.warnings) warned.push_back(e.model + " (" + e.protocol + "): " + w);
  if (!warned.empty()) {
    md << "\n## Training warnings\n\n";
    for (const auto& w : warned) md << "- " << w << '\n';
  }
  return md.str();
}

std::string render_fairness_markdown(const ExperimentReport& report) {
  std::ostringstream md;
  md << "# Equalized Odds (%) pooled over out-of-fold predictions\n\n| Model |";
  for (const auto& p : report.protocols)
    for (std::string_view a : kAttributes) md << ' ' << attribute_title(a) << " (" << p << ") |";
  md << "\n|---|";
  for (std::size_t i = 0; i < report.protocols.size() * kAttributes.size(); ++i) md << "---:|";
  md << '\n';
  for (const auto& m : report.models) {
    md << "| " << m << " |";
    for (const auto& p : report.protocols) {
      const ReportEntry* e = report.find(m, p);
      for (std::string_view a : kAttributes) {
        const AttributeFairness* af = e ? e->find_fairness(a) : nullptr;
        md << ' ' << (af ? format_percent(af->pooled) : std::string("-")) << " |";
      }
    }
    md << '\n';
  }
  if (!report.age_bin_edges.empty()) {
    md << "\nAge groups split at";
    for (std::size_t i = 0; i < report.age_bin_edges.size(); ++i)
      md << (i ? ", " : " ") << fmt::format("{}", report.age_bin_edges[i]);
    md << " years.\n";
  }
  if (!report.fold_flags.empty()) {
    md << "\n## Fold flags\n\n";
    for (const auto& f : report.fold_flags) md << "- " << f << '\n';
  }
  return md.str();
}

std::vector<ImportanceBar> importance_bars(const ReportEntry& entry, importance::Split split) {
  const auto& folds = split == importance::Split::Train ? entry.train_importance : entry.test_importance;
  std::vector<ImportanceBar> bars;
  std::map<std::string, std::size_t> index;
  for (const auto& r : folds) {
    auto add = [&](const importance::FeatureImportance& f) {
      auto [it, inserted] = index.try_emplace(f.feature, bars.size());
      if (inserted) bars.push_back({f.feature, 0.0, 0.0});
      bars[it->second].mean_drop += f.mean_drop;
      bars[it->second].std_drop += f.std_drop;
    };
    for (const auto& f : r.features) add(f);
    for (const auto& f : r.grouped) add(f);
  }
  if (!folds.empty())
    for (auto& b : bars) {
      b.mean_drop /= static_cast<double>(folds.size());
      b.std_drop /= static_cast<double>(folds.size());
    }
  std::stable_sort(bars.begin(), bars.end(),
                   [](const ImportanceBar& a, const ImportanceBar& b) { return a.mean_drop > b.mean_drop; });
  return bars;
}

std::string render_importance_svg(const ReportEntry& entry, importance::Split split) {
  const auto bars = importance_bars(entry, split);
  constexpr double kLabelWidth = 150.0, kPlotWidth = 400.0, kBarHeight = 18.0, kGap = 6.0, kTop = 40.0;
  const double height = kTop + static_cast<double>(bars.size()) * (kBarHeight + kGap) + 30.0;
  double scale_max = 0.0;
  for (const auto& b : bars) scale_max = std::max(scale_max, std::abs(b.mean_drop));
  if (scale_max <= 0.0) scale_max = 1.0;

  std::ostringstream svg;
  svg << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      kLabelWidth + kPlotWidth + 80.0, height);
  svg << fmt::format("<text x=\"10\" y=\"20\" font-size=\"14\">{} ({}) permutation importance, {} split</text>\n",
                     xml_escape(entry.model), xml_escape(entry.protocol), importance::to_string(split));
  const double zero_x = kLabelWidth + 10.0;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double y = kTop + static_cast<double>(i) * (kBarHeight + kGap);
    const double w = std::abs(b.mean_drop) / scale_max * kPlotWidth;
    const double x = b.mean_drop >= 0.0 ? zero_x : zero_x - w;
    svg << fmt::format("<g class=\"bar\" data-feature=\"{}\">\n", xml_escape(b.feature));
    svg << fmt::format("  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLabelWidth, y + 13.0,
                       xml_escape(b.feature));
    svg << fmt::format("  <rect x=\"{:.2f}\" y=\"{:.1f}\" width=\"{:.2f}\" height=\"{:.1f}\" fill=\"#4c72b0\"/>\n", x,
                       y, w, kBarHeight);
    svg << fmt::format("  <text x=\"{:.2f}\" y=\"{:.1f}\">{:.4f}</text>\n", zero_x + std::max(w, 0.0) + 4.0,
                       y + 13.0, b.mean_drop);
    svg << "</g>\n";
  }
  svg << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#333\"/>\n", zero_x,
                     kTop - 4.0, height - 26.0);
  svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">mean drop in macro-F1</text>\n", zero_x, height - 8.0);
  svg << "</svg>\n";
  return svg.str();
}

std::vector<fs::path> emit_report(const ExperimentReport& report, ReportFormat format, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<fs::path> written;
  switch (format) {
    case ReportFormat::Markdown:
      write_file(out_dir / "performance.md", render_performance_markdown(report));
      written.push_back(out_dir / "performance.md");
      write_file(out_dir / "fairness.md", render_fairness_markdown(report));
      written.push_back(out_dir / "fairness.md");
      break;
    case ReportFormat::Json:
      write_file(out_dir / "report.json", to_json(report).dump(2) + "\n");
      written.push_back(out_dir / "report.json");
      break;
    case ReportFormat::Svg:
      for (const auto& e : report.entries)
        for (importance::Split split : {importance::Split::Train, importance::Split::Test}) {
          const fs::path path = out_dir / ("importance_" + slug(e.model) + "_" + slug(e.protocol) + "_" +
                                           std::string(importance::to_string(split)) + ".svg");
          write_file(path, render_importance_svg(e, split));
          written.push_back(path);
        }
      break;
  }
  return written;
}

}  // namespace fairbench::experiment
