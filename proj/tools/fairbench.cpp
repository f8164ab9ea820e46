#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairbench/dataset/cohort_io.hpp"
#include "fairbench/dataset/cohort_spec.hpp"
#include "fairbench/dataset/synthesize.hpp"
#include "fairbench/error.hpp"
#include "fairbench/experiment/config.hpp"
#include "fairbench/experiment/emit.hpp"
#include "fairbench/experiment/runner.hpp"
#include "fairbench/logging.hpp"

namespace fs = std::filesystem;
using namespace fairbench;

namespace {

std::vector<experiment::ReportFormat> parse_formats(const std::string& list) {
  std::vector<experiment::ReportFormat> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto f = experiment::parse_report_format(item);
    if (!f) throw Error(ErrorCode::InvalidConfig, "unknown report format '" + item + "' (expected md, json, svg)");
    if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "no report formats given");
  return out;
}

void print_written(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
}

struct RunArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string formats;
  std::optional<std::size_t> workers;
};

int cmd_run(const RunArgs& args) {
  experiment::ExperimentConfig config =
      args.config_path.empty() ? experiment::default_config() : experiment::load_config(args.config_path);
  if (args.seed) config.master_seed = *args.seed;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (!args.formats.empty()) config.formats = parse_formats(args.formats);
  if (args.workers) config.workers = *args.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : *args.workers;
  config.validate();

  log::info("running " + std::to_string(config.models.size()) + " model(s), k=" + std::to_string(config.k_folds));
  const experiment::ExperimentReport report = experiment::run_experiment(config);

  const fs::path out(config.output_dir);
  std::vector<fs::path> written;
  for (auto f : config.formats) {
    auto paths = experiment::emit_report(report, f, out);
    written.insert(written.end(), paths.begin(), paths.end());
  }

  const auto& prov = report.provenance;
  nlohmann::json info = {{"toolkit_version", prov.toolkit_version},
                         {"config_hash", prov.config_hash},
                         {"started_at", prov.started_at},
                         {"wall_clock_seconds", prov.wall_clock_seconds},
                         {"workers", config.workers},
                         {"hardware_threads", std::thread::hardware_concurrency()}};
  std::ofstream(out / "run_info.json") << info.dump(2) << '\n';
  written.push_back(out / "run_info.json");
  print_written(written);
  return 0;
}

int cmd_synth(const std::string& spec_path, std::uint64_t seed, const std::string& out_path) {
  const dataset::CohortSpec spec = spec_path.empty() ? dataset::default_cohort_spec() : dataset::load_cohort_spec(spec_path);
  const dataset::Cohort cohort = dataset::synthesize_cohort(spec, seed);
  if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
  dataset::write_cohort_csv(cohort, out_path);
  std::cout << out_path << " (" << cohort.n_itp() << " ITP, " << cohort.n_non_itp() << " NonITP)\n";
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& formats, const std::string& out_dir) {
  const experiment::ExperimentReport report = experiment::report_from_json(read_json_file(in_path));
  std::vector<fs::path> written;
  for (auto f : parse_formats(formats)) {
    auto paths = experiment::emit_report(report, f, out_dir);
    written.insert(written.end(), paths.begin(), paths.end());
  }
  print_written(written);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  log::init_from_env();

  CLI::App app{"Fairness benchmark for ITP classification"};
  app.set_version_flag("--version", std::string(FAIRBENCH_VERSION));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the cross-validated experiment and write reports");
  run->add_option("--config", run_args.config_path, "Experiment config (YAML); defaults to the built-in study")
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_args.out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", run_args.seed, "Master seed (overrides master_seed)");
  run->add_option("--formats", run_args.formats, "Comma-separated subset of md,json,svg");
  run->add_option("--workers", run_args.workers, "Worker threads; 0 uses all hardware threads");

  std::string spec_path, synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Synthesize a cohort CSV from summary statistics");
  synth->add_option("--spec", spec_path, "Cohort spec (YAML); defaults to the built-in statistics")
      ->check(CLI::ExistingFile);
  synth->add_option("--seed", synth_seed, "Generator seed")->required();
  synth->add_option("--out", synth_out, "Output CSV path")->required();

  std::string report_in, report_formats = "md,svg", report_out;
  auto* rep = app.add_subcommand("report", "Re-render a stored report.json");
  rep->add_option("--in", report_in, "report.json from a previous run")->required()->check(CLI::ExistingFile);
  rep->add_option("--formats", report_formats, "Comma-separated subset of md,json,svg");
  rep->add_option("--out", report_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*synth) return cmd_synth(spec_path, synth_seed, synth_out);
    if (*rep) return cmd_report(report_in, report_formats, report_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
