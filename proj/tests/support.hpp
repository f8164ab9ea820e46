#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairbench/dataset/synthesize.hpp"
#include "fairbench/dataset/types.hpp"
#include "fairbench/error.hpp"
#include "fairbench/matrix.hpp"
#include "fairbench/rng.hpp"

namespace support {

using namespace fairbench;

inline dataset::Cohort default_cohort(std::uint64_t seed = 42) {
  return dataset::synthesize_cohort(dataset::default_cohort_spec(), seed);
}

inline Matrix random_matrix(std::size_t n, std::size_t d, rng::Stream& stream, double lo = -1.0, double hi = 1.0) {
  Matrix m(n, d);
  for (double& v : m.data()) v = lo + (hi - lo) * stream.uniform_open();
  return m;
}

// Labels from a noisy linear rule, guaranteed to contain both classes.
inline std::vector<int> random_labels(const Matrix& X, rng::Stream& stream, double noise = 0.3) {
  std::vector<int> y(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < X.cols(); ++j) s += (j % 2 ? -1.0 : 1.0) * X(i, j);
    y[i] = s + noise * (stream.uniform_open() - 0.5) > 0.0 ? 1 : 0;
  }
  y[0] = 0;
  y[1] = 1;
  return y;
}

inline dataset::PatientRecord record(dataset::Label label, double platelets, dataset::Gender g = dataset::Gender::Female,
                                     dataset::Race r = dataset::Race::White, double age = 50.0) {
  dataset::PatientRecord rec;
  rec.label = label;
  rec.dx_plt_ct = platelets;
  rec.gender = g;
  rec.race = r;
  rec.age_last_seen = age;
  rec.alt = 20;
  rec.dx_hb_ct = 140;
  rec.dx_neutro_ct = 4;
  rec.wbc_ct = 7;
  rec.rbc_ct = 4.8;
  return rec;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fairbench_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected fairbench::Error");
}

inline std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  throw std::logic_error("expected fairbench::Error");
}

// Exit status of a shell command.
inline int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace support
