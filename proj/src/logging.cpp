#include "fairbench/logging.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace fairbench::log {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::stderr_color_mt("fairbench");
    instance->set_pattern("[%l] %v");
    instance->set_level(spdlog::level::warn);
  });
  return instance;
}

}  // namespace

void init_from_env() {
  auto lg = logger();
  if (const char* env = std::getenv("FAIRBENCH_LOG"); env != nullptr && *env != '\0') {
    lg->set_level(spdlog::level::from_str(env));
  }
}

void debug(std::string_view message) { logger()->debug("{}", message); }
void info(std::string_view message) { logger()->info("{}", message); }
void warn(std::string_view message) { logger()->warn("{}", message); }

}  // namespace fairbench::log
