#pragma once

#include <string_view>

namespace fairbench::log {

// Reads FAIRBENCH_LOG (trace|debug|info|warn|error|off, default warn) and
// configures the stderr logger. Safe to call more than once.
void init_from_env();

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);

}  // namespace fairbench::log
