#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace instforge {

struct ProcessSpec {
  std::vector<std::string> argv;  // argv[0] is resolved through PATH
  std::filesystem::path cwd;      // empty keeps the current directory
  std::map<std::string, std::string> env;  // added to the inherited environment
  std::chrono::milliseconds timeout{120000};
};

struct ProcessResult {
  int exit_code = 0;  // 128 + signal when killed
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Absolute path of an executable found through PATH (or the path itself if
/// it contains a slash and is executable).
std::optional<std::filesystem::path> find_executable(std::string_view name);

/// Spawns, captures both streams and waits, killing the child on timeout.
/// Throws AnalyzerMissing when argv[0] cannot be found, IoError when the
/// spawn itself fails.
ProcessResult run_process(const ProcessSpec& spec);

}  // namespace instforge
