#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace instforge {

/// Insertion-ordered JSON; every file the pipeline writes keeps field order
/// stable so outputs diff cleanly and are byte-reproducible.
using Json = nlohmann::ordered_json;

struct JsonlLine {
  std::size_t line_no = 0;
  std::optional<Json> value;
  std::string error;
  std::string raw;
};

/// Reads one JSON value per non-blank line. Malformed lines are returned
/// with `value` empty and `error` set; the caller decides whether to reject.
std::vector<JsonlLine> read_jsonl(const std::filesystem::path& path);

std::string dump_jsonl(const std::vector<Json>& values);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& values);

/// Single-writer appender; safe to share between threads.
class JsonlAppender {
 public:
  JsonlAppender(const std::filesystem::path& path, bool truncate);
  void append(const Json& value);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

}  // namespace instforge
