#include "instforge/jsonl.hpp"

#include "instforge/error.hpp"
#include "instforge/text.hpp"

namespace instforge {

std::vector<JsonlLine> read_jsonl(const std::filesystem::path& path) {
  const std::string content = text::read_file(path);
  std::vector<JsonlLine> out;
  std::size_t line_no = 0;
  for (auto& line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    JsonlLine entry;
    entry.line_no = line_no;
    try {
      entry.value = Json::parse(line);
    } catch (const Json::parse_error& e) {
      entry.error = e.what();
    }
    entry.raw = std::move(line);
    out.push_back(std::move(entry));
  }
  return out;
}

std::string dump_jsonl(const std::vector<Json>& values) {
  std::string out;
  for (const auto& v : values) {
    out += v.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& values) {
  text::write_file_atomic(path, dump_jsonl(values));
}

JsonlAppender::JsonlAppender(const std::filesystem::path& path, bool truncate) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
  if (!out_) throw Error(ErrorCode::IoError, "cannot open " + path.string());
}

void JsonlAppender::append(const Json& value) {
  const std::string line = value.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "append failed");
}

}  // namespace instforge
