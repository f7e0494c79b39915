#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace instforge {

enum class ErrorCode {
  FileNotFound,
  IoError,
  EmptyCorpus,
  DocumentTooShort,
  MissingPlaceholder,
  UnknownKind,
  ParseFailure,
  OutOfRange,
  Transport,
  RateLimited,
  CassetteMiss,
  MalformedResponse,
  InvalidArgument,
  UnknownNode,
  IllegalRelation,
  ScoringIncomplete,
  EmptyInput,
  AnalyzerMissing,
  AnalyzerCrash,
  OutputParseFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the pipeline's quarantine writer) can tag rejects
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Short excerpt of `text` for error messages and reject records.
std::string excerpt(std::string_view text, std::size_t max_len = 160);

/// Value-or-error slot used where a batch must carry per-item failures.
template <typename T>
class Outcome {
 public:
  Outcome(T value) : state_(std::move(value)) {}
  Outcome(Error error) : state_(std::move(error)) {}

  bool ok() const noexcept { return std::holds_alternative<T>(state_); }
  explicit operator bool() const noexcept { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::get<Error>(state_);
    return std::get<T>(state_);
  }
  T& value() & {
    if (!ok()) throw std::get<Error>(state_);
    return std::get<T>(state_);
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Error& error() const { return std::get<Error>(state_); }

 private:
  std::variant<T, Error> state_;
};

}  // namespace instforge
