#include "instforge/error.hpp"

namespace instforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DocumentTooShort: return "DocumentTooShort";
    case ErrorCode::MissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::CassetteMiss: return "CassetteMiss";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::IllegalRelation: return "IllegalRelation";
    case ErrorCode::ScoringIncomplete: return "ScoringIncomplete";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AnalyzerMissing: return "AnalyzerMissing";
    case ErrorCode::AnalyzerCrash: return "AnalyzerCrash";
    case ErrorCode::OutputParseFailure: return "OutputParseFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

std::string excerpt(std::string_view text, std::size_t max_len) {
  if (text.size() <= max_len) return std::string(text);
  // Avoid splitting a UTF-8 sequence.
  std::size_t cut = max_len;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return std::string(text.substr(0, cut)) + "...";
}

}  // namespace instforge
