#include "instforge/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "instforge/templates.hpp"
#include "instforge/text.hpp"

namespace instforge {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

CriteriaAssessment parse_standards_met(std::string_view input) {
  auto at = text::ifind_last(input, "standards met");
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::ParseFailure, "no Standards Met marker in: " + excerpt(text::trim(input)));
  }
  auto rest = input.substr(at);
  auto open = rest.find('[');
  if (open == std::string_view::npos) {
    throw Error(ErrorCode::ParseFailure, "no list after Standards Met in: " + excerpt(rest));
  }
  auto close = rest.find(']', open);
  if (close == std::string_view::npos) {
    throw Error(ErrorCode::ParseFailure, "unterminated list in: " + excerpt(rest));
  }

  CriteriaAssessment a;
  a.raw_text = std::string(input);
  auto list = rest.substr(open + 1, close - open - 1);
  std::size_t i = 0;
  while (i < list.size()) {
    const char c = list[i];
    if (c == ' ' || c == ',' || c == '\t' || c == '\n' || c == '\r' || c == '"' || c == '\'') {
      ++i;
      continue;
    }
    bool negative = false;
    if (c == '-') {
      negative = true;
      ++i;
    }
    std::size_t j = i;
    while (j < list.size() && is_digit(list[j])) ++j;
    if (j == i || j - i > 9) throw Error(ErrorCode::ParseFailure, "non-integer entry in: " + excerpt(list));
    int n = std::stoi(std::string(list.substr(i, j - i)));
    if (negative) n = -n;
    if (n < 1 || n > kCriteriaCount) {
      throw Error(ErrorCode::OutOfRange, "standard " + std::to_string(n) + " outside 1..7");
    }
    a.met.insert(n);
    i = j;
  }
  return a;
}

ScoreCard ScoreCard::from_assessments(std::array<CriteriaAssessment, 3> assessments) {
  ScoreCard card;
  card.assessments = std::move(assessments);
  double sum = 0;
  for (const auto& a : card.assessments) sum += static_cast<double>(a.met.size());
  card.final_score = sum / 3.0;
  return card;
}

Json ScoreCard::to_json() const {
  Json j;
  j["met_lists"] = Json::array();
  for (const auto& a : assessments) j["met_lists"].push_back(Json(std::vector<int>(a.met.begin(), a.met.end())));
  j["final_score"] = final_score;
  j["complexity"] = complexity ? Json(*complexity) : Json(nullptr);
  return j;
}

ScoreCard ScoreCard::from_json(const Json& j) {
  try {
    const auto& lists = j.at("met_lists");
    if (!lists.is_array() || lists.size() != 3) throw Error(ErrorCode::ParseFailure, "met_lists must hold 3 lists");
    std::array<CriteriaAssessment, 3> as;
    for (std::size_t i = 0; i < 3; ++i) {
      for (int n : lists[i].get<std::vector<int>>()) {
        if (n < 1 || n > kCriteriaCount) throw Error(ErrorCode::OutOfRange, "standard outside 1..7");
        as[i].met.insert(n);
      }
    }
    auto card = from_assessments(std::move(as));
    if (j.contains("complexity") && !j["complexity"].is_null()) card.complexity = j["complexity"].get<int>();
    return card;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("scorecard: ") + e.what());
  }
}

std::vector<CompletionRequest> scoring_requests(std::string_view prompt, const ScoringSettings& settings) {
  auto rendered = render(TemplateKind::plain(TemplateId::quality_filter), {{"prompt", std::string(prompt)}});
  std::vector<CompletionRequest> reqs;
  for (int i = 0; i < 3; ++i) {
    reqs.push_back({rendered.text, settings.model, settings.temperature, settings.max_tokens, i});
  }
  return reqs;
}

ScoreCard score_prompt(std::string_view prompt, const Gateway& gateway, Mode mode, const ScoringSettings& settings) {
  std::array<CriteriaAssessment, 3> as;
  auto reqs = scoring_requests(prompt, settings);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    try {
      as[i] = parse_standards_met(gateway.complete(reqs[i], mode).text);
    } catch (const Error& e) {
      throw Error(ErrorCode::ScoringIncomplete, "assessment " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return ScoreCard::from_assessments(std::move(as));
}

int parse_complexity(std::string_view input) {
  auto heading = text::ifind_last(input, "json output");
  if (heading == std::string_view::npos) {
    throw Error(ErrorCode::ParseFailure, "no Json Output section in: " + excerpt(text::trim(input)));
  }
  auto section = input.substr(heading);
  // Last top-level object in the section; nested objects are skipped with their parent.
  std::optional<nlohmann::json> found;
  std::size_t pos = 0;
  while ((pos = section.find('{', pos)) != std::string_view::npos) {
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = pos; i < section.size(); ++i) {
      const char ch = section[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (ch == '\\') escaped = true;
        else if (ch == '"') in_string = false;
      } else if (ch == '"') {
        in_string = true;
      } else if (ch == '{') {
        ++depth;
      } else if (ch == '}' && --depth == 0) {
        end = i;
        break;
      }
    }
    if (end == std::string_view::npos) break;
    auto j = nlohmann::json::parse(section.substr(pos, end - pos + 1), nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      found = std::move(j);
      pos = end + 1;
    } else {
      ++pos;
    }
  }
  if (!found) throw Error(ErrorCode::ParseFailure, "no JSON object after Json Output in: " + excerpt(section));

  for (const char* key : {"score", "difficulty", "complexity", "difficulty_score"}) {
    if (!found->contains(key)) continue;
    const auto& v = (*found)[key];
    double d = 0;
    if (v.is_number()) {
      d = v.get<double>();
    } else if (v.is_string()) {
      const auto s = v.get<std::string>();
      char* end = nullptr;
      d = std::strtod(s.c_str(), &end);
      if (end == s.c_str()) throw Error(ErrorCode::ParseFailure, "non-numeric score '" + s + "'");
    } else {
      throw Error(ErrorCode::ParseFailure, "non-numeric score in: " + excerpt(found->dump()));
    }
    if (d != std::floor(d)) throw Error(ErrorCode::ParseFailure, "non-integer score " + std::to_string(d));
    if (d < 1 || d > 10) throw Error(ErrorCode::OutOfRange, "score " + std::to_string(static_cast<long long>(d)) + " outside 1..10");
    return static_cast<int>(d);
  }
  throw Error(ErrorCode::ParseFailure, "no score field in: " + excerpt(found->dump()));
}

Json DistributionStats::to_json() const {
  Json j;
  j["count"] = count;
  j["mean"] = mean;
  j["median"] = median;
  j["std"] = std;
  return j;
}

DistributionStats distribution_stats(const std::vector<int>& scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "distribution_stats of an empty sequence");
  DistributionStats s;
  s.count = scores.size();
  long double sum = 0;
  for (int v : scores) sum += v;
  s.mean = static_cast<double>(sum / static_cast<long double>(s.count));
  long double sq = 0;
  for (int v : scores) sq += (v - static_cast<long double>(s.mean)) * (v - static_cast<long double>(s.mean));
  s.std = static_cast<double>(std::sqrt(sq / static_cast<long double>(s.count)));

  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const auto mid = s.count / 2;
  s.median = s.count % 2 ? sorted[mid] : (static_cast<double>(sorted[mid - 1]) + sorted[mid]) / 2.0;
  return s;
}

std::map<std::string, std::size_t> histogram(const std::vector<double>& values, int decimals) {
  std::map<std::string, std::size_t> out;
  for (double v : values) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    ++out[buf];
  }
  return out;
}

}  // namespace instforge
