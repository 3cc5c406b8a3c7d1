#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/error.hpp"

namespace groundfsa::text {

/// Connective keywords recognised inside a step.
enum class ClauseKind { Plain, Wait, After, Until, If, IfElse, Goto };

inline std::string_view to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::Plain:
      return "plain";
    case ClauseKind::Wait:
      return "wait";
    case ClauseKind::After:
      return "after";
    case ClauseKind::Until:
      return "until";
    case ClauseKind::If:
      return "if";
    case ClauseKind::IfElse:
      return "if_else";
    case ClauseKind::Goto:
      return "goto";
  }
  return "?";
}

/// Condition text built from verb phrases with the and/or/no/not keywords.
struct Phrase {
  enum class Op { Atom, Not, And, Or };
  Op op = Op::Atom;
  std::string text;
  std::vector<Phrase> operands;

  friend bool operator==(const Phrase&, const Phrase&) = default;
};

/// One keyword-driven chunk of a step.
///
///   Plain   verb_phrases = {VP1}
///   Wait    condition = VP1, verb_phrases = {} or {VP2}   ("wait VP1 VP2")
///   After   condition = VP1, verb_phrases = {VP2}         ("VP2 after VP1")
///   Until   condition = VP1, verb_phrases = {VP2}         ("VP2 until VP1")
///   If      condition = VP1, verb_phrases = {VP2}
///   IfElse  condition = VP1, verb_phrases = {VP2, VP3}
///   Goto    target_step = j
struct Clause {
  ClauseKind keyword = ClauseKind::Plain;
  std::optional<Phrase> condition;
  std::vector<std::string> verb_phrases;
  int target_step = 0;

  friend bool operator==(const Clause&, const Clause&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Trims whitespace and trailing sentence punctuation.
inline std::string strip_punctuation(std::string_view s) {
  std::string out = trim(s);
  while (!out.empty() && std::string_view(".,;:!?").find(out.back()) != std::string_view::npos) {
    out.pop_back();
    out = trim(out);
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Splits at sentence terminators followed by whitespace or end of text.
inline std::vector<std::string> sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool terminator = c == '.' || c == ';' || c == '!' || c == '?';
    const bool boundary = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (terminator && boundary) {
      if (auto s = strip_punctuation(cur); !s.empty()) out.push_back(std::move(s));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (auto s = strip_punctuation(cur); !s.empty()) out.push_back(std::move(s));
  return out;
}

inline std::vector<std::string> split_word(const std::string& s, const std::string& word) {
  std::vector<std::string> out;
  const std::regex sep("\\s+" + word + "\\s+");
  std::sregex_token_iterator it(s.begin(), s.end(), sep, -1);
  for (; it != std::sregex_token_iterator(); ++it) out.push_back(trim(it->str()));
  return out;
}

inline Phrase make_group(Phrase::Op op, std::vector<Phrase> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return Phrase{op, {}, std::move(parts)};
}

}  // namespace detail

/// Parses a condition phrase: `or` binds loosest, then `and`, then a
/// `no`/`not` anywhere in a conjunct negates it.
inline Phrase parse_phrase(std::string_view text) {
  std::string s = detail::lower(detail::strip_punctuation(text));
  s = std::regex_replace(s, std::regex("n't\\b"), " not");
  std::vector<Phrase> disjuncts;
  for (const auto& d : detail::split_word(s, "or")) {
    std::vector<Phrase> conjuncts;
    for (const auto& c : detail::split_word(d, "and")) {
      static const std::regex kNeg("(^|\\s)(no|not)(\\s|$)");
      if (std::regex_search(c, kNeg)) {
        const std::string positive = detail::trim(std::regex_replace(c, kNeg, " "));
        conjuncts.push_back(Phrase{Phrase::Op::Not, {}, {Phrase{Phrase::Op::Atom, positive, {}}}});
      } else {
        conjuncts.push_back(Phrase{Phrase::Op::Atom, c, {}});
      }
    }
    disjuncts.push_back(detail::make_group(Phrase::Op::And, std::move(conjuncts)));
  }
  return detail::make_group(Phrase::Op::Or, std::move(disjuncts));
}

/// Whether an action phrase is negated ("do not cross", "don't move").
inline bool is_negated_action(std::string_view vp) {
  static const std::regex kNeg("(^|\\s)(no|not|never|don't|do not)(\\s|$)");
  return std::regex_search(detail::lower(vp), kNeg);
}

namespace detail {

inline void chunk_sentence(const std::string& original, std::vector<Clause>& out) {
  const std::string s = [&] {
    std::string t = lower(strip_punctuation(original));
    if (t.starts_with("then ")) t = trim(t.substr(5));
    return t;
  }();
  std::smatch m;

  static const std::regex kGoto(
      "(?:^|\\s|,)(?:go|return|jump|loop)(?:\\s+back)?\\s+to\\s+step\\s+(\\d+)$|"
      "(?:^|\\s|,)repeat(?:\\s+from)?\\s+step\\s+(\\d+)$");
  if (std::regex_search(s, m, kGoto)) {
    std::string prefix = trim(s.substr(0, static_cast<std::size_t>(m.position(0))));
    prefix = std::regex_replace(prefix, std::regex("(\\s*,)?(\\s+and)?(\\s+then)?\\s*$"), "");
    prefix = strip_punctuation(prefix);
    if (!prefix.empty()) out.push_back(Clause{ClauseKind::Plain, std::nullopt, {prefix}, 0});
    const std::string digits = m[1].matched ? m[1].str() : m[2].str();
    out.push_back(Clause{ClauseKind::Goto, std::nullopt, {}, std::stoi(digits)});
    return;
  }
  if (std::regex_search(s, std::regex("(go|return|jump)\\s+to\\s+step\\s*$"))) throw UnparsableStep(original);

  static const std::regex kIfElse(
      "^if\\s+(.+?)\\s*,\\s*(?:then\\s+)?(.+?)\\s*,?\\s+(?:else|otherwise)\\s*,?\\s*(.+)$");
  static const std::regex kIfElseSuffix("^(.+?)\\s+if\\s+(.+?)\\s*,?\\s+(?:else|otherwise)\\s*,?\\s*(.+)$");
  if (std::regex_match(s, m, kIfElse)) {
    out.push_back(Clause{ClauseKind::IfElse, parse_phrase(m[1].str()), {trim(m[2].str()), trim(m[3].str())}, 0});
    return;
  }
  if (std::regex_match(s, m, kIfElseSuffix)) {
    out.push_back(Clause{ClauseKind::IfElse, parse_phrase(m[2].str()), {trim(m[1].str()), trim(m[3].str())}, 0});
    return;
  }

  static const std::regex kIfComma("^if\\s+(.+?)\\s*,\\s*(?:then\\s+)?(.+)$");
  static const std::regex kIfThen("^if\\s+(.+?)\\s+then\\s+(.+)$");
  static const std::regex kIfSuffix("^(.+?)\\s+if\\s+(.+)$");
  if (std::regex_match(s, m, kIfComma) || std::regex_match(s, m, kIfThen)) {
    out.push_back(Clause{ClauseKind::If, parse_phrase(m[1].str()), {trim(m[2].str())}, 0});
    return;
  }
  if (s.starts_with("if ") || s == "if") throw UnparsableStep(original);
  if (std::regex_match(s, m, kIfSuffix)) {
    out.push_back(Clause{ClauseKind::If, parse_phrase(m[2].str()), {trim(m[1].str())}, 0});
    return;
  }

  static const std::regex kWaitThen(
      "^wait\\s+(?:for\\s+|until\\s+)?(.+?)(?:\\s*,\\s*(?:and\\s+)?(?:then\\s+)?|\\s+(?:and\\s+)?then\\s+)(.+)$");
  static const std::regex kWait("^wait\\s+(?:for\\s+|until\\s+)?(.+)$");
  if (std::regex_match(s, m, kWaitThen)) {
    out.push_back(Clause{ClauseKind::Wait, parse_phrase(m[1].str()), {trim(m[2].str())}, 0});
    return;
  }
  if (std::regex_match(s, m, kWait)) {
    out.push_back(Clause{ClauseKind::Wait, parse_phrase(m[1].str()), {}, 0});
    return;
  }
  if (s == "wait") throw UnparsableStep(original);

  static const std::regex kAfterPrefix("^after\\s+(.+?)\\s*,\\s*(.+)$");
  static const std::regex kAfter("^(.+?)\\s+after\\s+(.+)$");
  if (std::regex_match(s, m, kAfterPrefix)) {
    out.push_back(Clause{ClauseKind::After, parse_phrase(m[1].str()), {trim(m[2].str())}, 0});
    return;
  }
  if (std::regex_match(s, m, kAfter)) {
    out.push_back(Clause{ClauseKind::After, parse_phrase(m[2].str()), {trim(m[1].str())}, 0});
    return;
  }

  static const std::regex kUntilPrefix("^until\\s+(.+?)\\s*,\\s*(.+)$");
  static const std::regex kUntil("^(.+?)\\s+until\\s+(.+)$");
  if (std::regex_match(s, m, kUntilPrefix)) {
    out.push_back(Clause{ClauseKind::Until, parse_phrase(m[1].str()), {trim(m[2].str())}, 0});
    return;
  }
  if (std::regex_match(s, m, kUntil)) {
    out.push_back(Clause{ClauseKind::Until, parse_phrase(m[2].str()), {trim(m[1].str())}, 0});
    return;
  }
  if (s.starts_with("after ") || s.starts_with("until ")) throw UnparsableStep(original);

  out.push_back(Clause{ClauseKind::Plain, std::nullopt, {s}, 0});
}

}  // namespace detail

/// Keyword-driven split of one step description into clauses. Sentences are
/// chunked independently, so "If A, B. If C, D." yields two if-clauses.
inline std::vector<Clause> chunk_step(std::string_view text) {
  const auto parts = detail::sentences(text);
  if (parts.empty()) throw UnparsableStep(std::string(text));
  std::vector<Clause> out;
  for (const auto& sentence : parts) detail::chunk_sentence(sentence, out);
  return out;
}

}  // namespace groundfsa::text
