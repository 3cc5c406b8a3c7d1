#pragma once

#include <algorithm>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/text/canonical.hpp"
#include "groundfsa/text/transcript.hpp"

namespace groundfsa::text {

/// Precondition and effect of one action, taken from a PDDL-style completion.
struct ActionSchema {
  std::string name;
  Formula precondition = Formula::constant(true);
  Formula effect = Formula::constant(true);
  /// Parameter declarations as written, e.g. "?b - block". Not interpreted.
  std::vector<std::string> parameters;
  /// Quoted action phrase from the prompt, when present.
  std::string display_text;
};

namespace detail {

struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
    if (text_[pos_] == ')') throw SyntaxError("unbalanced ')'", pos_);
    if (text_[pos_] == '(') {
      ++pos_;
      SExpr list;
      list.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw SyntaxError("missing ')'", pos_);
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    SExpr sym;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      sym.symbol += text_[pos_++];
    }
    return sym;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string lower_symbol(const SExpr& e) { return lower(e.symbol); }

inline Formula atom_from_symbols(const std::vector<std::string>& parts, const SynonymTable& synonyms) {
  std::string joined;
  for (const auto& p : parts) {
    if (p.starts_with("?")) continue;
    if (!joined.empty()) joined += ' ';
    joined += p;
  }
  try {
    return Formula::atom(canonicalize(joined, synonyms));
  } catch (const std::invalid_argument&) {
    throw UnsupportedConstruct("predicate without a name: '" + joined + "'");
  }
}

inline Formula to_formula(const SExpr& e, const SynonymTable& synonyms) {
  if (!e.is_list) return atom_from_symbols({e.symbol}, synonyms);
  if (e.items.empty()) return Formula::constant(true);
  const auto& head = e.items.front();
  if (head.is_list) throw UnsupportedConstruct("nested list in predicate position");
  const std::string op = lower_symbol(head);
  std::vector<Formula> args;
  auto sub = [&] {
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(to_formula(e.items[i], synonyms));
  };
  if (op == "and") {
    sub();
    return make_and(std::move(args));
  }
  if (op == "or") {
    sub();
    return make_or(std::move(args));
  }
  if (op == "not") {
    if (e.items.size() != 2) throw UnsupportedConstruct("'not' takes exactly one operand");
    return negate(to_formula(e.items[1], synonyms));
  }
  static const std::vector<std::string> kUnsupported = {"forall", "exists", "when",   "imply",    "=",
                                                        "<",      ">",      "<=",     ">=",       "increase",
                                                        "decrease", "assign", "either", "preference"};
  if (std::find(kUnsupported.begin(), kUnsupported.end(), op) != kUnsupported.end()) {
    throw UnsupportedConstruct("unsupported PDDL construct '" + op + "'");
  }
  std::vector<std::string> parts;
  for (const auto& item : e.items) {
    if (item.is_list) throw UnsupportedConstruct("nested list inside predicate '" + op + "'");
    parts.push_back(item.symbol);
  }
  return atom_from_symbols(parts, synonyms);
}

/// Several top-level expressions form a conjunction; an empty field is true.
inline Formula parse_condition_field(std::string_view text, const SynonymTable& synonyms) {
  std::vector<Formula> parts;
  for (const auto& e : SExprReader(text).read_all()) parts.push_back(to_formula(e, synonyms));
  return make_and(std::move(parts));
}

inline std::vector<std::string> parse_parameters(std::string_view text) {
  std::vector<std::string> out;
  std::vector<std::string> pending;
  std::vector<std::string> tokens;
  for (const auto& e : SExprReader(text).read_all()) {
    if (e.is_list) {
      for (const auto& item : e.items) tokens.push_back(item.symbol);
    } else {
      tokens.push_back(e.symbol);
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "-" && i + 1 < tokens.size()) {
      for (auto& v : pending) out.push_back(v + " - " + tokens[i + 1]);
      pending.clear();
      ++i;
    } else {
      pending.push_back(tokens[i]);
    }
  }
  for (auto& v : pending) out.push_back(v);
  return out;
}

}  // namespace detail

/// Parses an Action/Parameters/Precondition/Effect completion. Atom and action
/// names are canonicalized; `(at other_side)` becomes `at_other_side` and
/// `?variables` are dropped.
inline ActionSchema parse_pddl_action(const Transcript& t, const SynonymTable& synonyms = {}) {
  static const std::regex kField("^\\s*(action|parameters|precondition|effect)\\s*:\\s*(.*)$", std::regex::icase);
  std::optional<std::string> name;
  std::optional<std::string> pre;
  std::optional<std::string> eff;
  std::optional<std::string> params;
  for (const auto& block : t.completion_blocks) {
    for (const auto& line : detail::lines(block)) {
      std::smatch m;
      if (!std::regex_match(line, m, kField)) continue;
      const auto field = detail::lower(m[1].str());
      auto value = detail::trim(m[2].str());
      if (field == "action") name = value;
      if (field == "parameters") params = value;
      if (field == "precondition") pre = value;
      if (field == "effect") eff = value;
    }
  }
  if (!name || name->empty()) throw MissingField("Action");
  if (!pre) throw MissingField("Precondition");
  if (!eff) throw MissingField("Effect");

  ActionSchema schema;
  try {
    schema.name = canonicalize(detail::strip_punctuation(*name), synonyms);
  } catch (const std::invalid_argument&) {
    throw MissingField("Action");
  }
  schema.precondition = detail::parse_condition_field(*pre, synonyms);
  schema.effect = detail::parse_condition_field(*eff, synonyms);
  if (params) schema.parameters = detail::parse_parameters(*params);
  static const std::regex kQuoted("\"([^\"]+)\"");
  for (const auto& p : t.prompt_blocks) {
    std::smatch m;
    if (std::regex_search(p, m, kQuoted)) {
      schema.display_text = m[1].str();
      break;
    }
  }
  return schema;
}

}  // namespace groundfsa::text
