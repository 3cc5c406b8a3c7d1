#pragma once

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/tribool.hpp"

namespace groundfsa {

/// Spelling of the reserved uncertainty atom in formulas.
inline constexpr std::string_view kUncAtom = "UNC";
/// Prefix that marks action atoms inside specification formulas.
inline constexpr std::string_view kActionPrefix = "act:";

using BoolValuation = std::map<std::string, bool, std::less<>>;
using TriValuation = std::map<std::string, TriBool, std::less<>>;

/// Immutable propositional formula over named atoms and the reserved UNC atom.
///
/// Nodes are shared, so copies are cheap. Conjunctions and disjunctions are
/// n-ary; the factory helpers `make_and`/`make_or`/`negate` fold constants and
/// flatten, while the raw constructors keep the tree exactly as given (the
/// parser uses those so that printing and re-parsing is structurally exact).
class Formula {
 public:
  enum class Kind { Const, Atom, Unc, Not, And, Or };

  Formula() : Formula(constant(true)) {}

  static Formula constant(bool value) {
    return Formula(std::make_shared<const Node>(Node{Kind::Const, value, {}, {}}));
  }
  static Formula atom(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, false, std::move(name), {}}));
  }
  static Formula unc() {
    return Formula(std::make_shared<const Node>(Node{Kind::Unc, false, {}, {}}));
  }
  static Formula negation(Formula operand) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, false, {}, {std::move(operand)}}));
  }
  static Formula conjunction(std::vector<Formula> operands) {
    return Formula(std::make_shared<const Node>(Node{Kind::And, false, {}, std::move(operands)}));
  }
  static Formula disjunction(std::vector<Formula> operands) {
    return Formula(std::make_shared<const Node>(Node{Kind::Or, false, {}, std::move(operands)}));
  }

  Kind kind() const noexcept { return node_->kind; }
  bool value() const noexcept { return node_->value; }
  const std::string& name() const noexcept { return node_->name; }
  std::span<const Formula> operands() const noexcept { return node_->operands; }

  bool is_true() const noexcept { return kind() == Kind::Const && value(); }
  bool is_false() const noexcept { return kind() == Kind::Const && !value(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.value() != b.value() || a.name() != b.name()) return false;
    auto lhs = a.operands();
    auto rhs = b.operands();
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (!(lhs[i] == rhs[i])) return false;
    }
    return true;
  }

 private:
  struct Node {
    Kind kind;
    bool value;
    std::string name;
    std::vector<Formula> operands;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Construction helpers

namespace detail {

inline void flatten_into(Formula::Kind kind, const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    for (const auto& g : f.operands()) flatten_into(kind, g, out);
  } else {
    out.push_back(f);
  }
}

inline Formula make_nary(Formula::Kind kind, std::vector<Formula> operands) {
  // `absorbing` is false for conjunction and true for disjunction.
  const bool absorbing = kind == Formula::Kind::Or;
  std::vector<Formula> flat;
  for (const auto& f : operands) flatten_into(kind, f, flat);
  std::vector<Formula> kept;
  for (auto& f : flat) {
    if (f.kind() == Formula::Kind::Const) {
      if (f.value() == absorbing) return Formula::constant(absorbing);
      continue;
    }
    kept.push_back(std::move(f));
  }
  if (kept.empty()) return Formula::constant(!absorbing);
  if (kept.size() == 1) return kept.front();
  return kind == Formula::Kind::And ? Formula::conjunction(std::move(kept))
                                    : Formula::disjunction(std::move(kept));
}

}  // namespace detail

inline Formula make_and(std::vector<Formula> operands) {
  return detail::make_nary(Formula::Kind::And, std::move(operands));
}
inline Formula make_and(Formula a, Formula b) { return make_and(std::vector<Formula>{std::move(a), std::move(b)}); }

inline Formula make_or(std::vector<Formula> operands) {
  return detail::make_nary(Formula::Kind::Or, std::move(operands));
}
inline Formula make_or(Formula a, Formula b) { return make_or(std::vector<Formula>{std::move(a), std::move(b)}); }

/// Negation pushed through connectives (negation normal form for the
/// negated part); double negations cancel and constants fold.
inline Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return Formula::constant(!f.value());
    case Formula::Kind::Atom:
    case Formula::Kind::Unc:
      return Formula::negation(f);
    case Formula::Kind::Not:
      return f.operands().front();
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> negated;
      for (const auto& g : f.operands()) negated.push_back(negate(g));
      return f.kind() == Formula::Kind::And ? make_or(std::move(negated)) : make_and(std::move(negated));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Inspection

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Atom) out.insert(f.name());
  for (const auto& g : f.operands()) collect_atoms(g, out);
}

/// Named atoms of `f`; the UNC atom is not included.
inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

/// Named atoms in order of first occurrence.
inline void atoms_in_order(const Formula& f, std::vector<std::string>& out) {
  if (f.kind() == Formula::Kind::Atom) {
    for (const auto& a : out) {
      if (a == f.name()) return;
    }
    out.push_back(f.name());
  }
  for (const auto& g : f.operands()) atoms_in_order(g, out);
}

inline bool contains_unc(const Formula& f) {
  if (f.kind() == Formula::Kind::Unc) return true;
  for (const auto& g : f.operands()) {
    if (contains_unc(g)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Classical evaluation. The UNC atom takes `unc_value` (false unless a
/// caller explores the uncertain branch explicitly).
inline bool eval_classical(const Formula& f, const BoolValuation& v, bool unc_value = false) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f.value();
    case Formula::Kind::Unc:
      return unc_value;
    case Formula::Kind::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) throw UnboundAtom(f.name());
      return it->second;
    }
    case Formula::Kind::Not:
      return !eval_classical(f.operands().front(), v, unc_value);
    case Formula::Kind::And:
      for (const auto& g : f.operands()) {
        if (!eval_classical(g, v, unc_value)) return false;
      }
      return true;
    case Formula::Kind::Or:
      for (const auto& g : f.operands()) {
        if (eval_classical(g, v, unc_value)) return true;
      }
      return false;
  }
  return false;
}

namespace detail {

inline TriBool eval_kleene(const Formula& f, const TriValuation& v, TriBool unc) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return to_tribool(f.value());
    case Formula::Kind::Unc:
      return unc;
    case Formula::Kind::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) throw UnboundAtom(f.name());
      return it->second;
    }
    case Formula::Kind::Not:
      return kleene_not(eval_kleene(f.operands().front(), v, unc));
    case Formula::Kind::And: {
      // Every operand is evaluated so unbound atoms are always reported.
      TriBool acc = TriBool::True;
      for (const auto& g : f.operands()) acc = kleene_and(acc, eval_kleene(g, v, unc));
      return acc;
    }
    case Formula::Kind::Or: {
      TriBool acc = TriBool::False;
      for (const auto& g : f.operands()) acc = kleene_or(acc, eval_kleene(g, v, unc));
      return acc;
    }
  }
  return TriBool::Unknown;
}

}  // namespace detail

/// Strong Kleene evaluation. The UNC atom is True iff some entry of `v` is
/// Unknown, and False otherwise.
inline TriBool eval_three_valued(const Formula& f, const TriValuation& v) {
  bool any_unknown = false;
  for (const auto& [name, value] : v) {
    if (value == TriBool::Unknown) {
      any_unknown = true;
      break;
    }
  }
  return detail::eval_kleene(f, v, to_tribool(any_unknown));
}

/// Truth-table equivalence over the union of atoms (and UNC).
inline bool logically_equivalent(const Formula& a, const Formula& b) {
  std::set<std::string> names = atoms(a);
  collect_atoms(b, names);
  const std::vector<std::string> order(names.begin(), names.end());
  if (order.size() > 20) throw std::invalid_argument("too many atoms for truth-table check");
  const std::size_t rows = std::size_t{1} << order.size();
  for (std::size_t bits = 0; bits < rows; ++bits) {
    BoolValuation v;
    for (std::size_t i = 0; i < order.size(); ++i) v[order[i]] = ((bits >> i) & 1U) != 0;
    for (bool unc : {false, true}) {
      if (eval_classical(a, v, unc) != eval_classical(b, v, unc)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Text form:  expr := atom | "!" expr | expr "&" expr | expr "|" expr
//                   | "(" expr ")" | "true" | "false" | "UNC"

namespace detail {

inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Or:
      return 1;
    case Formula::Kind::And:
      return 2;
    case Formula::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

inline void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      out += f.value() ? "true" : "false";
      return;
    case Formula::Kind::Unc:
      out += kUncAtom;
      return;
    case Formula::Kind::Atom:
      out += f.name();
      return;
    case Formula::Kind::Not: {
      const auto& g = f.operands().front();
      out += '!';
      if (precedence(g) < 3) {
        out += '(';
        print(g, out);
        out += ')';
      } else {
        print(g, out);
      }
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const int own = precedence(f);
      const char* sep = f.kind() == Formula::Kind::And ? " & " : " | ";
      bool first = true;
      for (const auto& g : f.operands()) {
        if (!first) out += sep;
        first = false;
        // Same-kind children are bracketed so nesting survives a round trip.
        if (precedence(g) <= own) {
          out += '(';
          print(g, out);
          out += ')';
        } else {
          print(g, out);
        }
      }
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

struct ParseOptions {
  /// Accept `act:<name>` atoms (specification formulas).
  bool action_atoms = false;
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

  Formula parse() {
    Formula f = parse_or();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept('|')) parts.push_back(parse_and());
    return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (accept('&')) parts.push_back(parse_unary());
    return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    if (accept('!')) return Formula::negation(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of formula", pos_);
    if (accept('(')) {
      Formula inner = parse_or();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    const std::size_t start = pos_;
    std::string word;
    if (options_.action_atoms && text_.substr(pos_).starts_with(kActionPrefix)) {
      word = kActionPrefix;
      pos_ += kActionPrefix.size();
    }
    const std::size_t ident_start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == ident_start) throw SyntaxError("expected atom", start);
    const std::string_view ident = text_.substr(ident_start, pos_ - ident_start);
    word += ident;
    if (word == "true") return Formula::constant(true);
    if (word == "false") return Formula::constant(false);
    if (word == kUncAtom) return Formula::unc();
    if (!std::islower(static_cast<unsigned char>(ident.front()))) {
      throw SyntaxError("atom '" + std::string(ident) + "' must start with a lowercase letter", ident_start);
    }
    for (char c : ident) {
      if (std::isupper(static_cast<unsigned char>(c))) {
        throw SyntaxError("atom '" + std::string(ident) + "' must be lowercase", ident_start);
      }
    }
    return Formula::atom(std::move(word));
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, ParseOptions options = {}) {
  return detail::FormulaParser(text, options).parse();
}

}  // namespace groundfsa
