#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>

#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"

namespace groundfsa {

/// Invariant specification `G body`. Body atoms are condition propositions
/// or `act:<action>` atoms.
struct Spec {
  Formula body;

  std::string to_string() const { return "G " + groundfsa::to_string(body); }

  friend bool operator==(const Spec&, const Spec&) = default;
};

/// Parses `G <formula>`; parentheses around the body are optional.
inline Spec parse_spec(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= text.size() || text[pos] != 'G') throw SyntaxError("expected 'G'", pos);
  ++pos;
  if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
      text[pos] != '!') {
    throw SyntaxError("expected whitespace or '(' after 'G'", pos);
  }
  try {
    return Spec{parse_formula(text.substr(pos), ParseOptions{true})};
  } catch (const SyntaxError& e) {
    throw SyntaxError(std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position")),
                      e.position() + pos);
  }
}

}  // namespace groundfsa
