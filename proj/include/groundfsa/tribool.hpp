#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace groundfsa {

/// Strong Kleene truth value.
enum class TriBool : std::uint8_t { False, True, Unknown };

constexpr TriBool to_tribool(bool b) noexcept { return b ? TriBool::True : TriBool::False; }

constexpr bool is_definite(TriBool v) noexcept { return v != TriBool::Unknown; }

constexpr TriBool kleene_not(TriBool v) noexcept {
  switch (v) {
    case TriBool::True:
      return TriBool::False;
    case TriBool::False:
      return TriBool::True;
    default:
      return TriBool::Unknown;
  }
}

constexpr TriBool kleene_and(TriBool a, TriBool b) noexcept {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::True && b == TriBool::True) return TriBool::True;
  return TriBool::Unknown;
}

constexpr TriBool kleene_or(TriBool a, TriBool b) noexcept {
  if (a == TriBool::True || b == TriBool::True) return TriBool::True;
  if (a == TriBool::False && b == TriBool::False) return TriBool::False;
  return TriBool::Unknown;
}

constexpr std::string_view to_string(TriBool v) noexcept {
  switch (v) {
    case TriBool::True:
      return "true";
    case TriBool::False:
      return "false";
    default:
      return "unknown";
  }
}

inline std::ostream& operator<<(std::ostream& os, TriBool v) { return os << to_string(v); }

}  // namespace groundfsa
