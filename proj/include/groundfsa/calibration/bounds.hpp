#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace groundfsa {

namespace detail {

inline void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace detail

/// Lower bound on the probability that one certain evaluation is correct.
inline double single_evaluation_bound(double p_t, double p_f) {
  detail::check_probability(p_t, "p_t");
  detail::check_probability(p_f, "p_f");
  return std::min(p_t, p_f);
}

/// Lower bound on the probability that `n_max` certain evaluations are all
/// correct: the single-evaluation bound multiplied `n_max` times.
inline double all_certain_bound(double p_t, double p_f, std::uint64_t n_max) {
  const double base = single_evaluation_bound(p_t, p_f);
  double out = 1.0;
  for (std::uint64_t i = 0; i < n_max; ++i) out *= base;
  return out;
}

}  // namespace groundfsa
