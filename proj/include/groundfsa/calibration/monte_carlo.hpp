#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "groundfsa/runtime/perception.hpp"

namespace groundfsa {

/// Synthetic detector: scores are uniform within segments chosen by mass;
/// each segment has its own probability that the condition is actually true.
struct ScoreSegment {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
  double p_true = 0.0;
};

class PiecewiseScoreModel {
 public:
  explicit PiecewiseScoreModel(std::vector<ScoreSegment> segments) : segments_(std::move(segments)) {
    double total = 0.0;
    for (const auto& s : segments_) {
      if (!(s.lo >= 0.0 && s.lo <= s.hi && s.hi <= 1.0)) throw std::invalid_argument("segment outside [0, 1]");
      if (!(s.mass >= 0.0) || !(s.p_true >= 0.0 && s.p_true <= 1.0)) {
        throw std::invalid_argument("segment mass must be nonnegative and p_true a probability");
      }
      total += s.mass;
    }
    if (!(total > 0.0)) throw std::invalid_argument("score model needs positive total mass");
    double acc = 0.0;
    for (auto& s : segments_) {
      s.mass /= total;
      acc += s.mass;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }

  const std::vector<ScoreSegment>& segments() const noexcept { return segments_; }

  /// Draws (truth, score) from three uniforms in [0, 1).
  std::pair<bool, double> draw(double u_segment, double u_score, double u_truth) const {
    const auto idx = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u_segment) - cumulative_.begin());
    const auto& s = segments_[std::min(idx, segments_.size() - 1)];
    return {u_truth < s.p_true, s.lo + (s.hi - s.lo) * u_score};
  }

  /// P[truth | score >= t]; empty when no mass lies at or above t.
  std::optional<double> accuracy_true(double t) const {
    return ratio([&](const ScoreSegment& s) { return fraction_at_least(s, t); }, true);
  }

  /// P[not truth | score <= f]; empty when no mass lies at or below f.
  std::optional<double> accuracy_false(double f) const {
    return ratio([&](const ScoreSegment& s) { return fraction_at_most(s, f); }, false);
  }

 private:
  static double fraction_at_least(const ScoreSegment& s, double t) {
    if (s.hi == s.lo) return s.lo >= t ? 1.0 : 0.0;
    return std::clamp((s.hi - t) / (s.hi - s.lo), 0.0, 1.0);
  }
  static double fraction_at_most(const ScoreSegment& s, double f) {
    if (s.hi == s.lo) return s.lo <= f ? 1.0 : 0.0;
    return std::clamp((f - s.lo) / (s.hi - s.lo), 0.0, 1.0);
  }

  template <typename Fn>
  std::optional<double> ratio(Fn&& fraction, bool want_true) const {
    double in = 0.0;
    double correct = 0.0;
    for (const auto& s : segments_) {
      const double w = s.mass * fraction(s);
      in += w;
      correct += w * (want_true ? s.p_true : 1.0 - s.p_true);
    }
    if (!(in > 0.0)) return std::nullopt;
    return correct / in;
  }

  std::vector<ScoreSegment> segments_;
  std::vector<double> cumulative_;
};

/// Event counts of the single-evaluation correctness argument: e1 the
/// condition holds, e2 evaluated true, e3 evaluated false, eu Unknown.
struct MonteCarloReport {
  std::uint64_t trials = 0;
  std::uint64_t n_e1 = 0;
  std::uint64_t n_e2 = 0;
  std::uint64_t n_e3 = 0;
  std::uint64_t n_eu = 0;
  std::uint64_t n_e2_e1 = 0;
  std::uint64_t n_e3_not_e1 = 0;

  double p_e2() const { return static_cast<double>(n_e2) / static_cast<double>(trials); }
  double p_e3() const { return static_cast<double>(n_e3) / static_cast<double>(trials); }
  double p_eu() const { return static_cast<double>(n_eu) / static_cast<double>(trials); }

  std::uint64_t n_certain() const { return n_e2 + n_e3; }

  /// Fraction of certain evaluations that were correct; empty (vacuous) when
  /// every evaluation was Unknown.
  std::optional<double> conditional_accuracy() const {
    if (n_certain() == 0) return std::nullopt;
    return static_cast<double>(n_e2_e1 + n_e3_not_e1) / static_cast<double>(n_certain());
  }

  /// P[eu] + P[e2 and e1] + P[e3 and not e1].
  double p_a1_unconditional() const {
    return static_cast<double>(n_eu + n_e2_e1 + n_e3_not_e1) / static_cast<double>(trials);
  }

  /// Binomial standard deviation of a proportion `p` estimated from the
  /// certain evaluations.
  double sigma(double p) const {
    if (n_certain() == 0) return 0.0;
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_certain()));
  }

  MonteCarloReport& operator+=(const MonteCarloReport& o) {
    trials += o.trials;
    n_e1 += o.n_e1;
    n_e2 += o.n_e2;
    n_e3 += o.n_e3;
    n_eu += o.n_eu;
    n_e2_e1 += o.n_e2_e1;
    n_e3_not_e1 += o.n_e3_not_e1;
    return *this;
  }

  friend bool operator==(const MonteCarloReport&, const MonteCarloReport&) = default;
};

inline constexpr std::uint64_t kMonteCarloMinTrials = 10000;
/// Trials per independently seeded RNG stream.
inline constexpr std::uint64_t kMonteCarloBlock = 4096;

namespace detail {

inline MonteCarloReport simulate_block(const PiecewiseScoreModel& model, const Thresholds& th, std::uint64_t seed,
                                       std::uint64_t block, std::uint64_t trials) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  MonteCarloReport r;
  r.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const double u1 = uniform(rng);
    const double u2 = uniform(rng);
    const double u3 = uniform(rng);
    const auto [truth, score] = model.draw(u1, u2, u3);
    r.n_e1 += truth ? 1 : 0;
    switch (classify_score(score, th)) {
      case TriBool::True:
        ++r.n_e2;
        r.n_e2_e1 += truth ? 1 : 0;
        break;
      case TriBool::False:
        ++r.n_e3;
        r.n_e3_not_e1 += truth ? 0 : 1;
        break;
      case TriBool::Unknown:
        ++r.n_eu;
        break;
    }
  }
  return r;
}

}  // namespace detail

/// Simulates `trials` evaluations of `model` under `th`. Trials are split into
/// fixed blocks, each with its own stream seeded from (seed, block index), so
/// the result does not depend on `threads`.
inline MonteCarloReport monte_carlo_a1(const PiecewiseScoreModel& model, const Thresholds& th, std::uint64_t trials,
                                       std::uint64_t seed, unsigned threads = 1) {
  th.validate();
  if (trials < kMonteCarloMinTrials) throw std::invalid_argument("monte_carlo_a1 needs at least 10000 trials");
  const std::uint64_t blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<MonteCarloReport> parts(blocks);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t b = first; b < blocks; b += stride) {
      const std::uint64_t n = std::min(kMonteCarloBlock, trials - b * kMonteCarloBlock);
      parts[b] = detail::simulate_block(model, th, seed, b, n);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  MonteCarloReport total;
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace groundfsa
