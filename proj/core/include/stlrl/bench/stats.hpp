#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stlrl {

/// Two-sided Fisher exact test on [[a, b], [c, d]]: total probability of
/// the tables with the observed margins that are no more likely than the
/// observed one. Returns 1 when a row or column total is zero.
double fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

enum class MannWhitneyMode { Auto, Exact, Normal };

struct MannWhitney {
  double u = 0.0;  // U of the first sample; ties count 1/2
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Mann-Whitney U test. Auto uses the exact permutation distribution when
/// the samples hold at most 12 values together, otherwise the normal
/// approximation with tie and continuity correction. Throws
/// std::invalid_argument on an empty sample, or in Exact mode above 20
/// values.
MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           MannWhitneyMode mode = MannWhitneyMode::Auto);

/// Median; an even count averages the two middle values. Throws on empty input.
double median(std::vector<double> xs);

/// Episode count of a trial for aggregation: the falsifying episode, or
/// the full budget for a failed trial.
inline double capped_episodes(bool success, std::size_t episodes, std::size_t budget) {
  return static_cast<double>(success ? episodes : budget);
}

}  // namespace stlrl
