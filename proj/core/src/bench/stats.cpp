#include "stlrl/bench/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace stlrl {

namespace {

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

double fisher_exact(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const std::uint64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d, n = r1 + r2;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) {
    spdlog::debug("fisher_exact: degenerate margins, p = 1");
    return 1.0;
  }
  const double denom = log_choose(n, c1);
  auto prob = [&](std::uint64_t x) {
    return std::exp(log_choose(r1, x) + log_choose(r2, c1 - x) - denom);
  };
  const double observed = prob(a);
  const std::uint64_t lo = c1 > r2 ? c1 - r2 : 0;
  const std::uint64_t hi = std::min(r1, c1);
  double p = 0.0;
  for (std::uint64_t x = lo; x <= hi; ++x) {
    double px = prob(x);
    // Relative slack absorbs rounding between tables of equal probability.
    if (px <= observed * (1.0 + 1e-7)) p += px;
  }
  return std::min(p, 1.0);
}

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           MannWhitneyMode mode) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  // Mid-ranks (1-based) per distinct value, plus tie group sizes.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  std::map<double, double> rank_of;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    rank_of[sorted[i]] = 0.5 * static_cast<double>(i + 1 + j);
    double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) ranks[i] = rank_of[pooled[i]];

  const double offset = 0.5 * static_cast<double>(na) * static_cast<double>(na + 1);
  double ra = 0.0;
  for (std::size_t i = 0; i < na; ++i) ra += ranks[i];

  MannWhitney out;
  out.u = ra - offset;
  const double mean = 0.5 * static_cast<double>(na) * static_cast<double>(nb);
  const double dev = std::abs(out.u - mean);

  bool exact = mode == MannWhitneyMode::Exact || (mode == MannWhitneyMode::Auto && n <= 12);
  if (exact) {
    if (n > 20) throw std::invalid_argument("mann_whitney_u: exact mode limited to 20 values");
    std::uint64_t hits = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != na) continue;
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) r += ranks[i];
      }
      ++total;
      // Rank sums are multiples of 1/2, so the comparison is exact.
      if (std::abs(r - offset - mean) >= dev) ++hits;
    }
    out.p = static_cast<double>(hits) / static_cast<double>(total);
    out.exact = true;
    return out;
  }

  const double dn = static_cast<double>(n);
  const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                     ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    out.p = 1.0;
    return out;
  }
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  out.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[m];
  return 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace stlrl
