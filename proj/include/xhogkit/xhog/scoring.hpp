#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rational.hpp"

namespace xhogkit::xhog {

/// 2^n * sum_z Pr[z] |<z|psi>|^2
inline double xeb_score_exact(std::span<const double> z_dist, const PureState& psi) {
  detail::require<DimensionMismatch>(static_cast<Index>(z_dist.size()) == psi.system_dim(),
                                     "xeb_score_exact: distribution length differs from 2^n");
  double total = 0.0, acc = 0.0;
  for (std::size_t z = 0; z < z_dist.size(); ++z) {
    detail::require(z_dist[z] >= 0.0, "xeb_score_exact: negative probability");
    total += z_dist[z];
    acc += z_dist[z] * psi.probability(static_cast<Index>(z));
  }
  detail::require(std::abs(total - 1.0) <= 1e-9, "xeb_score_exact: distribution does not sum to 1");
  return static_cast<double>(psi.system_dim()) * acc;
}

/// Per-trial score 2^n |<z|psi>|^2.
inline double xeb_score(Index z, const PureState& psi) {
  detail::require<SizeError>(z >= 0 && z < psi.system_dim(), "xeb_score: outcome out of range");
  return static_cast<double>(psi.system_dim()) * psi.probability(z);
}

/// Posterior mean (1+m)/(2^n+k) of an output probability seen m times in k
/// samples, under the flat Dirichlet prior of a Haar-random state.
inline Rational posterior_expectation(int m, int n, int k) {
  detail::require<SizeError>(n >= 0 && n <= 62, "posterior_expectation: n out of range");
  detail::require<UsageError>(k >= 0 && m >= 0 && m <= k, "posterior_expectation: need 0 <= m <= k");
  return Rational(Integer(1 + m), Integer(pow2_int(static_cast<unsigned>(n)) + k));
}

struct TrialRecord {
  std::int64_t trial = 0;
  Index z = 0;
  double score = 0.0;
  std::int64_t queries = 0;
};

struct XebEstimate {
  double b_mean = 0.0;
  double std_err = 0.0;
  std::int64_t trials = 0;
  int n = 0;
  std::string strategy_id;
  std::string family;
  std::int64_t total_queries = 0;
  std::int64_t max_trial_queries = 0;
  std::uint64_t master_seed = 0;
  bool query_legal = true;
  /// Set in exact-enumeration mode.
  std::optional<Rational> b_exact;
  std::vector<TrialRecord> per_trial;
};

/// Mean and standard error of the mean (sample standard deviation / sqrt(m)).
inline std::pair<double, double> mean_and_stderr(std::span<const double> xs) {
  detail::require<UsageError>(!xs.empty(), "mean_and_stderr: no samples");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace xhogkit::xhog
