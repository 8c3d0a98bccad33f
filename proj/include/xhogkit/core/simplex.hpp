#pragma once

// Order statistics of the uniform distribution on the probability simplex,
// i.e. the Dirichlet(1, ..., 1) law of the output probabilities of a Haar
// state.

#include <cmath>
#include <random>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/core/rng.hpp"

namespace xhogkit {

class SimplexSample {
 public:
  explicit SimplexSample(std::vector<double> probs) : probs_(std::move(probs)) {
    detail::require<SizeError>(!probs_.empty(), "SimplexSample: need at least one bin");
    double s = 0.0;
    for (double p : probs_) {
      detail::require(p >= 0.0, "SimplexSample: negative probability");
      s += p;
    }
    detail::require(std::abs(s - 1.0) <= 1e-12, "SimplexSample: probabilities do not sum to 1");
  }

  std::size_t n_bins() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  double max() const {
    double m = probs_[0];
    for (double p : probs_) m = std::max(m, p);
    return m;
  }

 private:
  std::vector<double> probs_;
};

/// i.i.d. Exp(1) variates divided by their sum.
inline SimplexSample sample_uniform_simplex(std::size_t n_bins, Rng& rng) {
  detail::require<SizeError>(n_bins >= 1, "sample_uniform_simplex: n_bins must be >= 1");
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n_bins);
  double s = 0.0;
  for (auto& x : p) {
    x = e(rng);
    s += x;
  }
  for (auto& x : p) x /= s;
  // Fold the rounding residue into the largest entry so the sum is 1 to ~1 ulp.
  double r = 1.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    r -= p[i];
    if (p[i] > p[imax]) imax = i;
  }
  p[imax] += r;
  return SimplexSample(std::move(p));
}

inline SimplexSample sample_uniform_simplex(std::size_t n_bins, Seed seed) {
  Rng rng = make_rng(seed);
  return sample_uniform_simplex(n_bins, rng);
}

/// E[max_i p_i] for p uniform on the (N-1)-simplex, which is H_N / N.
inline Rational expected_max_simplex(unsigned n_bins) {
  detail::require<SizeError>(n_bins >= 1, "expected_max_simplex: n_bins must be >= 1");
  return harmonic_number(n_bins) / n_bins;
}

}  // namespace xhogkit
