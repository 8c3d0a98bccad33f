#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xhogkit::testing {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> xs) {
  double s = 0.0, s2 = 0.0;
  for (double x : xs) s += x;
  const double m = s / static_cast<double>(xs.size());
  for (double x : xs) s2 += (x - m) * (x - m);
  const double var = xs.size() > 1 ? s2 / static_cast<double>(xs.size() - 1) : 0.0;
  return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// Bernoulli frequency with its binomial standard error under the null p.
inline MeanSe frequency(std::int64_t hits, std::int64_t trials, double p_null) {
  return {static_cast<double>(hits) / static_cast<double>(trials),
          std::sqrt(p_null * (1.0 - p_null) / static_cast<double>(trials))};
}

inline bool within_sigma(const MeanSe& est, double expect, double k = 3.0) {
  return std::abs(est.mean - expect) <= k * est.se;
}

inline std::string describe(const MeanSe& est, double expect) {
  return "mean " + std::to_string(est.mean) + " se " + std::to_string(est.se) + " expected " + std::to_string(expect);
}

}  // namespace xhogkit::testing
