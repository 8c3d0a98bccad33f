#pragma once

// Resource states |R> = (x)_j (alpha_j|psi> + beta_j|bot>), their dephasing
// sigma_R under random diagonal unitaries, and the measure-and-symmetrize
// protocol that prepares the same mixed state from k computational-basis
// measurements of |psi>.
//
// The space is (N+1)^k, row-major over factors (factor 0 is the most
// significant digit); digit N is bot.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <random>
#include <utility>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rng.hpp"

namespace xhogkit::symmetrize {

inline constexpr Index kMaxStateDim = Index{1} << 24;
inline constexpr Index kMaxDensityDim = 2048;

struct ResourceSpec {
  std::vector<std::pair<Complex, Complex>> coeffs;  // (alpha_j, beta_j)

  ResourceSpec() = default;
  explicit ResourceSpec(std::vector<std::pair<Complex, Complex>> c) : coeffs(std::move(c)) {
    detail::require<SizeError>(!coeffs.empty(), "ResourceSpec: need at least one factor");
    for (const auto& [a, b] : coeffs)
      detail::require(std::abs(std::norm(a) + std::norm(b) - 1.0) <= 1e-12,
                      "ResourceSpec: |alpha|^2 + |beta|^2 must be 1 for every factor");
  }

  /// k identical factors.
  static ResourceSpec uniform(int k, Complex alpha, Complex beta) {
    return ResourceSpec(std::vector<std::pair<Complex, Complex>>(static_cast<std::size_t>(k), {alpha, beta}));
  }

  static ResourceSpec random(int k, Rng& rng) {
    std::vector<std::pair<Complex, Complex>> c;
    for (int j = 0; j < k; ++j) {
      const Vector v = linalg::haar_vector(2, rng);
      c.emplace_back(v(0), v(1));
    }
    return ResourceSpec(std::move(c));
  }

  int k() const { return static_cast<int>(coeffs.size()); }
};

/// Coordinates of one basis string of [N] u {bot} per factor.
using ExtendedString = std::vector<Index>;

namespace detail_ {

inline Index checked_dim(Index base, int k, Index cap, const char* who) {
  Index d = 1;
  for (int j = 0; j < k; ++j) {
    detail::require<SizeError>(d <= cap / base, std::string(who) + ": (N+1)^k exceeds the dimension cap");
    d *= base;
  }
  return d;
}

inline ExtendedString digits(Index idx, Index base, int k) {
  ExtendedString d(static_cast<std::size_t>(k));
  for (int j = k - 1; j >= 0; --j) {
    d[static_cast<std::size_t>(j)] = idx % base;
    idx /= base;
  }
  return d;
}

inline Index index_of(const ExtendedString& d, Index base) {
  Index idx = 0;
  for (Index x : d) idx = idx * base + x;
  return idx;
}

/// Index of the sorted digit string: equal exactly for reorderings.
inline Index multiset_key(ExtendedString d, Index base) {
  std::sort(d.begin(), d.end());
  return index_of(d, base);
}

/// prod_j gamma_{zj}, gamma = alpha_j off bot and beta_j on bot.
inline Complex gamma_product(const ExtendedString& z, const ResourceSpec& spec, Index bot) {
  Complex g = 1.0;
  for (std::size_t j = 0; j < z.size(); ++j) g *= z[j] == bot ? spec.coeffs[j].second : spec.coeffs[j].first;
  return g;
}

inline void check_inputs(const PureState& psi, const ResourceSpec& spec) {
  detail::require<UsageError>(!psi.has_bot(), "symmetrize: psi must not carry a bot index");
  detail::require<SizeError>(spec.k() >= 1, "symmetrize: empty resource spec");
}

}  // namespace detail_

inline Index extended_space_dim(const PureState& psi, int k) {
  return detail_::checked_dim(psi.dim() + 1, k, kMaxStateDim, "extended_space_dim");
}

inline bool is_reordering(ExtendedString a, ExtendedString b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline PureState build_R(const PureState& psi, const ResourceSpec& spec) {
  detail_::check_inputs(psi, spec);
  (void)extended_space_dim(psi, spec.k());
  const Index N = psi.dim();
  Vector R = Vector::Ones(1);
  for (const auto& [a, b] : spec.coeffs) {
    Vector f(N + 1);
    f.head(N) = a * psi.amps();
    f(N) = b;
    R = linalg::kron(R, f);
  }
  return PureState::normalized(R);
}

/// Entry (x, y) is <x|R><R|y> when x is a reordering of y, else exactly 0.
inline DensityMatrix sigma_R_exact(const PureState& psi, const ResourceSpec& spec) {
  detail_::check_inputs(psi, spec);
  const Index base = psi.dim() + 1;
  const int k = spec.k();
  const Index D = detail_::checked_dim(base, k, kMaxDensityDim, "sigma_R_exact");
  const Vector R = build_R(psi, spec).amps();
  std::map<Index, std::vector<Index>> classes;
  for (Index x = 0; x < D; ++x) classes[detail_::multiset_key(detail_::digits(x, base, k), base)].push_back(x);
  Matrix s = Matrix::Zero(D, D);
  for (const auto& [key, members] : classes)
    for (Index x : members)
      for (Index y : members) s(x, y) = R(x) * std::conj(R(y));
  return DensityMatrix(std::move(s));
}

/// sigma_R by Monte Carlo over diagonal unitaries with uniform phases on [N]
/// and phase 1 on bot. Used only as an independent cross-check.
inline Matrix sigma_R_monte_carlo(const PureState& psi, const ResourceSpec& spec, std::int64_t samples, Rng& rng) {
  const Index base = psi.dim() + 1;
  const int k = spec.k();
  const Index D = detail_::checked_dim(base, k, kMaxDensityDim, "sigma_R_monte_carlo");
  const Vector R = build_R(psi, spec).amps();
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  Matrix acc = Matrix::Zero(D, D);
  std::vector<Complex> u(static_cast<std::size_t>(base));
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Index i = 0; i + 1 < base; ++i) u[static_cast<std::size_t>(i)] = std::polar(1.0, ph(rng));
    u[static_cast<std::size_t>(base - 1)] = 1.0;
    Vector v(D);
    for (Index x = 0; x < D; ++x) {
      Complex p = R(x);
      Index r = x;
      for (int j = 0; j < k; ++j) {
        p *= u[static_cast<std::size_t>(r % base)];
        r /= base;
      }
      v(x) = p;
    }
    acc += v * v.adjoint();
  }
  return acc / static_cast<double>(samples);
}

/// |zeta_Z> for the class Z of reorderings of `xbar`.
inline Vector zeta(const ExtendedString& xbar, const ResourceSpec& spec, Index base, Index D) {
  ExtendedString z = xbar;
  std::sort(z.begin(), z.end());
  Vector v = Vector::Zero(D);
  double norm2 = 0.0;
  do {
    const Complex g = detail_::gamma_product(z, spec, base - 1);
    v(detail_::index_of(z, base)) = g;
    norm2 += std::norm(g);
  } while (std::next_permutation(z.begin(), z.end()));
  detail::require<NumericalError>(norm2 > 0.0, "zeta: all reorderings have zero weight");
  return v / std::sqrt(norm2);
}

/// Exact output of the protocol: sum over measurement strings x in [N]^k and
/// bot-replacement masks, grouped by the class of reorderings of xbar.
inline DensityMatrix rho_R_protocol_exact(const PureState& psi, const ResourceSpec& spec) {
  detail_::check_inputs(psi, spec);
  const Index N = psi.dim();
  const Index base = N + 1;
  const int k = spec.k();
  detail::require<SizeError>(k <= 8, "rho_R_protocol_exact: at most 8 factors");
  const Index D = detail_::checked_dim(base, k, kMaxDensityDim, "rho_R_protocol_exact");

  std::map<Index, std::pair<double, ExtendedString>> prob;  // class key -> (Pr[Z], representative)
  const Index outcomes = detail_::checked_dim(N, k, kMaxStateDim, "rho_R_protocol_exact");
  for (Index xi = 0; xi < outcomes; ++xi) {
    const ExtendedString x = detail_::digits(xi, N, k);
    double px = 1.0;
    for (Index d : x) px *= psi.probability(d);
    if (px == 0.0) continue;
    for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
      ExtendedString xbar = x;
      double p = px;
      for (int j = 0; j < k; ++j) {
        const auto& [a, b] = spec.coeffs[static_cast<std::size_t>(j)];
        if ((mask >> j) & 1U) {
          xbar[static_cast<std::size_t>(j)] = N;
          p *= std::norm(b);
        } else {
          p *= std::norm(a);
        }
      }
      if (p == 0.0) continue;
      auto& slot = prob[detail_::multiset_key(xbar, base)];
      if (slot.second.empty()) slot.second = xbar;
      slot.first += p;
    }
  }

  Matrix rho = Matrix::Zero(D, D);
  for (const auto& [key, entry] : prob) {
    const Vector z = zeta(entry.second, spec, base, D);
    rho += entry.first * (z * z.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

/// One run of the protocol: measure k copies, replace each result by bot with
/// probability |beta_j|^2, output |zeta_Z>.
inline PureState rho_R_sample(const PureState& psi, const ResourceSpec& spec, Rng& rng) {
  detail_::check_inputs(psi, spec);
  const Index N = psi.dim();
  const Index base = N + 1;
  const int k = spec.k();
  const Index D = extended_space_dim(psi, k);
  ExtendedString xbar(static_cast<std::size_t>(k));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int j = 0; j < k; ++j) {
    const Index x = sample_born(psi.amps(), rng);
    const double pb = std::norm(spec.coeffs[static_cast<std::size_t>(j)].second);
    xbar[static_cast<std::size_t>(j)] = u(rng) < pb ? N : x;
  }
  return PureState(zeta(xbar, spec, base, D));
}

inline PureState rho_R_sample(const PureState& psi, const ResourceSpec& spec, Seed seed) {
  Rng rng = make_rng(seed);
  return rho_R_sample(psi, spec, rng);
}

/// ||sigma_R - rho_R||_max. Zero when the protocol prepares sigma_R.
inline double verify_symmetrization(const PureState& psi, const ResourceSpec& spec) {
  return linalg::max_abs(sigma_R_exact(psi, spec).matrix() - rho_R_protocol_exact(psi, spec).matrix());
}

}  // namespace xhogkit::symmetrize
