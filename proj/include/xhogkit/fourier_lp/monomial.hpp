#pragma once

// Multilinear polynomials in the sign table of f: p(f) = sum_S c_S prod_{x in S} f(x).

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/oracles/sign_function.hpp"

namespace xhogkit::fourier_lp {

using oracles::SignFunction;

/// A set of inputs x in {0,1}^n, kept sorted and duplicate-free.
using Subset = std::vector<std::uint32_t>;

inline Subset make_subset(std::vector<std::uint32_t> xs) {
  std::sort(xs.begin(), xs.end());
  detail::require<UsageError>(std::adjacent_find(xs.begin(), xs.end()) == xs.end(), "Subset: repeated element");
  return xs;
}

/// XOR of the elements of S.
inline std::uint32_t xor_of(const Subset& s) {
  std::uint32_t acc = 0;
  for (auto x : s) acc ^= x;
  return acc;
}

/// Characteristic bits of S as a word; requires N <= 64.
inline std::uint64_t subset_mask(const Subset& s) {
  std::uint64_t m = 0;
  for (auto x : s) m |= std::uint64_t{1} << x;
  return m;
}

/// prod_{x in S} f(x) where bit x of `fbits` set means f(x) = -1.
inline int chi(std::uint64_t fbits, std::uint64_t smask) { return (__builtin_popcountll(fbits & smask) & 1) ? -1 : 1; }

inline int chi(const SignFunction& f, const Subset& s) {
  int v = 1;
  for (auto x : s) v *= f(x);
  return v;
}

inline std::string subset_to_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// All subsets of {0..N-1} of size `size`, lexicographic.
inline std::vector<Subset> subsets_of_size(std::uint32_t N, std::uint32_t size) {
  std::vector<Subset> out;
  if (size > N) return out;
  Subset cur(size);
  for (std::uint32_t i = 0; i < size; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = static_cast<int>(size) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == N - size + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

class MonomialPoly {
 public:
  MonomialPoly() = default;
  MonomialPoly(int n, int deg_cap) : n_(n), deg_cap_(deg_cap) {
    detail::require<SizeError>(n >= 1 && n <= 6, "MonomialPoly: n must be in [1, 6]");
    detail::require<SizeError>(deg_cap >= 0, "MonomialPoly: negative degree cap");
  }

  static MonomialPoly constant(int n, const Rational& c, int deg_cap = 0) {
    MonomialPoly p(n, deg_cap);
    p.set({}, c);
    return p;
  }

  int n() const { return n_; }
  int deg_cap() const { return deg_cap_; }
  std::uint32_t N() const { return std::uint32_t{1} << n_; }
  const std::map<Subset, Rational>& coeffs() const { return coeffs_; }

  Rational coeff(const Subset& s) const {
    const auto it = coeffs_.find(s);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  /// Zero coefficients are not stored.
  void set(const Subset& s, const Rational& c) {
    detail::require<SizeError>(static_cast<int>(s.size()) <= deg_cap_,
                               "MonomialPoly: monomial " + subset_to_string(s) + " exceeds the degree cap");
    for (auto x : s) detail::require<SizeError>(x < N(), "MonomialPoly: element out of range");
    detail::require<UsageError>(std::is_sorted(s.begin(), s.end()) &&
                                    std::adjacent_find(s.begin(), s.end()) == s.end(),
                                "MonomialPoly: subset must be sorted and duplicate-free");
    if (c == 0) coeffs_.erase(s);
    else coeffs_[s] = c;
  }

  void add(const Subset& s, const Rational& c) { set(s, coeff(s) + c); }

  Rational evaluate(const SignFunction& f) const {
    detail::require<DimensionMismatch>(f.n() == n_, "MonomialPoly::evaluate: arity mismatch");
    Rational v = 0;
    for (const auto& [s, c] : coeffs_) v += chi(f, s) == 1 ? c : Rational(-c);
    return v;
  }

  Rational evaluate_bits(std::uint64_t fbits) const {
    Rational v = 0;
    for (const auto& [s, c] : coeffs_) v += chi(fbits, subset_mask(s)) == 1 ? c : Rational(-c);
    return v;
  }

  /// q(f) = p(f . chi_z): every c_S picks up (-1)^{(xor S) . z}.
  MonomialPoly shifted(std::uint32_t z) const {
    MonomialPoly q(n_, deg_cap_);
    for (const auto& [s, c] : coeffs_) q.coeffs_[s] = oracles::dot_parity(xor_of(s), z) ? Rational(-c) : c;
    return q;
  }

  friend bool operator==(const MonomialPoly& a, const MonomialPoly& b) {
    return a.n_ == b.n_ && a.deg_cap_ == b.deg_cap_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int n_ = 1;
  int deg_cap_ = 0;
  std::map<Subset, Rational> coeffs_;
};

/// Output probabilities p_z, one polynomial per z.
using PolyFamily = std::vector<MonomialPoly>;

/// f -> fhat(z)^2 = 1/N + sum_{x<y} (2/N^2) (-1)^{(x xor y).z} f(x) f(y).
inline MonomialPoly fourier_square_poly(int n, std::uint32_t z) {
  MonomialPoly p(n, 2);
  const std::uint32_t N = p.N();
  p.set({}, Rational(1, N));
  const Rational c(2, Integer(N) * N);
  for (std::uint32_t x = 0; x < N; ++x)
    for (std::uint32_t y = x + 1; y < N; ++y) p.set({x, y}, oracles::dot_parity(x ^ y, z) ? Rational(-c) : c);
  return p;
}

/// Output distribution of the one-query Fourier Sampling algorithm.
inline PolyFamily naive_family(int n) {
  PolyFamily fam;
  for (std::uint32_t z = 0; z < (std::uint32_t{1} << n); ++z) fam.push_back(fourier_square_poly(n, z));
  return fam;
}

inline void check_family(const PolyFamily& fam) {
  detail::require<UsageError>(!fam.empty(), "polynomial family is empty");
  const int n = fam.front().n();
  detail::require<UsageError>(fam.size() == (std::size_t{1} << n), "polynomial family must have one member per z");
  for (const auto& p : fam)
    detail::require<UsageError>(p.n() == n && p.deg_cap() == fam.front().deg_cap(),
                                "polynomial family members disagree on n or degree cap");
}

/// p = p'_{0^n} with p'_z(f) = (1/N) sum_y p_{y xor z}(f . chi_y), i.e.
/// c_S = (1/N) sum_y c_{y,S} (-1)^{(xor S).y}. The whole symmetrized family is
/// recovered as p'_z = p.shifted(z).
inline MonomialPoly symmetrize_family(const PolyFamily& fam) {
  check_family(fam);
  const int n = fam.front().n();
  const std::uint32_t N = std::uint32_t{1} << n;
  MonomialPoly p(n, fam.front().deg_cap());
  for (std::uint32_t y = 0; y < N; ++y)
    for (const auto& [s, c] : fam[y].coeffs()) p.add(s, oracles::dot_parity(xor_of(s), y) ? Rational(-c / N) : Rational(c / N));
  return p;
}

inline PolyFamily expand_symmetric(const MonomialPoly& p) {
  PolyFamily fam;
  for (std::uint32_t z = 0; z < p.N(); ++z) fam.push_back(p.shifted(z));
  return fam;
}

/// (1/2^N) sum_f sum_z p_z(f) fhat(z)^2, by enumeration (n <= 4).
inline Rational family_objective(const PolyFamily& fam) {
  check_family(fam);
  const int n = fam.front().n();
  detail::require<SizeError>(n <= 4, "family_objective: enumeration needs n <= 4");
  const std::uint32_t N = std::uint32_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << N;
  Rational acc = 0;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::vector<std::int64_t> w(N);
    for (std::uint32_t x = 0; x < N; ++x) w[x] = ((bits >> x) & 1U) ? -1 : 1;
    oracles::walsh_hadamard_inplace(w);
    for (std::uint32_t z = 0; z < N; ++z) {
      if (w[z] == 0) continue;
      acc += fam[z].evaluate_bits(bits) * Rational(w[z] * w[z], static_cast<std::int64_t>(N) * N);
    }
  }
  return acc / count;
}

struct FamilyCheck {
  bool nonnegative = true;
  bool sums_to_one = true;
};

/// Whether the family is a probability distribution over z for every f (n <= 4).
inline FamilyCheck check_distribution(const PolyFamily& fam) {
  check_family(fam);
  const int n = fam.front().n();
  detail::require<SizeError>(n <= 4, "check_distribution: enumeration needs n <= 4");
  const std::uint64_t count = std::uint64_t{1} << (std::uint32_t{1} << n);
  FamilyCheck out;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    Rational total = 0;
    for (const auto& p : fam) {
      const Rational v = p.evaluate_bits(bits);
      if (v < 0) out.nonnegative = false;
      total += v;
    }
    if (total != 1) out.sums_to_one = false;
  }
  return out;
}

}  // namespace xhogkit::fourier_lp
