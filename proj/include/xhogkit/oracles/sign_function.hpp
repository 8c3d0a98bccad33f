#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/core/rng.hpp"

namespace xhogkit::oracles {

/// Parity of the bitwise AND, i.e. x . z mod 2.
inline int dot_parity(std::uint64_t x, std::uint64_t z) { return __builtin_popcountll(x & z) & 1; }

/// Boolean function {0,1}^n -> {-1,+1} stored as its length-2^n sign table.
class SignFunction {
 public:
  SignFunction() = default;

  SignFunction(int n, std::vector<std::int8_t> table) : n_(n), table_(std::move(table)) {
    detail::require<SizeError>(n_ >= 1 && n_ <= kMaxQubits, "SignFunction: n must be in [1, 14]");
    detail::require<SizeError>(table_.size() == (std::size_t{1} << n_), "SignFunction: table length must be 2^n");
    for (auto s : table_) detail::require(s == 1 || s == -1, "SignFunction: entries must be +1 or -1");
  }

  static SignFunction constant(int n, int sign = 1) {
    return {n, std::vector<std::int8_t>(std::size_t{1} << n, static_cast<std::int8_t>(sign))};
  }

  /// chi_y(x) = (-1)^{x . y}
  static SignFunction character(int n, std::uint64_t y) {
    std::vector<std::int8_t> t(std::size_t{1} << n);
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = dot_parity(x, y) ? -1 : 1;
    return {n, std::move(t)};
  }

  /// Bit x of `bits` set means f(x) = -1. Enumerates F_n as bits = 0 .. 2^N - 1.
  static SignFunction from_bits(int n, std::uint64_t bits) {
    detail::require<SizeError>(n >= 1 && n <= 6, "SignFunction::from_bits: n must be in [1, 6]");
    std::vector<std::int8_t> t(std::size_t{1} << n);
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = ((bits >> x) & 1U) ? -1 : 1;
    return {n, std::move(t)};
  }

  static SignFunction random(int n, Rng& rng) {
    std::vector<std::int8_t> t(std::size_t{1} << n);
    std::bernoulli_distribution coin(0.5);
    for (auto& s : t) s = coin(rng) ? -1 : 1;
    return {n, std::move(t)};
  }

  /// Lowercase hex of the sign bits (bit = 1 means -1), read as an N-bit
  /// integer whose most significant bit is x = 0^n. Width is ceil(N/4) digits.
  std::string to_hex() const {
    const std::size_t N = table_.size();
    const std::size_t digits = (N + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t x = 0; x < N; ++x) {
      if (table_[x] != -1) continue;
      const std::size_t pos = N - 1 - x;  // bit position from the least significant end
      char& c = out[digits - 1 - pos / 4];
      const int v = (c <= '9' ? c - '0' : c - 'a' + 10) | (1 << (pos % 4));
      c = static_cast<char>(v < 10 ? '0' + v : 'a' + v - 10);
    }
    return out;
  }

  static SignFunction from_hex(int n, std::string_view hex) {
    detail::require<SizeError>(n >= 1 && n <= kMaxQubits, "SignFunction::from_hex: n must be in [1, 14]");
    const std::size_t N = std::size_t{1} << n;
    const std::size_t digits = (N + 3) / 4;
    detail::require<UsageError>(hex.size() == digits, "SignFunction::from_hex: expected " + std::to_string(digits) +
                                                          " hex digits, got " + std::to_string(hex.size()));
    std::vector<std::int8_t> t(N, 1);
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = hex[d];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else throw UsageError("SignFunction::from_hex: not a lowercase hex digit");
      for (int b = 0; b < 4; ++b) {
        if (!((v >> b) & 1)) continue;
        const std::size_t pos = (digits - 1 - d) * 4 + b;
        detail::require<UsageError>(pos < N, "SignFunction::from_hex: bits set beyond the table");
        t[N - 1 - pos] = -1;
      }
    }
    return {n, std::move(t)};
  }

  int n() const { return n_; }
  std::size_t size() const { return table_.size(); }
  int operator()(std::size_t x) const { return table_[x]; }
  const std::vector<std::int8_t>& table() const { return table_; }

  std::size_t minus_count() const {
    std::size_t c = 0;
    for (auto s : table_) c += (s == -1);
    return c;
  }

  /// Pointwise product.
  SignFunction operator*(const SignFunction& g) const {
    detail::require<DimensionMismatch>(n_ == g.n_, "SignFunction: product of different arities");
    std::vector<std::int8_t> t(table_.size());
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::int8_t>(table_[x] * g.table_[x]);
    return {n_, std::move(t)};
  }

  SignFunction negated() const {
    std::vector<std::int8_t> t(table_);
    for (auto& s : t) s = static_cast<std::int8_t>(-s);
    return {n_, std::move(t)};
  }

  friend bool operator==(const SignFunction&, const SignFunction&) = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> table_;
};

/// In-place unnormalized Walsh-Hadamard transform: a_z <- sum_x a_x (-1)^{x.z}.
template <class Container>
void walsh_hadamard_inplace(Container& a) {
  const std::size_t N = static_cast<std::size_t>(a.size());
  for (std::size_t h = 1; h < N; h <<= 1)
    for (std::size_t i = 0; i < N; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const auto u = a[j];
        const auto v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

/// H^{(x)n} applied to a state vector.
inline Vector hadamard_transform(Vector v) {
  detail::require<SizeError>(log2_exact(v.size()) >= 0, "hadamard_transform: length must be a power of two");
  walsh_hadamard_inplace(v);
  return v / std::sqrt(static_cast<double>(v.size()));
}

/// N * fhat(z) for every z, as exact integers.
inline std::vector<std::int64_t> walsh_spectrum(const SignFunction& f) {
  std::vector<std::int64_t> a(f.table().begin(), f.table().end());
  walsh_hadamard_inplace(a);
  return a;
}

/// fhat(z) = 2^{-n} sum_x f(x) (-1)^{x.z}, exactly.
inline Rational fourier_coefficient(const SignFunction& f, std::uint64_t z) {
  detail::require<SizeError>(z < f.size(), "fourier_coefficient: z out of range");
  std::int64_t s = 0;
  for (std::size_t x = 0; x < f.size(); ++x) s += dot_parity(x, z) ? -f(x) : f(x);
  return Rational(s, static_cast<std::int64_t>(f.size()));
}

/// Output state of the Fourier Sampling circuit H U_f H |0^n>, amplitude fhat(z) on z.
inline PureState fourier_sampling_state(const SignFunction& f) {
  const auto w = walsh_spectrum(f);
  Vector v(static_cast<Index>(w.size()));
  const double N = static_cast<double>(w.size());
  for (std::size_t z = 0; z < w.size(); ++z) v(static_cast<Index>(z)) = static_cast<double>(w[z]) / N;
  return PureState(std::move(v));
}

}  // namespace xhogkit::oracles
