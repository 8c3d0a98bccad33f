#pragma once

// The one-query Fourier Sampling linear program: exact naive value, the
// coefficient reductions, the primal in the variables c_S, the Half_N dual
// certificate and its exact verification, and a numeric primal solve.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/fourier_lp/monomial.hpp"
#include "xhogkit/fourier_lp/simplex_solver.hpp"
#include "xhogkit/oracles/sign_function.hpp"

namespace xhogkit::fourier_lp {

using oracles::fourier_coefficient;

// ---------------------------------------------------------------------------
// Naive value.

/// N * E_f[sum_z fhat(z)^4] by enumerating all 2^N functions.
inline Rational naive_value_enumeration(int n) {
  detail::require<SizeError>(n >= 1 && n <= 4, "naive_fourier_value: n must be in [1, 4]");
  const std::uint32_t N = std::uint32_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << N;
  Integer acc = 0;
  std::vector<std::int64_t> w(N);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    for (std::uint32_t x = 0; x < N; ++x) w[x] = ((bits >> x) & 1U) ? -1 : 1;
    oracles::walsh_hadamard_inplace(w);
    for (auto v : w) acc += Integer(v * v) * (v * v);
  }
  return Rational(acc, Integer(count) * N * N * N);
}

/// Each fhat(z) is (N - 2W)/N with W ~ Bin(N, 1/2), so E fhat(z)^4 =
/// 16 mu_4 / N^4 with mu_4 = N p q (1 + (3N - 6) p q) the binomial fourth
/// central moment.
inline Rational naive_value_binomial_moment(int n) {
  detail::require<SizeError>(n >= 1 && n <= 30, "naive_value_binomial_moment: n out of range");
  const Integer N = pow2_int(static_cast<unsigned>(n));
  const Rational pq(1, 4);
  const Rational mu4 = Rational(N) * pq * (Rational(1) + Rational(3 * N - 6) * pq);
  const Rational N4 = Rational(N * N * N * N);
  const Rational e4 = 16 * mu4 / N4;
  return Rational(N) * Rational(N) * e4;  // N terms, times N
}

inline Rational naive_fourier_value(int n) {
  const Rational a = naive_value_enumeration(n);
  const Rational b = naive_value_binomial_moment(n);
  detail::require(a == b, "naive_fourier_value: enumeration " + to_fraction_string(a) + " disagrees with moment route " +
                              to_fraction_string(b));
  return a;
}

// ---------------------------------------------------------------------------
// Coefficient reductions.

struct ReductionReport {
  bool feasible = true;
  std::vector<std::string> violations;
  /// Index set of the free coefficients: |S| even, 2 <= |S| <= deg_cap, xor S != 0.
  std::vector<Subset> free_set;
  /// (p(f) + p(-f))/2: p with the odd-degree part removed.
  MonomialPoly negation_symmetrized;
};

/// Index set {S : |S| even, 2 <= |S| <= deg_cap, xor S != 0^n}.
inline std::vector<Subset> free_variable_set(int n, int deg_cap) {
  const std::uint32_t N = std::uint32_t{1} << n;
  std::vector<Subset> out;
  for (int size = 2; size <= deg_cap && size <= static_cast<int>(N); size += 2)
    for (auto& s : subsets_of_size(N, static_cast<std::uint32_t>(size)))
      if (xor_of(s) != 0) out.push_back(std::move(s));
  return out;
}

/// Checks the consequences of sum_z p(f . chi_z) = 1 for all f (c_empty = 1/N,
/// c_S = 0 when xor S = 0) and the parity convention (c_S = 0 for odd |S|).
inline ReductionReport reduce_equality_constraints(const MonomialPoly& p) {
  ReductionReport rep;
  const Rational invN(1, p.N());
  if (p.coeff({}) != invN) {
    rep.feasible = false;
    rep.violations.push_back("c_{} = " + to_fraction_string(p.coeff({})) + ", must be " + to_fraction_string(invN));
  }
  MonomialPoly even(p.n(), p.deg_cap());
  for (const auto& [s, c] : p.coeffs()) {
    if (s.empty()) {
      even.set(s, c);
      continue;
    }
    if (s.size() % 2 == 1) {
      rep.feasible = false;
      rep.violations.push_back("c_" + subset_to_string(s) + " = " + to_fraction_string(c) + ", must be 0 (odd |S|)");
      continue;
    }
    even.set(s, c);
    if (xor_of(s) == 0) {
      rep.feasible = false;
      rep.violations.push_back("c_" + subset_to_string(s) + " = " + to_fraction_string(c) + ", must be 0 (xor S = 0)");
    }
  }
  rep.free_set = free_variable_set(p.n(), p.deg_cap());
  rep.negation_symmetrized = std::move(even);
  return rep;
}

// ---------------------------------------------------------------------------
// Objective coefficients k_S = (N/2^N) sum_f fhat(0)^2 prod_{x in S} f(x).

inline Rational objective_coefficient(int n, const Subset& s) {
  const Integer N = pow2_int(static_cast<unsigned>(n));
  if (s.empty()) return 1;
  if (s.size() == 2) return Rational(Integer(2), N);
  return 0;
}

inline Rational objective_coefficient_enumeration(int n, const Subset& s) {
  detail::require<SizeError>(n >= 1 && n <= 4, "objective_coefficient_enumeration: n must be in [1, 4]");
  const std::uint32_t N = std::uint32_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << N;
  const std::uint64_t mask = subset_mask(s);
  Integer acc = 0;  // sum_f (N fhat(0))^2 chi_S(f)
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const std::int64_t sum = static_cast<std::int64_t>(N) - 2 * __builtin_popcountll(bits);
    acc += chi(bits, mask) * sum * sum;
  }
  return Rational(acc * N, Integer(count) * Integer(N) * Integer(N));
}

/// Closed-form k_S for every S with |S| <= 2T.
inline std::map<Subset, Rational> objective_coefficients(int n, int T) {
  detail::require<SizeError>(n >= 1 && n <= 4 && T >= 0, "objective_coefficients: need 1 <= n <= 4, T >= 0");
  const std::uint32_t N = std::uint32_t{1} << n;
  std::map<Subset, Rational> out;
  for (int size = 0; size <= 2 * T && size <= static_cast<int>(N); ++size)
    for (auto& s : subsets_of_size(N, static_cast<std::uint32_t>(size))) out.emplace(s, objective_coefficient(n, s));
  return out;
}

// ---------------------------------------------------------------------------
// Primal.

/// max 1/N + sum_S k_S c_S  s.t.  1/N + sum_S c_S prod_{x in S} f(x) >= 0 for all f.
struct LpInstance {
  int n = 0;
  int T = 1;
  std::vector<Subset> variables;
  /// rows[f][v] = prod_{x in S_v} f(x), one row per f in bit order.
  std::vector<std::vector<std::int8_t>> rows;
  Rational constant;  // c_empty = 1/N, appears in every row and in the objective
  std::vector<Rational> objective;
};

inline LpInstance build_primal(int n, int T) {
  if (T != 1) throw UsageError("build_primal: only single-query programs (T = 1) are supported");
  detail::require<SizeError>(n >= 1 && n <= 4, "build_primal: n must be in [1, 4]");
  LpInstance lp;
  lp.n = n;
  lp.T = T;
  lp.variables = free_variable_set(n, 2 * T);
  const std::uint32_t N = std::uint32_t{1} << n;
  lp.constant = Rational(1, N);
  for (const auto& s : lp.variables) lp.objective.push_back(objective_coefficient(n, s));
  std::vector<std::uint64_t> masks;
  for (const auto& s : lp.variables) masks.push_back(subset_mask(s));
  const std::uint64_t count = std::uint64_t{1} << N;
  lp.rows.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::vector<std::int8_t> row(masks.size());
    for (std::size_t v = 0; v < masks.size(); ++v) row[v] = static_cast<std::int8_t>(chi(bits, masks[v]));
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

inline Rational primal_objective(const LpInstance& lp, const std::vector<Rational>& c) {
  detail::require<DimensionMismatch>(c.size() == lp.variables.size(), "primal_objective: wrong number of variables");
  Rational v = lp.constant;
  for (std::size_t i = 0; i < c.size(); ++i) v += lp.objective[i] * c[i];
  return v;
}

/// Smallest row value 1/N + sum_v row_v c_v over all f.
inline Rational primal_min_row(const LpInstance& lp, const std::vector<Rational>& c) {
  detail::require<DimensionMismatch>(c.size() == lp.variables.size(), "primal_min_row: wrong number of variables");
  Rational worst = 0;
  bool first = true;
  for (const auto& row : lp.rows) {
    Rational v = lp.constant;
    for (std::size_t i = 0; i < c.size(); ++i) v += row[i] == 1 ? c[i] : Rational(-c[i]);
    if (first || v < worst) worst = v;
    first = false;
  }
  return worst;
}

inline bool primal_feasible(const LpInstance& lp, const std::vector<Rational>& c) { return primal_min_row(lp, c) >= 0; }

/// p(f) = fhat(0)^2: c_S = 2/N^2 on every pair.
inline std::vector<Rational> naive_primal_point(const LpInstance& lp) {
  const Integer N = pow2_int(static_cast<unsigned>(lp.n));
  return std::vector<Rational>(lp.variables.size(), Rational(Integer(2), N * N));
}

template <class Num>
struct PrimalSolution {
  Num value{};
  std::vector<Num> c;
  int iterations = 0;
};

/// Solve the primal with free variables split as c = c+ - c-. The origin is
/// feasible since every row reads 1/N >= 0 there.
template <class Num>
PrimalSolution<Num> solve_primal(const LpInstance& lp, const Num& eps) {
  auto to_num = [](const Rational& r) -> Num {
    if constexpr (std::is_same_v<Num, Rational>) return r;
    else return static_cast<Num>(to_double(r));
  };
  const std::size_t V = lp.variables.size();
  std::vector<std::vector<Num>> A;
  std::vector<Num> b;
  A.reserve(lp.rows.size());
  for (const auto& row : lp.rows) {
    std::vector<Num> a(2 * V);
    for (std::size_t i = 0; i < V; ++i) {
      a[i] = Num(-row[i]);
      a[V + i] = Num(row[i]);
    }
    A.push_back(std::move(a));
    b.push_back(to_num(lp.constant));
  }
  std::vector<Num> obj(2 * V);
  for (std::size_t i = 0; i < V; ++i) {
    obj[i] = to_num(lp.objective[i]);
    obj[V + i] = -obj[i];
  }
  const auto res = simplex_maximize<Num>(A, b, obj, eps);
  PrimalSolution<Num> out;
  out.value = res.value + to_num(lp.constant);
  out.c.resize(V);
  for (std::size_t i = 0; i < V; ++i) out.c[i] = res.x[i] - res.x[V + i];
  out.iterations = res.iterations;
  return out;
}

inline PrimalSolution<double> solve_primal_numeric(const LpInstance& lp) {
  detail::require<SizeError>(lp.n <= 3, "solve_primal_numeric: n must be <= 3");
  return solve_primal<double>(lp, 1e-12);
}

// ---------------------------------------------------------------------------
// Half_N and the dual certificate.

/// Fourier coefficient of the indicator of balanced N-bit tables at a set of
/// size 2j: (-1)^j C(N/2, j) / C(N, 2j) * C(N, N/2) / 2^N.
inline Rational halfN_fourier_coefficient(unsigned N, unsigned j) {
  detail::require<UsageError>(N >= 2 && N % 2 == 0, "halfN_fourier_coefficient: N must be even");
  detail::require<SizeError>(2 * j <= N, "halfN_fourier_coefficient: need 2j <= N");
  Rational v = Rational(binomial(N / 2, j), binomial(N, 2 * j)) * Rational(binomial(N, N / 2), pow2_int(N));
  return j % 2 ? Rational(-v) : v;
}

/// Same coefficient at S = {0, ..., size-1} by enumerating all 2^N tables (N <= 20).
inline Rational halfN_fourier_enumeration(unsigned N, unsigned size) {
  detail::require<SizeError>(N >= 2 && N <= 20 && size <= N, "halfN_fourier_enumeration: need N <= 20");
  const std::uint64_t count = std::uint64_t{1} << N;
  const std::uint64_t mask = size == 64 ? ~0ULL : ((std::uint64_t{1} << size) - 1);
  std::int64_t acc = 0;
  for (std::uint64_t bits = 0; bits < count; ++bits)
    if (static_cast<unsigned>(__builtin_popcountll(bits)) * 2 == N) acc += chi(bits, mask);
  return Rational(Integer(acc), pow2_int(N));
}

struct DualCertificate {
  int n = 0;
  Rational kappa;
  Rational b;
  std::string support = "Half_N";
};

/// kappa = 2(N-1) / (N C(N, N/2)), b = 1 + 2^N kappa Half_N^(empty).
inline DualCertificate dual_certificate(int n) {
  detail::require<SizeError>(n >= 1 && n <= 16, "dual_certificate: n must be in [1, 16]");
  const unsigned N = 1U << n;
  DualCertificate c;
  c.n = n;
  c.kappa = Rational(Integer(2 * (N - 1)), Integer(N) * binomial(N, N / 2));
  c.b = 1 + Rational(pow2_int(N)) * c.kappa * halfN_fourier_coefficient(N, 0);
  return c;
}

enum class VerifyMode { enumeration, formula };

/// Checks the dual constraints for T = 1 exactly and writes a transcript.
///
/// enumeration (n <= 4): every sum over f is computed term by term.
/// formula (n <= 8):     sums over f come from the Half_N coefficients, and
///                       the naive primal point is checked per Hamming
///                       weight class (its row value depends only on it).
/// Both modes produce the same transcript. Throws CertificateError naming the
/// first violated constraint.
inline std::string verify_dual_feasibility(const DualCertificate& cert, VerifyMode mode, int T = 1) {
  if (T != 1) throw UsageError("verify_dual_feasibility: only T = 1 is supported");
  const int n = cert.n;
  if (mode == VerifyMode::enumeration)
    detail::require<SizeError>(n >= 1 && n <= 4, "verify_dual_feasibility: enumeration mode needs n <= 4");
  else
    detail::require<SizeError>(n >= 1 && n <= 8, "verify_dual_feasibility: formula mode needs n <= 8");
  const unsigned N = 1U << n;
  const Integer Nn(N);
  const Integer pairs = binomial(N, 2);
  const Integer functions = pow2_int(N);
  const Rational target = Rational(Integer(-2), Nn);  // sum_f psi_f chi_S(f) must equal -2/N

  std::ostringstream t;
  t << "dual feasibility, T=1, n=" << n << " (N=" << N << ")\n";
  t << "certificate psi_f = kappa * Half_N(f), kappa = " << to_fraction_string(cert.kappa) << "\n";

  // psi_f >= 0
  if (cert.kappa < 0)
    throw CertificateError("constraint psi_f >= 0 violated: kappa = " + to_fraction_string(cert.kappa));
  t << "[psi_f >= 0] " << functions.str() << " functions: min psi_f >= 0, ok\n";

  // |S| = 2: -sum_f psi_f chi_S(f) = 2/N
  Rational worst = 0;
  if (mode == VerifyMode::enumeration) {
    const std::uint64_t count = std::uint64_t{1} << N;
    std::vector<std::uint64_t> balanced;
    for (std::uint64_t bits = 0; bits < count; ++bits)
      if (static_cast<unsigned>(__builtin_popcountll(bits)) * 2 == N) balanced.push_back(bits);
    for (const auto& s : subsets_of_size(N, 2)) {
      const std::uint64_t mask = subset_mask(s);
      std::int64_t sum = 0;
      for (auto bits : balanced) sum += chi(bits, mask);
      const Rational residual = -cert.kappa * sum - (-target);
      if (residual != 0)
        throw CertificateError("constraint |S|=2 violated at S=" + subset_to_string(s) + ": residual " +
                               to_fraction_string(residual));
    }
  } else {
    const Rational sum = Rational(functions) * halfN_fourier_coefficient(N, 1);
    const Rational residual = -cert.kappa * sum - (-target);
    if (residual != 0)
      throw CertificateError("constraint |S|=2 violated at S={0,1}: residual " + to_fraction_string(residual));
  }
  t << "[|S|=2] " << pairs.str() << " constraints -sum_f psi_f prod_S f = 2/N: max |residual| = "
    << to_fraction_string(worst) << "\n";

  // b - sum_f psi_f = 1
  Rational mass;
  if (mode == VerifyMode::enumeration) mass = cert.kappa * binomial(N, N / 2);
  else mass = cert.kappa * Rational(functions) * halfN_fourier_coefficient(N, 0);
  const Rational eq_residual = cert.b - mass - 1;
  if (eq_residual != 0)
    throw CertificateError("constraint b - sum_f psi_f = 1 violated: residual " + to_fraction_string(eq_residual));
  t << "[b - sum_f psi_f = 1] b = " << to_fraction_string(cert.b) << ": residual " << to_fraction_string(eq_residual)
    << "\n";

  // Primal point p(f) = fhat(0)^2: c_S = 2/N^2 on the pairs.
  const Rational cS(Integer(2), Nn * Nn);
  const Rational invN(Integer(1), Nn);
  Rational min_row;
  bool first = true;
  if (mode == VerifyMode::enumeration) {
    const LpInstance lp = build_primal(n, 1);
    min_row = primal_min_row(lp, naive_primal_point(lp));
    first = false;
  } else {
    for (unsigned w = 0; w <= N; ++w) {
      // sum over pairs of f(x)f(y) for a table with w entries equal to -1
      const Integer s = (Integer(N) - 2 * w) * (Integer(N) - 2 * w);
      const Rational pair_sum = Rational(s - Nn, Integer(2));
      const Rational v = invN + cS * pair_sum;
      if (first || v < min_row) min_row = v;
      first = false;
    }
  }
  if (min_row < 0) throw CertificateError("naive primal point infeasible: row value " + to_fraction_string(min_row));
  const Rational primal_obj = invN + Rational(Integer(2), Nn) * cS * Rational(pairs);
  t << "[primal] c_S = " << to_fraction_string(cS) << " on all pairs: min_f p(f) = " << to_fraction_string(min_row)
    << " >= 0, objective " << to_fraction_string(primal_obj) << "\n";

  const Rational dual_obj = cert.b / Nn;
  if (primal_obj != dual_obj)
    throw CertificateError("weak duality gap: primal " + to_fraction_string(primal_obj) + " vs dual " +
                           to_fraction_string(dual_obj));
  t << "[duality] primal objective = dual objective b/N = " << to_fraction_string(dual_obj) << "\n";
  t << "OPTIMAL b = " << to_fraction_string(cert.b) << "\n";
  return t.str();
}

}  // namespace xhogkit::fourier_lp
