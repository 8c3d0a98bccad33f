#pragma once

// XHOG strategies. Every query-legal strategy talks to the oracle only
// through PrepAccess, which turns a handle into "prepare a copy of psi" and
// "reflect about psi" and charges the handle for each underlying call.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rng.hpp"
#include "xhogkit/oracles/oracle_handle.hpp"
#include "xhogkit/oracles/sign_function.hpp"

namespace xhogkit::xhog {

using oracles::OracleHandle;
using oracles::OracleKind;

struct StrategyOutcome {
  Index z = 0;
  std::int64_t queries_used = 0;
  /// False for reference strategies that read the hidden state directly.
  bool query_legal = true;
  std::map<std::string, double, std::less<>> auxiliary;
};

/// Preparation and reflection built from whatever the oracle offers.
///
///   canonical:    P = O_psi from |bot>;       R_psi = O S_bot O^dagger
///   random_prep:  P = U_psi from |0^n>;      R_psi = U S_0 U^dagger
///   fourier:      P = H U_f H from |0^n>;    R_psi = P S_0 P^dagger
///
/// One call per preparation, two per reflection.
class PrepAccess {
 public:
  explicit PrepAccess(OracleHandle& oracle) : o_(&oracle) {
    detail::require<UsageError>(oracle.kind() != OracleKind::reflection,
                                "strategy needs a preparation oracle; a pure reflection cannot prepare psi");
    N_ = pow2(oracle.qubits());
  }

  int qubits() const { return o_->qubits(); }
  Index system_dim() const { return N_; }
  Index work_dim() const { return o_->dim(); }

  Vector prepare() { return forward(o_->start_state()); }

  /// R_psi on the working space.
  Vector reflect(const Vector& v) {
    Vector w = backward(v);
    const Index s = start_index();
    w(s) = -w(s);
    return forward(w);
  }

  /// Computational-basis measurement of the system register. In the
  /// extended space the bot index is discarded; the states this adapter
  /// produces carry no weight there.
  Index measure(const Vector& v, Rng& rng) const { return sample_born(v.head(N_), rng); }

 private:
  Index start_index() const { return o_->has_bot() ? o_->dim() - 1 : 0; }

  Vector forward(const Vector& v) {
    if (o_->kind() == OracleKind::fourier_phase) return oracles::hadamard_transform(o_->apply(oracles::hadamard_transform(v)));
    return o_->apply(v);
  }

  Vector backward(const Vector& v) {
    if (o_->kind() == OracleKind::fourier_phase)
      return oracles::hadamard_transform(o_->apply_adjoint(oracles::hadamard_transform(v)));
    return o_->apply_adjoint(v);
  }

  OracleHandle* o_;
  Index N_ = 0;
};

inline StrategyOutcome strategy_uniform(int n, Rng& rng) {
  detail::require<SizeError>(n >= 1 && n <= kMaxQubits, "strategy_uniform: n must be in [1, 14]");
  std::uniform_int_distribution<Index> u(0, pow2(n) - 1);
  return {u(rng), 0, true, {}};
}

inline StrategyOutcome strategy_naive_sample(OracleHandle& oracle, Rng& rng) {
  PrepAccess acc(oracle);
  const std::int64_t before = oracle.queries();
  const Index z = acc.measure(acc.prepare(), rng);
  return {z, oracle.queries() - before, true, {}};
}

/// Measure k copies and output the most frequent string, smallest on ties.
inline StrategyOutcome strategy_k_copy_mode(OracleHandle& oracle, int k, Rng& rng) {
  detail::require<UsageError>(k >= 1, "strategy_k_copy_mode: k must be >= 1");
  PrepAccess acc(oracle);
  const std::int64_t before = oracle.queries();
  std::map<Index, int> counts;
  for (int i = 0; i < k; ++i) ++counts[acc.measure(acc.prepare(), rng)];
  Index best = counts.begin()->first;
  int best_count = 0;
  for (const auto& [z, c] : counts)
    if (c > best_count) {
      best = z;
      best_count = c;
    }
  return {best, oracle.queries() - before, true, {{"mode_count", static_cast<double>(best_count)}}};
}

enum class Schedule { adaptive, fixed };

/// T(n) = ceil((pi/4) sqrt(2^{n+2}/k)), from the guaranteed good mass k/2^{n+2}.
inline int fixed_iterations(int n, int k) {
  return static_cast<int>(std::ceil(std::numbers::pi / 4.0 * std::sqrt(std::ldexp(1.0, n + 2) / k)));
}

/// Grover iteration count that maximises the good-subspace weight for
/// initial good mass a.
inline int adaptive_iterations(double a) {
  if (a <= 0.0) return 0;
  if (a >= 1.0) return 0;
  const double theta = std::asin(std::sqrt(a));
  return std::max(0, static_cast<int>(std::lround(std::numbers::pi / (4.0 * theta) - 0.5)));
}

/// Measure k copies; output the first repeated string if any. Otherwise
/// amplify one more copy onto span{z_1..z_k} and output its measurement.
/// The good-subspace reflection is classical (a sign flip on the measured
/// strings) and costs nothing. Queries: k + 1 + 2T.
///
/// The adaptive schedule reads the good mass off the simulated state vector,
/// which a real device could not do.
inline StrategyOutcome strategy_collision_amplify(OracleHandle& oracle, int k, Schedule schedule, Rng& rng) {
  detail::require<UsageError>(k >= 2, "strategy_collision_amplify: k must be >= 2");
  PrepAccess acc(oracle);
  const std::int64_t before = oracle.queries();
  std::set<Index> good;
  for (int i = 0; i < k; ++i) {
    const Index z = acc.measure(acc.prepare(), rng);
    if (!good.insert(z).second) {
      return {z, oracle.queries() - before, true, {{"collision", 1.0}, {"iterations", 0.0}, {"measured", i + 1.0}}};
    }
  }

  Vector v = acc.prepare();
  double mass = 0.0;
  for (Index z : good) mass += std::norm(v(z));
  const int T = schedule == Schedule::fixed ? fixed_iterations(acc.qubits(), k) : adaptive_iterations(mass);
  for (int t = 0; t < T; ++t) {
    for (Index z : good) v(z) = -v(z);
    v = -acc.reflect(v);
  }
  const Index z = acc.measure(v, rng);
  StrategyOutcome out{z, oracle.queries() - before, true, {}};
  out.auxiliary = {{"collision", 0.0},
                   {"iterations", static_cast<double>(T)},
                   {"measured", static_cast<double>(k)},
                   {"landed_good", good.count(z) ? 1.0 : 0.0}};
  if (schedule == Schedule::adaptive) out.auxiliary["good_mass"] = mass;
  return out;
}

/// Reference strategy with direct access to psi: argmax_z |<z|psi>|^2,
/// smallest index on ties. Not a query-model algorithm.
inline StrategyOutcome strategy_argmax(const PureState& psi) {
  Index best = 0;
  double bp = -1.0;
  for (Index z = 0; z < psi.system_dim(); ++z)
    if (psi.probability(z) > bp) {
      bp = psi.probability(z);
      best = z;
    }
  return {best, 0, false, {}};
}

}  // namespace xhogkit::xhog
