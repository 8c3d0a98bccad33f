#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <tuple>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/core/rng.hpp"
#include "xhogkit/oracles/constructions.hpp"
#include "xhogkit/xhog/scoring.hpp"
#include "xhogkit/xhog/strategies.hpp"

namespace xhogkit::xhog {

struct StrategySpec {
  std::string name = "naive";  // uniform | naive | kcopy | collision | argmax
  /// Copy count for kcopy/collision; 0 picks ceil(2^{n/3}) for collision.
  int k = 0;
  Schedule schedule = Schedule::fixed;
};

enum class Family { canonical, random_prep, fourier };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::canonical: return "canonical";
    case Family::random_prep: return "random_prep";
    case Family::fourier: return "fourier";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "canonical") return Family::canonical;
  if (s == "random_prep") return Family::random_prep;
  if (s == "fourier") return Family::fourier;
  throw UsageError("unknown oracle family '" + s + "' (expected canonical, random_prep or fourier)");
}

inline Schedule parse_schedule(const std::string& s) {
  if (s == "fixed") return Schedule::fixed;
  if (s == "adaptive") return Schedule::adaptive;
  throw UsageError("unknown schedule '" + s + "' (expected fixed or adaptive)");
}

inline std::string schedule_name(Schedule s) { return s == Schedule::fixed ? "fixed" : "adaptive"; }

inline void validate_strategy(const std::string& name) {
  static const char* known[] = {"uniform", "naive", "kcopy", "collision", "argmax"};
  for (const char* k : known)
    if (name == k) return;
  throw UsageError("unknown strategy '" + name + "' (expected uniform, naive, kcopy, collision or argmax)");
}

inline int default_collision_k(int n) { return static_cast<int>(std::ceil(std::exp2(n / 3.0) - 1e-9)); }

inline std::string strategy_id(const StrategySpec& s, int n) {
  if (s.name == "kcopy") return "kcopy(k=" + std::to_string(s.k) + ")";
  if (s.name == "collision")
    return "collision(k=" + std::to_string(s.k > 0 ? s.k : default_collision_k(n)) + "," + schedule_name(s.schedule) + ")";
  return s.name;
}

struct ExperimentConfig {
  StrategySpec strategy;
  Family family = Family::canonical;
  int n = 3;
  std::int64_t trials = 1000;
  Seed master_seed = 0;
  /// Enumerate every sign function instead of sampling (fourier family,
  /// uniform or naive strategy, n <= 4).
  bool exact = false;
  /// Worker threads; results do not depend on this.
  unsigned threads = 1;
  bool keep_trials = false;
};

namespace detail_ {

struct TrialResult {
  Index z = 0;
  double score = 0.0;
  std::int64_t queries = 0;
  bool legal = true;
};

inline TrialResult run_trial(const ExperimentConfig& cfg, std::int64_t trial) {
  const auto idx = static_cast<std::uint64_t>(trial);
  const Seed state_seed = derive_seed(cfg.master_seed, streams::kState, idx);
  const Seed oracle_seed = derive_seed(cfg.master_seed, streams::kOracle, idx);
  Rng strat_rng = make_rng(derive_seed(cfg.master_seed, streams::kStrategy, idx));

  std::optional<OracleHandle> oracle;
  if (cfg.family == Family::fourier) {
    Rng r = make_rng(state_seed);
    oracle.emplace(oracles::fourier_phase_oracle(oracles::SignFunction::random(cfg.n, r)));
  } else {
    const PureState psi = haar_state(cfg.n, state_seed);
    if (cfg.family == Family::canonical) oracle.emplace(oracles::canonical_oracle(psi));
    else oracle.emplace(oracles::random_prep_oracle(psi, oracle_seed));
  }

  const auto& s = cfg.strategy;
  StrategyOutcome out;
  if (s.name == "uniform") out = strategy_uniform(cfg.n, strat_rng);
  else if (s.name == "naive") out = strategy_naive_sample(*oracle, strat_rng);
  else if (s.name == "kcopy") out = strategy_k_copy_mode(*oracle, s.k, strat_rng);
  else if (s.name == "collision")
    out = strategy_collision_amplify(*oracle, s.k > 0 ? s.k : default_collision_k(cfg.n), s.schedule, strat_rng);

  // Scoring is the first thing allowed to look at the instance.
  const auto key = oracles::verification::key();
  if (s.name != "argmax")
    detail::require(oracle->reveal_count() == 0, "run_experiment: hidden instance was read before scoring");
  const auto& hidden = oracle->reveal(key);
  const PureState psi = hidden.f ? oracles::fourier_sampling_state(*hidden.f) : *hidden.psi;
  if (s.name == "argmax") out = strategy_argmax(psi);
  detail::require(out.queries_used == oracle->queries(), "run_experiment: strategy query count disagrees with ledger");
  return {out.z, xeb_score(out.z, psi), out.queries_used, out.query_legal};
}

/// N * E_f sum_z fhat(z)^4 (naive) or 1 (uniform), enumerating all f.
inline Rational exact_fourier_b(const std::string& strategy, int n) {
  detail::require<UsageError>(strategy == "naive" || strategy == "uniform",
                              "exact mode supports the uniform and naive strategies only");
  detail::require<SizeError>(n >= 1 && n <= 4, "exact mode enumerates 2^(2^n) functions; n must be <= 4");
  if (strategy == "uniform") return Rational(1);
  const std::uint64_t N = std::uint64_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << N;
  Integer acc = 0;  // sum over f and z of W_z^4, with W = N fhat
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::vector<std::int64_t> w(N);
    for (std::uint64_t x = 0; x < N; ++x) w[x] = ((bits >> x) & 1U) ? -1 : 1;
    oracles::walsh_hadamard_inplace(w);
    for (auto v : w) acc += Integer(v * v) * (v * v);
  }
  // b = N * (1/count) * sum_f sum_z (W_z/N)^4
  return Rational(acc, Integer(count) * Integer(N) * Integer(N) * Integer(N));
}

}  // namespace detail_

inline XebEstimate run_experiment(const ExperimentConfig& cfg) {
  validate_strategy(cfg.strategy.name);
  detail::require<SizeError>(cfg.n >= 1 && cfg.n <= kMaxQubits, "run_experiment: n must be in [1, 14]");
  if (cfg.strategy.name == "kcopy") detail::require<UsageError>(cfg.strategy.k >= 1, "kcopy strategy needs k >= 1");
  if (cfg.strategy.name == "collision" && cfg.strategy.k != 0)
    detail::require<UsageError>(cfg.strategy.k >= 2, "collision strategy needs k >= 2");

  XebEstimate est;
  est.n = cfg.n;
  est.strategy_id = strategy_id(cfg.strategy, cfg.n);
  est.family = family_name(cfg.family);
  est.master_seed = cfg.master_seed;

  if (cfg.exact) {
    detail::require<UsageError>(cfg.family == Family::fourier, "exact mode is available for the fourier family only");
    const Rational b = detail_::exact_fourier_b(cfg.strategy.name, cfg.n);
    est.b_exact = b;
    est.b_mean = to_double(b);
    est.std_err = 0.0;
    est.trials = std::int64_t{1} << (std::int64_t{1} << cfg.n);
    est.total_queries = cfg.strategy.name == "naive" ? est.trials : 0;
    est.max_trial_queries = cfg.strategy.name == "naive" ? 1 : 0;
    return est;
  }

  detail::require<UsageError>(cfg.trials >= 1, "run_experiment: trials must be >= 1");
  const auto T = static_cast<std::size_t>(cfg.trials);
  std::vector<detail_::TrialResult> results(T);
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(T)));
  if (workers == 1) {
    for (std::size_t i = 0; i < T; ++i) results[i] = detail_::run_trial(cfg, static_cast<std::int64_t>(i));
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < T; i += workers) results[i] = detail_::run_trial(cfg, static_cast<std::int64_t>(i));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<double> scores(T);
  for (std::size_t i = 0; i < T; ++i) {
    scores[i] = results[i].score;
    est.total_queries += results[i].queries;
    est.max_trial_queries = std::max(est.max_trial_queries, results[i].queries);
    est.query_legal = est.query_legal && results[i].legal;
    if (cfg.keep_trials)
      est.per_trial.push_back({static_cast<std::int64_t>(i), results[i].z, results[i].score, results[i].queries});
  }
  std::tie(est.b_mean, est.std_err) = mean_and_stderr(scores);
  est.trials = cfg.trials;
  return est;
}

/// One row per trial: trial,z,score,queries.
inline void write_trials_csv(std::ostream& os, const XebEstimate& est) {
  os << "trial,z,score,queries\n";
  char buf[64];
  for (const auto& r : est.per_trial) {
    std::snprintf(buf, sizeof buf, "%.17g", r.score);
    os << r.trial << ',' << r.z << ',' << buf << ',' << r.queries << '\n';
  }
}

}  // namespace xhogkit::xhog
