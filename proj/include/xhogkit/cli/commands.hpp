#pragma once

// Implementation of the xhog-bench commands. Kept in a header so tests can
// drive the exact same code path in-process.
//
// Exit codes: 0 success, 1 a check or certificate failed, 2 usage error,
// 3 I/O error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rational.hpp"
#include "xhogkit/core/rng.hpp"
#include "xhogkit/core/simplex.hpp"
#include "xhogkit/fourier_lp/lp.hpp"
#include "xhogkit/oracles/constructions.hpp"
#include "xhogkit/symmetrize/symmetrize.hpp"
#include "xhogkit/uprep/uprep.hpp"
#include "xhogkit/xhog/experiment.hpp"

namespace xhogkit::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "xhog-bench 0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

class IoError : public Error {
 public:
  using Error::Error;
};

/// Output options shared by every command.
struct OutputOptions {
  std::string out_path;  // JSON report
  std::string format = "text";
  bool emit_config = false;
};

namespace detail_ {

inline std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Writes the report where asked and returns the command's exit code.
inline int finish(const OutputOptions& o, json report, std::ostream& out, const std::string& text, int code) {
  if (!o.out_path.empty()) write_file(o.out_path, dump(report));
  if (o.format == "json") out << dump(report);
  else out << text;
  return code;
}

struct Check {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return deviation <= tolerance; }
};

class CheckList {
 public:
  void add(std::string name, double deviation, double tolerance) {
    checks_.push_back({std::move(name), deviation, tolerance});
  }

  bool all_passed() const {
    for (const auto& c : checks_)
      if (!c.passed()) return false;
    return true;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks_)
      arr.push_back({{"name", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
    return arr;
  }

  std::string to_text() const {
    std::string s;
    for (const auto& c : checks_)
      s += "check " + c.name + ": deviation " + fmt(c.deviation, "%.3e") + " (tol " + fmt(c.tolerance, "%.3e") + ") " +
           (c.passed() ? "ok" : "FAIL") + "\n";
    return s;
  }

 private:
  std::vector<Check> checks_;
};

}  // namespace detail_

// ---------------------------------------------------------------------------
// xhog

struct XhogArgs {
  std::string strategy = "naive";
  std::string family = "canonical";
  int n = 3;
  std::int64_t trials = 1000;
  std::optional<Seed> seed;
  int k = 0;
  std::string schedule = "fixed";
  bool exact = false;
  unsigned threads = 1;
  std::string csv_path;
};

inline json xhog_config_json(const XhogArgs& a) {
  return {{"command", "xhog"},
          {"strategy", a.strategy},
          {"family", a.family},
          {"n", a.n},
          {"trials", a.trials},
          {"seed", a.seed ? json(*a.seed) : json(nullptr)},
          {"k", a.k},
          {"schedule", a.schedule},
          {"exact", a.exact},
          {"threads", a.threads}};
}

inline int cmd_xhog(const XhogArgs& a, const OutputOptions& o, std::ostream& out) {
  const json config = xhog_config_json(a);
  if (o.emit_config) {
    out << detail_::dump(config);
    return kOk;
  }
  if (!a.exact && !a.seed) throw UsageError("xhog: --seed is required for Monte Carlo runs");
  xhog::ExperimentConfig cfg;
  cfg.strategy.name = a.strategy;
  cfg.strategy.k = a.k;
  cfg.strategy.schedule = xhog::parse_schedule(a.schedule);
  cfg.family = xhog::parse_family(a.family);
  cfg.n = a.n;
  cfg.trials = a.trials;
  cfg.master_seed = a.seed.value_or(0);
  cfg.exact = a.exact;
  cfg.threads = a.threads;
  cfg.keep_trials = !a.csv_path.empty();

  detail_::Stopwatch sw;
  const xhog::XebEstimate est = xhog::run_experiment(cfg);
  const double wall = sw.seconds();

  json r = {{"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion},
            {"config", config},
            {"strategy", est.strategy_id},
            {"family", est.family},
            {"n", est.n},
            {"trials", est.trials},
            {"master_seed", est.master_seed},
            {"b_mean", est.b_mean},
            {"std_err", est.std_err},
            {"total_queries", est.total_queries},
            {"max_trial_queries", est.max_trial_queries},
            {"query_legal", est.query_legal},
            {"b_exact", est.b_exact ? json(to_fraction_string(*est.b_exact)) : json(nullptr)},
            {"wall_seconds", wall}};

  if (!a.csv_path.empty()) {
    std::ostringstream csv;
    xhog::write_trials_csv(csv, est);
    detail_::write_file(a.csv_path, csv.str());
  }

  std::string text;
  if (est.b_exact) {
    text = "b=" + to_fraction_string(*est.b_exact) + " (exact)\n";
  } else {
    text = "b=" + detail_::fmt(est.b_mean) + " ± " + detail_::fmt(est.std_err) +
           " (queries=" + std::to_string(est.total_queries) + ")\n";
  }
  return detail_::finish(o, r, out, text, kOk);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite;
  int n = 2;
  int k = 2;
  int T = 1;
  int N = 8;
  std::int64_t cases = 100;
  std::int64_t trials = 10000;
  std::optional<Seed> seed;
};

inline json verify_config_json(const VerifyArgs& a) {
  json c = {{"command", "verify"}, {"suite", a.suite}, {"seed", a.seed ? json(*a.seed) : json(nullptr)}};
  if (a.suite == "symmetrize") c.update({{"n", a.n}, {"k", a.k}, {"cases", a.cases}});
  else if (a.suite == "oracles") c.update({{"n", a.n}, {"cases", a.cases}});
  else if (a.suite == "uprep") c.update({{"n", a.n}, {"T", a.T}, {"trials", a.trials}});
  else if (a.suite == "simplex") c.update({{"N", a.N}, {"trials", a.trials}});
  return c;
}

namespace detail_ {

inline void verify_symmetrize_suite(const VerifyArgs& a, CheckList& checks, json&) {
  double worst = 0.0;
  for (std::int64_t i = 0; i < a.cases; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const PureState psi = haar_state(a.n, derive_seed(*a.seed, streams::kState, idx));
    Rng rng = make_rng(derive_seed(*a.seed, streams::kAux, idx));
    const auto spec = symmetrize::ResourceSpec::random(a.k, rng);
    worst = std::max(worst, symmetrize::verify_symmetrization(psi, spec));
  }
  checks.add("sigma_R == rho_R (max entry, " + std::to_string(a.cases) + " cases)", worst, 1e-10);
}

inline void verify_oracles_suite(const VerifyArgs& a, CheckList& checks, json&) {
  detail::require<SizeError>(a.n >= 1 && a.n <= 6, "verify oracles: n must be in [1, 6]");
  double canon = 0.0, involution = 0.0, first_col = 0.0, refl = 0.0, encoded = 0.0, fourier = 0.0;
  std::int64_t ledger_bad = 0;
  const Index N = pow2(a.n);
  for (std::int64_t i = 0; i < a.cases; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const PureState psi = haar_state(a.n, derive_seed(*a.seed, streams::kState, idx));
    const Matrix O = oracles::canonical_unitary(psi).matrix();
    const Vector ext = psi.with_bot().amps();
    const Vector bot = linalg::basis_vector(N + 1, N);
    canon = std::max({canon, linalg::max_abs(Vector(O * bot - ext)), linalg::max_abs(Vector(O * ext - bot))});
    involution = std::max(involution, linalg::max_abs(Matrix(O * O - Matrix::Identity(N + 1, N + 1))));

    const Seed os = derive_seed(*a.seed, streams::kOracle, idx);
    Rng rng = make_rng(os);
    const Matrix U = oracles::random_prep_matrix(psi, rng);
    first_col = std::max(first_col, linalg::max_abs(Vector(U.col(0) - psi.amps())));

    // prep on n+1 qubits producing psi (x) |phi>, phi a fixed garbage qubit state
    Rng g = make_rng(derive_seed(*a.seed, streams::kAux, idx));
    const Matrix G = haar_unitary_matrix(2, g);
    const UnitaryOp prep = UnitaryOp::trusted(linalg::kron(U, G));
    for (int t = 1; t <= 3; ++t) {
      const UnitaryOp r = oracles::refl_from_prep(prep, a.n, t);
      if (r.queries("prep") != 2 * t + 1) ++ledger_bad;
      if (t == 1) {
        const Matrix want = linalg::kron(oracles::reflection_about(psi).matrix(), Matrix::Identity(2, 2));
        const Vector phi = G.col(0);
        for (Index x = 0; x < N; ++x) {
          const Vector in = linalg::kron(linalg::basis_vector(N, x), phi);
          refl = std::max(refl, linalg::max_abs(Vector(r.apply(in) - want * in)));
        }
      }
    }
    if (a.n <= 4) {
      const UnitaryOp u = UnitaryOp::trusted(U);
      for (int t = 1; t <= 3; ++t)
        if (oracles::canonical_from_prep(u, t).queries("prep") != 4 * t + 2) ++ledger_bad;
      encoded = std::max(encoded, oracles::encoded_oracle_deviation(oracles::canonical_from_prep(u, 1), psi));
    }

    Rng fr = make_rng(derive_seed(*a.seed, streams::kStrategy, idx));
    const auto f = oracles::SignFunction::random(a.n, fr);
    Matrix H = Matrix::Ones(1, 1);
    for (int q = 0; q < a.n; ++q) H = linalg::kron(H, oracles::circuit::hadamard());
    const Vector dense = H * oracles::fourier_phase_unitary(f).matrix() * H * linalg::basis_vector(N, 0);
    fourier = std::max(fourier, linalg::max_abs(Vector(dense - oracles::fourier_sampling_state(f).amps())));
  }
  checks.add("canonical oracle swaps psi and bot", canon, 1e-10);
  checks.add("canonical oracle is an involution", involution, 1e-10);
  checks.add("random prep maps |0> to psi", first_col, 1e-10);
  checks.add("reflection from prep matches R_psi (x) I", refl, 1e-10);
  if (a.n <= 4) checks.add("simulated canonical oracle matches under the encoding", encoded, 1e-10);
  checks.add("ledger counts 2t+1 and 4t+2 (mismatches)", static_cast<double>(ledger_bad), 0.0);
  checks.add("fourier sampling state equals H U_f H |0>", fourier, 1e-12);
}

inline void verify_uprep_suite(const VerifyArgs& a, CheckList& checks, json& extra) {
  const auto rep = uprep::channel_distance_bound_report(a.n, a.T, a.trials, *a.seed);
  extra["report"] = {{"n", rep.n},           {"T", rep.T},         {"trials", rep.trials},
                     {"mean_distance", rep.mean_distance},         {"bound", rep.bound},
                     {"margin", rep.margin}, {"seed", rep.seed},   {"max_per_draw_ratio", rep.max_per_draw_ratio},
                     {"resamples", rep.resamples}};
  checks.add("mean T-composed distance <= (10T+4)/2^{n/2} (negative margin)", std::max(0.0, -rep.margin), 0.0);
  checks.add("per-draw distance <= (10T+4)|<psi|phi>| (ratio excess)", std::max(0.0, rep.max_per_draw_ratio - 1.0), 0.0);
  if (a.n <= 6) {  // dense eigensolves
    double eq = 0.0;
    const std::int64_t cases = std::min<std::int64_t>(a.trials, 100);
    for (std::int64_t i = 0; i < cases; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      const PureState psi = haar_state(a.n, derive_seed(*a.seed, streams::kState, idx));
      Rng rng = make_rng(derive_seed(*a.seed, streams::kAux, idx));
      const auto plan = uprep::draw_plan(psi, rng);
      const Matrix V = oracles::householder_completion(plan.phi.amps());
      const Matrix Vp = uprep::rotation_R(plan).matrix() * V;
      eq = std::max(eq, std::abs(unitary_channel_diamond_distance(V, Vp) - 2.0 * std::abs(plan.beta)));
    }
    checks.add("channel distance V vs RV equals 2|<psi|phi>|", eq, 1e-8);
  }
}

inline void verify_simplex_suite(const VerifyArgs& a, CheckList& checks, json& extra) {
  detail::require<SizeError>(a.N >= 1 && a.N <= (1 << 20), "verify simplex: N out of range");
  detail::require<UsageError>(a.trials >= 2, "verify simplex: need at least 2 trials");
  Rng rng = make_rng(*a.seed);
  std::vector<double> maxima(static_cast<std::size_t>(a.trials));
  for (auto& m : maxima) m = sample_uniform_simplex(static_cast<std::size_t>(a.N), rng).max();
  const auto [mean, se] = xhog::mean_and_stderr(maxima);
  const Rational expect = expected_max_simplex(static_cast<unsigned>(a.N));
  extra["report"] = {{"mean_max", mean}, {"std_err", se}, {"expected", to_fraction_string(expect)},
                     {"expected_value", to_double(expect)}};
  checks.add("E[max] vs H_N/N in standard errors", std::abs(mean - to_double(expect)) / (se > 0 ? se : 1.0), 3.0);
}

}  // namespace detail_

inline int cmd_verify(const VerifyArgs& a, const OutputOptions& o, std::ostream& out) {
  static const char* suites[] = {"symmetrize", "oracles", "uprep", "simplex"};
  bool known = false;
  for (const char* s : suites) known = known || a.suite == s;
  if (!known) throw UsageError("verify: unknown suite '" + a.suite + "' (expected symmetrize, oracles, uprep or simplex)");
  const json config = verify_config_json(a);
  if (o.emit_config) {
    out << detail_::dump(config);
    return kOk;
  }
  if (!a.seed) throw UsageError("verify: --seed is required");

  detail_::Stopwatch sw;
  detail_::CheckList checks;
  json extra = json::object();
  if (a.suite == "symmetrize") detail_::verify_symmetrize_suite(a, checks, extra);
  else if (a.suite == "oracles") detail_::verify_oracles_suite(a, checks, extra);
  else if (a.suite == "uprep") detail_::verify_uprep_suite(a, checks, extra);
  else detail_::verify_simplex_suite(a, checks, extra);

  const bool ok = checks.all_passed();
  json r = {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"config", config},
            {"suite", a.suite},                 {"checks", checks.to_json()},  {"passed", ok},
            {"wall_seconds", sw.seconds()}};
  if (extra.contains("report")) r["report"] = extra["report"];
  std::string text = checks.to_text();
  if (extra.contains("report")) text += "report " + extra["report"].dump() + "\n";
  text += ok ? "all checks passed\n" : "some checks FAILED\n";
  return detail_::finish(o, r, out, text, ok ? kOk : kCheckFailed);
}

// ---------------------------------------------------------------------------
// lp

struct LpArgs {
  std::string action;
  int n = 2;
  std::string mode;  // certify: enumeration | formula (default by n)
};

inline json lp_config_json(const LpArgs& a) {
  json c = {{"command", "lp"}, {"action", a.action}, {"n", a.n}};
  if (a.action == "certify") c["mode"] = a.mode.empty() ? (a.n <= 4 ? "enumeration" : "formula") : a.mode;
  return c;
}

inline int cmd_lp(const LpArgs& a, const OutputOptions& o, std::ostream& out) {
  if (a.action != "certify" && a.action != "solve" && a.action != "naive-value")
    throw UsageError("lp: unknown action '" + a.action + "' (expected certify, solve or naive-value)");
  const json config = lp_config_json(a);
  if (o.emit_config) {
    out << detail_::dump(config);
    return kOk;
  }
  detail_::Stopwatch sw;
  json r = {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"config", config},
            {"action", a.action},               {"n", a.n}};
  std::string text;
  int code = kOk;
  if (a.action == "certify") {
    const std::string mode = config["mode"];
    fourier_lp::VerifyMode m;
    if (mode == "enumeration") m = fourier_lp::VerifyMode::enumeration;
    else if (mode == "formula") m = fourier_lp::VerifyMode::formula;
    else throw UsageError("lp certify: --mode must be enumeration or formula");
    const auto cert = fourier_lp::dual_certificate(a.n);
    text = fourier_lp::verify_dual_feasibility(cert, m);
    r["transcript"] = text;
    r["b"] = to_fraction_string(cert.b);
    r["kappa"] = to_fraction_string(cert.kappa);
    r["passed"] = true;
  } else if (a.action == "solve") {
    detail::require<SizeError>(a.n >= 1 && a.n <= 3, "lp solve: n must be in [1, 3]");
    const auto lp = fourier_lp::build_primal(a.n, 1);
    const auto sol = fourier_lp::solve_primal_numeric(lp);
    const Rational expect = fourier_lp::dual_certificate(a.n).b / pow2_int(static_cast<unsigned>(a.n));
    const double residual = std::abs(sol.value - to_double(expect));
    const bool ok = residual <= 1e-9;
    r["value"] = sol.value;
    r["certificate_value"] = to_fraction_string(expect);
    r["residual"] = residual;
    r["b"] = detail_::fmt(sol.value * std::exp2(a.n), "%.12g");
    r["iterations"] = sol.iterations;
    r["passed"] = ok;
    text = "optimum = " + detail_::fmt(sol.value, "%.12g") + " (certificate " + to_fraction_string(expect) +
           ", residual " + detail_::fmt(residual, "%.3e") + ")\n" + "b = " + detail_::fmt(sol.value * std::exp2(a.n), "%.12g") + "\n";
    code = ok ? kOk : kCheckFailed;
  } else {
    const Rational b = fourier_lp::naive_fourier_value(a.n);
    r["b"] = to_fraction_string(b);
    r["passed"] = true;
    text = "b = " + to_fraction_string(b) + "\n";
  }
  r["wall_seconds"] = sw.seconds();
  return detail_::finish(o, r, out, text, code);
}

// ---------------------------------------------------------------------------
// Entry point.

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Linear cross-entropy heavy-output generation bench"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  OutputOptions o;
  auto add_output = [&o](CLI::App* sc) {
    sc->add_option("--out", o.out_path, "write the JSON report to this file");
    sc->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));
    sc->add_flag("--emit-config", o.emit_config, "print the resolved configuration and exit");
  };

  XhogArgs xa;
  Seed xseed = 0;
  auto* xs = app.add_subcommand("xhog", "run an XHOG experiment");
  xs->add_option("--strategy", xa.strategy, "uniform | naive | kcopy | collision | argmax");
  xs->add_option("--family", xa.family, "canonical | random_prep | fourier");
  xs->add_option("-n", xa.n, "qubits");
  xs->add_option("--trials", xa.trials, "independent trials");
  auto* xseed_opt = xs->add_option("--seed", xseed, "master seed");
  xs->add_option("-k", xa.k, "copies for kcopy / collision (collision default ceil(2^{n/3}))");
  xs->add_option("--schedule", xa.schedule, "fixed | adaptive");
  xs->add_flag("--exact", xa.exact, "enumerate all sign functions (fourier, n <= 4)");
  xs->add_option("--threads", xa.threads, "worker threads");
  xs->add_option("--csv", xa.csv_path, "per-trial CSV output");
  add_output(xs);

  VerifyArgs va;
  Seed vseed = 0;
  auto* vs = app.add_subcommand("verify", "run a verification suite");
  vs->add_option("suite", va.suite, "symmetrize | oracles | uprep | simplex")->required();
  vs->add_option("-n", va.n, "qubits");
  vs->add_option("-k", va.k, "tensor factors (symmetrize)");
  vs->add_option("-T", va.T, "queries (uprep)");
  vs->add_option("-N", va.N, "simplex bins (simplex)");
  vs->add_option("--cases", va.cases, "random instances");
  vs->add_option("--trials", va.trials, "Monte Carlo trials");
  auto* vseed_opt = vs->add_option("--seed", vseed, "master seed");
  add_output(vs);

  LpArgs la;
  auto* ls = app.add_subcommand("lp", "Fourier Sampling linear program");
  ls->add_option("action", la.action, "certify | solve | naive-value")->required();
  ls->add_option("-n", la.n, "qubits");
  ls->add_option("--mode", la.mode, "certify: enumeration | formula");
  add_output(ls);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (xseed_opt->count()) xa.seed = xseed;
  if (vseed_opt->count()) va.seed = vseed;

  try {
    if (xs->parsed()) return cmd_xhog(xa, o, out);
    if (vs->parsed()) return cmd_verify(va, o, out);
    return cmd_lp(la, o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionMismatch& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace xhogkit::cli
