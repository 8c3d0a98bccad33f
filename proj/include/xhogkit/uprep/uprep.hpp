#pragma once

// Simulating a random state-preparation oracle U_psi from the canonical
// oracle O_psi. A Haar state phi = alpha psi_perp + beta psi stands in for an
// unknown state orthogonal to psi; the swap O_psi O_psi_perp O_psi then turns
// a preparation of psi_perp into a preparation of psi.
//
// All operators act on the extended space (N system states plus bot at
// index N).

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rng.hpp"
#include "xhogkit/oracles/constructions.hpp"

namespace xhogkit::uprep {

inline constexpr double kDegenerateOverlap = 1.0 - 1e-12;

struct RotationPlan {
  PureState psi;
  PureState phi;
  double alpha = 0.0;
  Complex beta;
  double theta = 0.0;
  PureState psi_perp;
};

/// phi = alpha psi_perp + beta psi with alpha real and nonnegative.
inline RotationPlan decompose_phi(const PureState& psi, const PureState& phi) {
  detail::require<DimensionMismatch>(psi.dim() == phi.dim(), "decompose_phi: dimension mismatch");
  detail::require<UsageError>(!psi.has_bot() && !phi.has_bot(), "decompose_phi: states must not carry a bot index");
  const Complex beta = psi.inner(phi);
  if (std::abs(beta) >= kDegenerateOverlap)
    throw ConstructionError("decompose_phi: phi is parallel to psi, no orthogonal component");
  const Vector r = phi.amps() - beta * psi.amps();
  const double alpha = r.norm();
  RotationPlan p;
  p.psi = psi;
  p.phi = phi;
  p.alpha = alpha;
  p.beta = beta;
  p.theta = std::acos(std::min(1.0, alpha));
  p.psi_perp = PureState(r / alpha);
  return p;
}

/// 2x2 block [[alpha, conj(beta)], [-beta, alpha]] in the basis (psi_perp, psi):
/// sends phi to psi_perp, has determinant 1 and eigenvalues e^{+-i theta}.
inline Eigen::Matrix2cd rotation_block(const RotationPlan& p) {
  Eigen::Matrix2cd m;
  m << p.alpha, std::conj(p.beta), -p.beta, p.alpha;
  return m;
}

/// R on dimension `dim` (N, or N+1 to act trivially on bot).
inline UnitaryOp rotation_R(const RotationPlan& p, Index dim) {
  const Index N = p.psi.dim();
  detail::require<SizeError>(dim == N || dim == N + 1, "rotation_R: dim must be N or N+1");
  Eigen::MatrixX2cd E = Eigen::MatrixX2cd::Zero(dim, 2);
  E.col(0).head(N) = p.psi_perp.amps();
  E.col(1).head(N) = p.psi.amps();
  const Eigen::Matrix2cd D = rotation_block(p) - Eigen::Matrix2cd::Identity();
  return UnitaryOp::trusted(Matrix::Identity(dim, dim) + E * D * E.adjoint());
}

inline UnitaryOp rotation_R(const RotationPlan& p) { return rotation_R(p, p.psi.dim()); }

/// O_psi O_psi_perp O_psi: swaps psi and psi_perp, fixes bot and everything
/// orthogonal to the three.
inline UnitaryOp swap_via_canonical(const PureState& psi, const PureState& psi_perp) {
  detail::require(std::abs(psi.inner(psi_perp)) <= kStructuralTol, "swap_via_canonical: states are not orthogonal");
  const Matrix a = oracles::canonical_unitary(psi).matrix();
  const Matrix b = oracles::canonical_unitary(psi_perp).matrix();
  return UnitaryOp::trusted(a * b * a, {{"O_psi", 2}, {"O_psi_perp", 1}});
}

enum class Mode { ideal, approximate };

/// Per simulated query: 2 calls to O_psi; prep calls of the helper state
/// charged 5T + 2 for T queries.
inline QueryLedger simulation_ledger(int T) {
  if (T == 0) return {};
  return {{"O_psi", 2 * T}, {"V", 5 * T + 2}};
}

/// Draws phi until it is not (numerically) parallel to psi.
inline RotationPlan draw_plan(const PureState& psi, Rng& rng, int* resamples = nullptr) {
  for (int attempt = 0;; ++attempt) {
    const PureState phi(linalg::haar_vector(psi.dim(), rng));
    if (std::abs(psi.inner(phi)) < kDegenerateOverlap) {
      if (resamples) *resamples = attempt;
      return decompose_phi(psi, phi);
    }
  }
}

namespace detail_ {

inline Matrix embed_with_bot(const Matrix& m) {
  const Index N = m.rows();
  Matrix out = Matrix::Identity(N + 1, N + 1);
  out.topLeftCorner(N, N) = m;
  return out;
}

}  // namespace detail_

struct SimulatedPrep {
  UnitaryOp op;  // dimension N+1
  RotationPlan plan;
  Matrix V;  // V|0> = phi
  Matrix W;  // 1 (+) Haar on the complement of |0>
  int resamples = 0;
};

/// ideal:       O_psi O_psi_perp O_psi (R V) W
/// approximate: O_psi O_phi O_psi V W
/// The same seed gives the same phi and W in both modes.
inline SimulatedPrep simulate_U_psi(const PureState& psi, Seed seed, Mode mode) {
  detail::require<UsageError>(!psi.has_bot(), "simulate_U_psi: psi must not carry a bot index");
  Rng rng = make_rng(seed);
  SimulatedPrep s;
  s.plan = draw_plan(psi, rng, &s.resamples);
  const Index N = psi.dim();
  s.V = oracles::householder_completion(s.plan.phi.amps());
  s.W = Matrix::Zero(N, N);
  s.W(0, 0) = 1.0;
  s.W.bottomRightCorner(N - 1, N - 1) = haar_unitary_matrix(N - 1, rng);

  const Matrix Opsi = oracles::canonical_unitary(psi).matrix();
  Matrix m;
  if (mode == Mode::ideal) {
    const Matrix Operp = oracles::canonical_unitary(s.plan.psi_perp).matrix();
    m = Opsi * Operp * Opsi * rotation_R(s.plan, N + 1).matrix() * detail_::embed_with_bot(s.V * s.W);
  } else {
    const Matrix Ophi = oracles::canonical_unitary(s.plan.phi).matrix();
    m = Opsi * Ophi * Opsi * detail_::embed_with_bot(s.V * s.W);
  }
  s.op = UnitaryOp::trusted(std::move(m), simulation_ledger(1));
  return s;
}

/// The N x N system block of an operator that preserves the system subspace
/// (the ideal simulation does; the approximate one leaks into bot).
inline UnitaryOp restrict_to_system(const UnitaryOp& op) {
  const Index N = op.dim() - 1;
  const Matrix& m = op.matrix();
  detail::require(linalg::max_abs(m.row(N).head(N)) <= kStructuralTol && linalg::max_abs(m.col(N).head(N)) <= kStructuralTol,
                  "restrict_to_system: operator mixes the system register with bot");
  return UnitaryOp(m.topLeftCorner(N, N), op.ledger());
}

// ---------------------------------------------------------------------------
// T-query compositions and their channel distance.

/// Action of W' (Haar on C^d) sampled on demand. Every new input direction
/// outside the span of earlier inputs is sent to a fresh uniformly random
/// unit vector orthogonal to the earlier images, which is exactly the
/// conditional law of a Haar unitary given its action so far.
class LazyHaarUnitary {
 public:
  LazyHaarUnitary(Index d, Rng& rng) : d_(d), rng_(&rng) {}

  Vector apply(const Vector& v) {
    detail::require<DimensionMismatch>(v.size() == d_, "LazyHaarUnitary: dimension mismatch");
    Vector r = v;
    Vector out = Vector::Zero(d_);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < in_.size(); ++i) {
        const Complex c = in_[i].dot(r);
        r -= c * in_[i];
        out += c * out_[i];
      }
    const double rn = r.norm();
    if (rn > 1e-13 * std::max(1.0, v.norm()) && static_cast<Index>(in_.size()) < d_) {
      in_.push_back(r / rn);
      out_.push_back(fresh_image());
      out += rn * out_.back();
    }
    return out;
  }

  std::size_t frame_size() const { return in_.size(); }

 private:
  Vector fresh_image() {
    for (;;) {
      Vector g = linalg::complex_gaussian(d_, *rng_);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : out_) g -= b * b.dot(g);
      const double nrm = g.norm();
      if (nrm > 1e-8) return g / nrm;
    }
  }

  Index d_;
  Rng* rng_;
  std::vector<Vector> in_, out_;
};

/// W on the system register as a callable; W must fix |0>.
using SystemAction = std::function<Vector(const Vector&)>;

/// Diamond distance between T applications of the ideal and of the
/// approximate simulated oracle, for one draw of (phi, W).
///
/// Both steps share W and V, so E_1 = A_ideal A_approx^{-1} =
/// S R S'^{dagger} acts only on span{psi, psi_perp, bot}. With
/// E_t = A_ideal^t A_approx^{-t} = I + L R^dagger the update is
/// E_{t+1} = E_1 (I + (A L)(A R)^dagger), A the approximate step, so only A's
/// action on the low-rank factors is needed. The non-trivial eigenvalues of
/// E_T are those of I + R^dagger L.
inline double composed_distance_low_rank(const RotationPlan& p, const SystemAction& V, const SystemAction& W, int T) {
  detail::require<SizeError>(T >= 0, "composed_distance: negative T");
  if (T == 0) return 0.0;
  const Index N = p.psi.dim();
  const Index D = N + 1;

  auto refl = [](const Vector& u, const Vector& x) -> Vector { return x - 2.0 * u * u.dot(x); };
  const Vector u_psi = oracles::canonical_axis(p.psi);
  const Vector u_perp = oracles::canonical_axis(p.psi_perp);
  const Vector u_phi = oracles::canonical_axis(p.phi);
  Eigen::MatrixX2cd E = Eigen::MatrixX2cd::Zero(D, 2);
  E.col(0).head(N) = p.psi_perp.amps();
  E.col(1).head(N) = p.psi.amps();
  const Eigen::Matrix2cd Rd = rotation_block(p) - Eigen::Matrix2cd::Identity();

  Matrix Q = Matrix::Zero(D, 3);
  Q.col(0).head(N) = p.psi.amps();
  Q.col(1).head(N) = p.psi_perp.amps();
  Q(N, 2) = 1.0;

  // E_1 Q = S R S' Q column by column; S' is Hermitian.
  Matrix E1Q(D, 3);
  for (Index c = 0; c < 3; ++c) {
    Vector x = refl(u_psi, refl(u_phi, refl(u_psi, Q.col(c))));
    x += E * (Rd * (E.adjoint() * x));
    E1Q.col(c) = refl(u_psi, refl(u_perp, refl(u_psi, x)));
  }
  const Eigen::Matrix3cd M = Q.adjoint() * E1Q;
  const Matrix L1 = Q * (M - Eigen::Matrix3cd::Identity());
  const Matrix& R1 = Q;

  auto apply_E1 = [&](const Vector& x) -> Vector { return x + L1 * (R1.adjoint() * x); };
  auto apply_A = [&](const Vector& x) -> Vector {
    Vector y = x;
    y.head(N) = V(W(Vector(x.head(N))));
    return refl(u_psi, refl(u_phi, refl(u_psi, y)));
  };

  Matrix L = L1, R = R1;
  for (int t = 1; t < T; ++t) {
    Matrix L2(D, L1.cols() + L.cols()), R2(D, R1.cols() + R.cols());
    L2.leftCols(L1.cols()) = L1;
    R2.leftCols(R1.cols()) = R1;
    for (Index c = 0; c < L.cols(); ++c) {
      L2.col(L1.cols() + c) = apply_E1(apply_A(L.col(c)));
      R2.col(R1.cols() + c) = apply_A(R.col(c));
    }
    L = std::move(L2);
    R = std::move(R2);
  }
  const Matrix small = Matrix::Identity(L.cols(), L.cols()) + R.adjoint() * L;
  auto eig = linalg::unitary_eigenvalues(small);
  eig.emplace_back(1.0);  // E_T - I has rank <= 3T < N + 1
  return linalg::diamond_distance_from_eigenvalues(eig);
}

/// Dense reference for the same quantity.
inline double composed_distance_dense(const PureState& psi, Seed seed, int T) {
  const SimulatedPrep ideal = simulate_U_psi(psi, seed, Mode::ideal);
  const SimulatedPrep approx = simulate_U_psi(psi, seed, Mode::approximate);
  return unitary_channel_diamond_distance(ideal.op.pow(T), approx.op.pow(T));
}

struct ChannelDistanceReport {
  int n = 0;
  int T = 0;
  std::int64_t trials = 0;
  double mean_distance = 0.0;
  double bound = 0.0;   // (10T + 4) / 2^{n/2}
  double margin = 0.0;  // bound - mean_distance
  Seed seed = 0;
  /// max over draws of distance / ((10T + 4) |beta|).
  double max_per_draw_ratio = 0.0;
  int resamples = 0;
};

/// Per draw: fresh psi and phi, a lazily sampled W, and the exact unitary
/// distance between the T-fold ideal and approximate compositions. By
/// convexity the mean upper-bounds the distance of the averaged channels.
inline ChannelDistanceReport channel_distance_bound_report(int n, int T, std::int64_t trials, Seed seed) {
  detail::require<SizeError>(n >= 1 && n <= 10, "channel_distance_bound_report: n must be in [1, 10]");
  detail::require<SizeError>(T >= 0 && T <= 4, "channel_distance_bound_report: T must be in [0, 4]");
  detail::require<UsageError>(trials >= 1, "channel_distance_bound_report: trials must be >= 1");
  ChannelDistanceReport rep;
  rep.n = n;
  rep.T = T;
  rep.trials = trials;
  rep.seed = seed;
  rep.bound = (10.0 * T + 4.0) / std::exp2(n / 2.0);
  const Index N = pow2(n);
  double acc = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const PureState psi = haar_state(n, derive_seed(seed, streams::kState, idx));
    Rng rng = make_rng(derive_seed(seed, streams::kAux, idx));
    int res = 0;
    const RotationPlan plan = draw_plan(psi, rng, &res);
    rep.resamples += res;
    const oracles::HouseholderMap Vh(plan.phi.amps());
    const SystemAction V = [&](const Vector& x) { return Vh(x); };
    LazyHaarUnitary Wp(N - 1, rng);
    const SystemAction W = [&](const Vector& x) {
      Vector y = x;
      if (N > 1) y.tail(N - 1) = Wp.apply(x.tail(N - 1));
      return y;
    };
    const double d = composed_distance_low_rank(plan, V, W, T);
    acc += d;
    const double per_draw_bound = (10.0 * T + 4.0) * std::abs(plan.beta);
    if (per_draw_bound > 0.0) rep.max_per_draw_ratio = std::max(rep.max_per_draw_ratio, d / per_draw_bound);
  }
  rep.mean_distance = acc / static_cast<double>(trials);
  rep.margin = rep.bound - rep.mean_distance;
  return rep;
}

}  // namespace xhogkit::uprep
