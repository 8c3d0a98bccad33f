#pragma once

// Dense complex state/operator arithmetic: pure states, unitaries with a query
// ledger, density matrices, Haar sampling, Born-rule measurement and the two
// distance measures used throughout (trace distance, unitary-channel diamond
// distance).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/rng.hpp"

namespace xhogkit {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr int kMaxQubits = 14;
inline constexpr Index kMaxDim = Index{1} << kMaxQubits;

inline Index pow2(int n) { return Index{1} << n; }

/// Exact base-2 log of a power of two, or -1.
inline int log2_exact(Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) return -1;
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

namespace linalg {

inline Vector basis_vector(Index dim, Index i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// ||U^dagger U - I||_max
inline double unitarity_defect(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

/// Kronecker product a (x) b, with a acting on the more significant register.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Standard complex Gaussian vector, E|v_i|^2 = 1.
inline Vector complex_gaussian(Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

/// Uniform unit vector in C^dim.
inline Vector haar_vector(Index dim, Rng& rng) {
  Vector v = complex_gaussian(dim, rng);
  return v / v.norm();
}

}  // namespace linalg

// ---------------------------------------------------------------------------

/// Unit vector over a computational basis, optionally extended by one extra
/// basis index (the last one) standing for the flag state |bot>.
class PureState {
 public:
  PureState() = default;

  explicit PureState(Vector amps, bool has_bot = false) : amps_(std::move(amps)), has_bot_(has_bot) {
    detail::require<SizeError>(amps_.size() >= (has_bot_ ? 2 : 1), "PureState: empty amplitude vector");
    const double defect = std::abs(amps_.squaredNorm() - 1.0);
    detail::require(defect <= kStructuralTol, "PureState: amplitudes not normalized (|norm^2 - 1| = " +
                                                  std::to_string(defect) + ")");
  }

  static PureState basis(Index dim, Index i, bool has_bot = false) {
    detail::require<SizeError>(i >= 0 && i < dim, "PureState::basis: index out of range");
    return PureState(linalg::basis_vector(dim, i), has_bot);
  }

  /// Normalizes `v` first; throws if it is (numerically) zero.
  static PureState normalized(const Vector& v, bool has_bot = false) {
    const double nrm = v.norm();
    detail::require<NumericalError>(nrm > 1e-300, "PureState::normalized: zero vector");
    return PureState(v / nrm, has_bot);
  }

  Index dim() const { return amps_.size(); }
  /// Number of computational-basis (non-bot) indices.
  Index system_dim() const { return dim() - (has_bot_ ? 1 : 0); }
  bool has_bot() const { return has_bot_; }
  Index bot_index() const {
    detail::require<UsageError>(has_bot_, "PureState: no bot index");
    return dim() - 1;
  }
  /// n such that system_dim() == 2^n, or -1.
  int qubits() const { return log2_exact(system_dim()); }

  const Vector& amps() const { return amps_; }
  Complex operator[](Index i) const { return amps_(i); }
  double probability(Index i) const { return std::norm(amps_(i)); }

  /// Same state, embedded in a space with one appended bot index.
  PureState with_bot() const {
    detail::require<UsageError>(!has_bot_, "PureState::with_bot: already extended");
    Vector v = Vector::Zero(dim() + 1);
    v.head(dim()) = amps_;
    return PureState(std::move(v), true);
  }

  Complex inner(const PureState& other) const {
    detail::require<DimensionMismatch>(dim() == other.dim(), "PureState::inner: dimension mismatch");
    return amps_.dot(other.amps_);  // <this|other>
  }

 private:
  Vector amps_;
  bool has_bot_ = false;
};

// ---------------------------------------------------------------------------

/// Oracle name -> number of calls.
using QueryLedger = std::map<std::string, std::int64_t, std::less<>>;

inline QueryLedger merge_ledgers(QueryLedger a, const QueryLedger& b) {
  for (const auto& [k, v] : b) a[k] += v;
  return a;
}

inline QueryLedger scale_ledger(QueryLedger a, std::int64_t t) {
  for (auto& [k, v] : a) v *= t;
  return a;
}

/// Dense unitary with a ledger recording how many oracle calls its
/// construction consumed. Ledgers add under composition.
class UnitaryOp {
 public:
  UnitaryOp() = default;

  explicit UnitaryOp(Matrix m, QueryLedger ledger = {}) : mat_(std::move(m)), ledger_(std::move(ledger)) {
    detail::require<SizeError>(mat_.rows() == mat_.cols() && mat_.rows() > 0, "UnitaryOp: matrix must be square");
    const double defect = linalg::unitarity_defect(mat_);
    detail::require(defect <= kStructuralTol, "UnitaryOp: matrix is not unitary (defect " + std::to_string(defect) + ")");
  }

  static UnitaryOp identity(Index dim) { return UnitaryOp(Unchecked{}, Matrix::Identity(dim, dim), {}); }

  Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  const QueryLedger& ledger() const { return ledger_; }

  std::int64_t queries(std::string_view name) const {
    const auto it = ledger_.find(name);
    return it == ledger_.end() ? 0 : it->second;
  }

  std::int64_t total_queries() const {
    std::int64_t s = 0;
    for (const auto& [k, v] : ledger_) s += v;
    return s;
  }

  /// U^dagger costs the same calls as U.
  UnitaryOp adjoint() const { return UnitaryOp(Unchecked{}, mat_.adjoint(), ledger_); }

  /// Block-diagonal diag(I, U); control is the most significant qubit.
  UnitaryOp controlled() const {
    Matrix c = Matrix::Identity(2 * dim(), 2 * dim());
    c.bottomRightCorner(dim(), dim()) = mat_;
    return UnitaryOp(Unchecked{}, std::move(c), ledger_);
  }

  /// this (x) other; `this` acts on the more significant register.
  UnitaryOp tensor(const UnitaryOp& other) const {
    return UnitaryOp(Unchecked{}, linalg::kron(mat_, other.mat_), merge_ledgers(ledger_, other.ledger_));
  }

  UnitaryOp pow(int t) const {
    detail::require<SizeError>(t >= 0, "UnitaryOp::pow: negative exponent");
    Matrix acc = Matrix::Identity(dim(), dim());
    for (int i = 0; i < t; ++i) acc = mat_ * acc;
    return UnitaryOp(Unchecked{}, std::move(acc), scale_ledger(ledger_, t));
  }

  UnitaryOp with_ledger(QueryLedger ledger) const { return UnitaryOp(Unchecked{}, mat_, std::move(ledger)); }

  Vector apply(const Vector& v) const {
    detail::require<DimensionMismatch>(v.size() == dim(), "UnitaryOp::apply: dimension mismatch");
    return mat_ * v;
  }

  /// a * b means "apply b, then a".
  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
    detail::require<DimensionMismatch>(a.dim() == b.dim(), "UnitaryOp: composition dimension mismatch");
    return UnitaryOp(Unchecked{}, a.mat_ * b.mat_, merge_ledgers(a.ledger_, b.ledger_));
  }

  /// For constructions whose unitarity is guaranteed by construction (QR
  /// factors, reflections, products of unitaries).
  static UnitaryOp trusted(Matrix m, QueryLedger ledger = {}) { return UnitaryOp(Unchecked{}, std::move(m), std::move(ledger)); }

 private:
  struct Unchecked {};
  UnitaryOp(Unchecked, Matrix m, QueryLedger ledger) : mat_(std::move(m)), ledger_(std::move(ledger)) {}

  Matrix mat_;
  QueryLedger ledger_;
};

// ---------------------------------------------------------------------------

class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {
    detail::require<SizeError>(mat_.rows() == mat_.cols() && mat_.rows() > 0, "DensityMatrix: matrix must be square");
    detail::require(linalg::max_abs(mat_ - mat_.adjoint()) <= kStructuralTol, "DensityMatrix: not Hermitian");
    detail::require(std::abs(mat_.trace() - Complex(1.0)) <= kStructuralTol, "DensityMatrix: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    detail::require<NumericalError>(es.info() == Eigen::Success, "DensityMatrix: eigensolver failed");
    detail::require(es.eigenvalues().minCoeff() >= -kStructuralTol, "DensityMatrix: not positive semidefinite");
  }

  static DensityMatrix pure(const PureState& s) {
    return DensityMatrix(Trusted{}, s.amps() * s.amps().adjoint());
  }

  Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  Complex operator()(Index i, Index j) const { return mat_(i, j); }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, Matrix m) : mat_(std::move(m)) {}

  Matrix mat_;
};

// ---------------------------------------------------------------------------
// Sampling.

inline PureState haar_state(int n, Rng& rng) {
  detail::require<SizeError>(n >= 1 && n <= kMaxQubits, "haar_state: qubit count must be in [1, 14]");
  return PureState(linalg::haar_vector(pow2(n), rng));
}

/// Haar-random n-qubit state; a pure function of `seed`.
inline PureState haar_state(int n, Seed seed) {
  Rng rng = make_rng(seed);
  return haar_state(n, rng);
}

/// Ginibre matrix -> QR -> multiply Q's columns by the phases of diag(R).
/// Without the phase correction the output is not Haar distributed.
inline Matrix haar_unitary_matrix(Index dim, Rng& rng) {
  detail::require<SizeError>(dim >= 1 && dim <= kMaxDim, "haar_unitary: dimension must be in [1, 2^14]");
  Matrix z(dim, dim);
  for (Index j = 0; j < dim; ++j) z.col(j) = linalg::complex_gaussian(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0 ? d / a : Complex(1.0));
  }
  return q;
}

inline UnitaryOp haar_unitary(Index dim, Rng& rng) { return UnitaryOp::trusted(haar_unitary_matrix(dim, rng)); }

inline UnitaryOp haar_unitary(Index dim, Seed seed) {
  Rng rng = make_rng(seed);
  return haar_unitary(dim, rng);
}

/// Index i with probability |amps_i|^2 (normalized by the total weight, so a
/// state that is unit-norm only to 1e-10 still yields a proper distribution).
inline Index sample_born(const Vector& amps, Rng& rng) {
  double total = 0.0;
  for (Index i = 0; i < amps.size(); ++i) total += std::norm(amps(i));
  detail::require<NumericalError>(total > 0.0, "measure: zero state");
  std::uniform_real_distribution<double> u(0.0, total);
  const double target = u(rng);
  double acc = 0.0;
  Index last_nonzero = 0;
  for (Index i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps(i));
    if (p > 0.0) last_nonzero = i;
    acc += p;
    if (target < acc) return i;
  }
  return last_nonzero;
}

inline Index measure_computational(const PureState& state, Rng& rng) { return sample_born(state.amps(), rng); }

inline Index measure_computational(const PureState& state, Seed seed) {
  Rng rng = make_rng(seed);
  return measure_computational(state, rng);
}

// ---------------------------------------------------------------------------
// Distances.

/// (1/2) * sum of singular values of (a - b). For the Hermitian difference the
/// singular values are the absolute eigenvalues.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  detail::require<DimensionMismatch>(a.rows() == b.rows() && a.cols() == b.cols(), "trace_distance: dimension mismatch");
  const Matrix d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  detail::require<NumericalError>(es.info() == Eigen::Success, "trace_distance: eigensolver failed");
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

namespace linalg {

inline double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

inline double origin_distance_to_segment(Complex p, Complex q) {
  const Complex d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p);
  const double t = std::clamp(-(p.real() * d.real() + p.imag() * d.imag()) / len2, 0.0, 1.0);
  return std::abs(p + t * d);
}

/// Euclidean distance from 0 to the convex hull of a finite point set
/// (Andrew's monotone chain, then point-in-polygon or nearest edge).
inline double origin_distance_to_hull(std::span<const Complex> points) {
  detail::require<SizeError>(!points.empty(), "origin_distance_to_hull: no points");
  std::vector<Complex> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return std::abs(pts[0]);

  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Complex& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first

  if (hull.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < hull.size() && inside; ++i)
      inside = cross(hull[i], hull[(i + 1) % hull.size()], Complex(0.0)) >= 0.0;
    if (inside) return 0.0;
  }
  double best = std::abs(hull[0]);
  for (std::size_t i = 0; i < hull.size(); ++i)
    best = std::min(best, origin_distance_to_segment(hull[i], hull[(i + 1) % hull.size()]));
  return best;
}

/// Eigenvalues of a (numerically) unitary matrix.
inline std::vector<Complex> unitary_eigenvalues(const Matrix& u) {
  Eigen::ComplexEigenSolver<Matrix> es(u, false);
  detail::require<NumericalError>(es.info() == Eigen::Success, "unitary eigensolver did not converge");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

/// Diamond distance between the channels of two unitaries whose product
/// V W^dagger has the given eigenvalues.
///
/// The eigenvalues lie on the unit circle. If they fit in an arc shorter than
/// pi, the nearest hull point to 0 lies on the chord joining the arc's end
/// points p, q, and 2 sqrt(1 - d^2) = |p - q|. Otherwise 0 is in the hull and
/// the distance is 2. Evaluating |p - q| directly avoids the cancellation in
/// 1 - d^2 when d is close to 1.
inline double diamond_distance_from_eigenvalues(std::span<const Complex> eig) {
  detail::require<SizeError>(!eig.empty(), "diamond distance: no eigenvalues");
  std::vector<double> ang;
  ang.reserve(eig.size());
  for (const Complex& l : eig) ang.push_back(std::arg(l));
  std::sort(ang.begin(), ang.end());
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double best_gap = ang.front() + two_pi - ang.back();
  std::size_t gap_end = 0;  // the arc starts at ang[gap_end]
  for (std::size_t i = 1; i < ang.size(); ++i) {
    const double g = ang[i] - ang[i - 1];
    if (g > best_gap) {
      best_gap = g;
      gap_end = i;
    }
  }
  const double arc = two_pi - best_gap;
  if (arc >= std::numbers::pi) return 2.0;
  const double a0 = ang[gap_end];
  const double a1 = ang[(gap_end + ang.size() - 1) % ang.size()];
  return std::abs(std::polar(1.0, a0) - std::polar(1.0, a1));
}

}  // namespace linalg

/// Diamond-norm distance between the channels rho -> V rho V^dagger and
/// rho -> W rho W^dagger.
inline double unitary_channel_diamond_distance(const Matrix& v, const Matrix& w) {
  detail::require<DimensionMismatch>(v.rows() == w.rows() && v.cols() == w.cols(),
                                     "unitary_channel_diamond_distance: dimension mismatch");
  const auto eig = linalg::unitary_eigenvalues(v * w.adjoint());
  return linalg::diamond_distance_from_eigenvalues(eig);
}

inline double unitary_channel_diamond_distance(const UnitaryOp& v, const UnitaryOp& w) {
  return unitary_channel_diamond_distance(v.matrix(), w.matrix());
}

}  // namespace xhogkit
