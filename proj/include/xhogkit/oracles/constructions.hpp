#pragma once

// Oracle families and the reductions between preparation and reflection
// oracles.

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/core/rng.hpp"
#include "xhogkit/oracles/oracle_handle.hpp"
#include "xhogkit/oracles/sign_function.hpp"

namespace xhogkit::oracles {

namespace detail_ {

inline void require_plain(const PureState& psi, const char* who) {
  detail::require<UsageError>(!psi.has_bot(), std::string(who) + ": state must not carry a bot index");
  detail::require<SizeError>(psi.qubits() >= 1 && psi.qubits() <= kMaxQubits,
                             std::string(who) + ": state dimension must be 2^n with 1 <= n <= 14");
}

inline Complex unit_phase(Complex z) {
  const double a = std::abs(z);
  return a > 0.0 ? z / a : Complex(1.0);
}

}  // namespace detail_

/// R_psi = I - 2|psi><psi|
inline UnitaryOp reflection_about(const PureState& psi) {
  detail_::require_plain(psi, "reflection_about");
  const Index N = psi.dim();
  return UnitaryOp::trusted(Matrix::Identity(N, N) - 2.0 * psi.amps() * psi.amps().adjoint());
}

/// Unit vector (|psi> - |bot>)/sqrt(2) in the extended space; the canonical
/// oracle is the reflection about it.
inline Vector canonical_axis(const PureState& psi) {
  const Index N = psi.dim();
  Vector u = Vector::Zero(N + 1);
  u.head(N) = psi.amps();
  u(N) = -1.0;
  return u / std::numbers::sqrt2;
}

/// Dense O_psi on dimension N+1, bot = index N.
inline UnitaryOp canonical_unitary(const PureState& psi) {
  detail_::require_plain(psi, "canonical_unitary");
  const Vector u = canonical_axis(psi);
  return UnitaryOp::trusted(Matrix::Identity(u.size(), u.size()) - 2.0 * u * u.adjoint());
}

inline OracleHandle canonical_oracle(const PureState& psi) {
  detail_::require_plain(psi, "canonical_oracle");
  return {OracleKind::canonical, "O_psi", psi.qubits(), OracleHandle::Reflector{canonical_axis(psi)},
          HiddenInstance{psi, std::nullopt}};
}

/// The reflection R_psi as a black box on dimension N.
inline OracleHandle reflection_oracle(const PureState& psi, std::string name = "R_psi") {
  detail_::require_plain(psi, "reflection_oracle");
  return {OracleKind::reflection, std::move(name), psi.qubits(), OracleHandle::Reflector{psi.amps()},
          HiddenInstance{psi, std::nullopt}};
}

enum class Completion { householder, gram_schmidt };

/// Unitary V with V|0> = |target>: a Householder reflection that maps e_0 to
/// the target up to its leading phase, times that phase on e_0. Applied to
/// vectors in O(N) without forming the matrix.
class HouseholderMap {
 public:
  explicit HouseholderMap(const Vector& target) : alpha_(detail_::unit_phase(target(0))), w_(-std::conj(alpha_) * target) {
    w_(0) += 1.0;  // e_0 - b with b_0 = |t_0| real
    const double w2 = w_.squaredNorm();
    scale_ = w2 > 1e-28 ? 2.0 / w2 : 0.0;
  }

  Vector operator()(Vector x) const {
    x(0) *= alpha_;
    if (scale_ != 0.0) x -= (scale_ * w_.dot(x)) * w_;
    return x;
  }

  Matrix matrix() const {
    const Index N = w_.size();
    Matrix V = Matrix::Identity(N, N);
    if (scale_ != 0.0) V -= scale_ * w_ * w_.adjoint();
    V.col(0) *= alpha_;
    return V;
  }

 private:
  Complex alpha_;
  Vector w_;
  double scale_ = 0.0;
};

inline Matrix householder_completion(const Vector& target) { return HouseholderMap(target).matrix(); }

/// Unitary V with V|0> = |target>, completed by modified Gram-Schmidt over
/// the standard basis.
inline Matrix gram_schmidt_completion(const Vector& target) {
  const Index N = target.size();
  Matrix V(N, N);
  V.col(0) = target;
  Index filled = 1;
  for (Index j = 0; j < N && filled < N; ++j) {
    Vector c = linalg::basis_vector(N, j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < filled; ++k) c -= V.col(k) * V.col(k).dot(c);
    const double nrm = c.norm();
    if (nrm < 1e-8) continue;
    V.col(filled++) = c / nrm;
  }
  detail::require<NumericalError>(filled == N, "gram_schmidt_completion: basis completion failed");
  return V;
}

/// U_psi = V (1 (+) W') with V|0> = |psi> and W' Haar on the complement of |0>.
inline Matrix random_prep_matrix(const PureState& psi, Rng& rng, Completion completion = Completion::householder) {
  detail_::require_plain(psi, "random_prep_oracle");
  const Index N = psi.dim();
  const Matrix V = completion == Completion::householder ? householder_completion(psi.amps())
                                                         : gram_schmidt_completion(psi.amps());
  Matrix W = Matrix::Zero(N, N);
  W(0, 0) = 1.0;
  W.bottomRightCorner(N - 1, N - 1) = haar_unitary_matrix(N - 1, rng);
  return V * W;
}

inline OracleHandle random_prep_oracle(const PureState& psi, Seed seed, Completion completion = Completion::householder) {
  Rng rng = make_rng(seed);
  return {OracleKind::random_prep, "U_psi", psi.qubits(),
          OracleHandle::Dense{random_prep_matrix(psi, rng, completion)}, HiddenInstance{psi, std::nullopt}};
}

inline UnitaryOp fourier_phase_unitary(const SignFunction& f) {
  Eigen::VectorXcd d(static_cast<Index>(f.size()));
  for (std::size_t x = 0; x < f.size(); ++x) d(static_cast<Index>(x)) = static_cast<double>(f(x));
  return UnitaryOp::trusted(d.asDiagonal().toDenseMatrix());
}

inline OracleHandle fourier_phase_oracle(const SignFunction& f) {
  return {OracleKind::fourier_phase, "U_f", f.n(), OracleHandle::Diagonal{f.table()},
          HiddenInstance{std::nullopt, f}};
}

// ---------------------------------------------------------------------------
// Reductions.

/// Treat `prep` as one call to an oracle: its own ledger if it has one,
/// otherwise a single call named `name`.
inline QueryLedger unit_call(const UnitaryOp& prep, const std::string& name) {
  return prep.ledger().empty() ? QueryLedger{{name, 1}} : prep.ledger();
}

/// Checks that prep|0^{n+m}> = |psi>|phi> and returns psi. The output is
/// reshaped into a 2^n x 2^m matrix which must have rank one.
inline PureState product_output_system_state(const UnitaryOp& prep, int n_system) {
  const int total = log2_exact(prep.dim());
  detail::require<ConstructionError>(total >= n_system && n_system >= 1,
                                     "refl_from_prep: prep must act on at least n qubits");
  const Index rows = pow2(n_system);
  const Index cols = pow2(total - n_system);
  const Vector out = prep.matrix().col(0);
  Matrix M(rows, cols);
  for (Index x = 0; x < rows; ++x)
    for (Index g = 0; g < cols; ++g) M(x, g) = out(x * cols + g);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-10)
    throw ConstructionError("refl_from_prep: prep|0> is not a product state (second singular value " +
                            std::to_string(s(1)) + ")");
  return PureState::normalized(svd.matrixU().col(0));
}

/// (P S_0 P^dagger)^t with S_0 = I - 2|0><0|. On inputs |x>|phi> this acts as
/// R_psi^t (x) I. Charged 2t+1 calls to prep: two per reflection plus the
/// preparation that produced |phi> in the first place.
inline UnitaryOp refl_from_prep(const UnitaryOp& prep, int n_system, int t, const std::string& name = "prep") {
  detail::require<SizeError>(t >= 0, "refl_from_prep: negative query budget");
  (void)product_output_system_state(prep, n_system);
  const Index D = prep.dim();
  Matrix S0 = Matrix::Identity(D, D);
  S0(0, 0) = -1.0;
  const UnitaryOp step = UnitaryOp::trusted(prep.matrix() * S0 * prep.matrix().adjoint());
  return step.pow(t).with_ledger(scale_ledger(unit_call(prep, name), 2 * t + 1));
}

namespace circuit {

/// Gate on the ancilla (least significant qubit) of a register of `sys_dim` x 2.
inline Matrix on_ancilla(Index sys_dim, const Matrix& g) { return linalg::kron(Matrix::Identity(sys_dim, sys_dim), g); }

/// |s>|a> -> (a == 1 ? U|s> : |s>)|a>
inline Matrix controlled_by_ancilla(const Matrix& u) {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return linalg::kron(Matrix::Identity(u.rows(), u.cols()), p0) + linalg::kron(u, p1);
}

/// Flip the ancilla exactly when the system register is |0...0>.
inline Matrix open_controlled_flip(Index sys_dim) {
  Matrix m = Matrix::Identity(2 * sys_dim, 2 * sys_dim);
  m(0, 0) = m(1, 1) = 0.0;
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::numbers::sqrt2;
}

}  // namespace circuit

/// Circuit C on n+2 qubits (system: n qubits plus one flag qubit; then one
/// ancilla) with C|0^{n+2}> = ((|psi>|1> - |0^n>|0>)/sqrt(2)) |0>.
///
/// The bot state is encoded as |0^n>|0> and |psi> as |psi>|1>, so the flagged
/// preparation is U~ = prep (x) X and V = I prepares bot. Stages: X and H on
/// the ancilla; controlled-V; controlled-U~^dagger; X on the ancilla; flip the
/// ancilla when the system reads all zeros; U~. Two calls to prep.
inline UnitaryOp canonical_prep_circuit(const UnitaryOp& prep, const std::string& name = "prep") {
  const int n = log2_exact(prep.dim());
  detail::require<SizeError>(n >= 1 && n + 2 <= kMaxQubits, "canonical_from_prep: prep must act on 1..12 qubits");
  using namespace circuit;
  const Matrix Ut = linalg::kron(prep.matrix(), pauli_x());
  const Index S = Ut.rows();
  const Matrix V = Matrix::Identity(S, S);

  Matrix C = on_ancilla(S, pauli_x());
  C = on_ancilla(S, hadamard()) * C;
  C = controlled_by_ancilla(V) * C;
  C = controlled_by_ancilla(Ut.adjoint()) * C;
  C = on_ancilla(S, pauli_x()) * C;
  C = open_controlled_flip(S) * C;
  C = linalg::kron(Ut, Matrix::Identity(2, 2)) * C;
  return UnitaryOp::trusted(std::move(C), scale_ledger(unit_call(prep, name), 2));
}

/// t simulated canonical-oracle queries: (C S_0 C^dagger)^t, the reflection
/// about C|0>. Charged 4t+2 calls to prep.
inline UnitaryOp canonical_from_prep(const UnitaryOp& prep, int t, const std::string& name = "prep") {
  detail::require<SizeError>(t >= 0, "canonical_from_prep: negative query budget");
  const UnitaryOp C = canonical_prep_circuit(prep, name);
  const Index D = C.dim();
  Matrix S0 = Matrix::Identity(D, D);
  S0(0, 0) = -1.0;
  const UnitaryOp step = UnitaryOp::trusted(C.matrix() * S0 * C.matrix().adjoint());
  return step.pow(t).with_ledger(scale_ledger(unit_call(prep, name), 4 * t + 2));
}

/// Isometry from the extended space (N basis states plus bot at index N) into
/// the circuit register of canonical_from_prep: |x> -> |x>|1>|0>, bot -> |0^n>|0>|0>.
inline Matrix encoding_isometry(int n) {
  const Index N = pow2(n);
  Matrix E = Matrix::Zero(4 * N, N + 1);
  for (Index x = 0; x < N; ++x) E(4 * x + 2, x) = 1.0;
  E(0, N) = 1.0;
  return E;
}

inline Vector encode_extended(const Vector& v) {
  const int n = log2_exact(v.size() - 1);
  detail::require<SizeError>(n >= 1, "encode_extended: expected dimension 2^n + 1");
  return encoding_isometry(n) * v;
}

/// max |O_sim E - E O_psi| over all entries, i.e. the worst deviation on the
/// basis inputs of the extended space.
inline double encoded_oracle_deviation(const UnitaryOp& simulated, const PureState& psi) {
  const Matrix E = encoding_isometry(psi.qubits());
  detail::require<DimensionMismatch>(simulated.dim() == E.rows(), "encoded_oracle_deviation: dimension mismatch");
  return linalg::max_abs(simulated.matrix() * E - E * canonical_unitary(psi).matrix());
}

}  // namespace xhogkit::oracles
