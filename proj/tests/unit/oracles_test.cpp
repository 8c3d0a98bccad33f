#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "support/stats.hpp"
#include "xhogkit/oracles/constructions.hpp"
#include "xhogkit/oracles/oracle_handle.hpp"
#include "xhogkit/oracles/sign_function.hpp"

using namespace xhogkit;
using namespace xhogkit::oracles;

namespace {

PureState plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return PureState::normalized(v);
}

Matrix hadamard_n(int n) {
  Matrix H = Matrix::Ones(1, 1);
  for (int q = 0; q < n; ++q) H = linalg::kron(H, circuit::hadamard());
  return H;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sign functions and the Fourier transform

TEST(SignFunction, HexRoundTripAndConvention) {
  EXPECT_EQ(SignFunction::from_bits(2, 0b1000).to_hex(), "1");  // (+,+,+,-)
  EXPECT_EQ(SignFunction::from_bits(2, 0b0001).to_hex(), "8");  // f(0) = -1 is the top bit
  EXPECT_EQ(SignFunction::constant(3).to_hex(), "00");
  EXPECT_EQ(SignFunction::constant(1, -1).to_hex(), "3");
  Rng rng = make_rng(4);
  for (int n = 1; n <= 6; ++n)
    for (int i = 0; i < 10; ++i) {
      const auto f = SignFunction::random(n, rng);
      EXPECT_EQ(SignFunction::from_hex(n, f.to_hex()), f);
    }
}

TEST(SignFunction, HexRejectsMalformedInput) {
  EXPECT_THROW(SignFunction::from_hex(2, "10"), UsageError);
  EXPECT_THROW(SignFunction::from_hex(3, "g0"), UsageError);
  EXPECT_THROW(SignFunction::from_hex(1, "4"), UsageError);
  EXPECT_THROW(SignFunction::from_hex(3, "A0"), UsageError);
}

TEST(SignFunction, RejectsBadTables) {
  EXPECT_THROW(SignFunction(2, {1, 1, 1}), SizeError);
  EXPECT_THROW(SignFunction(1, {1, 0}), InvariantError);
}

TEST(FourierCoefficient, ConstantFunction) {
  const auto f = SignFunction::constant(3);
  EXPECT_EQ(fourier_coefficient(f, 0), 1);
  for (std::uint64_t z = 1; z < 8; ++z) EXPECT_EQ(fourier_coefficient(f, z), 0);
}

TEST(FourierCoefficient, CharactersAreOrthogonal) {
  for (std::uint64_t y = 0; y < 8; ++y) {
    const auto f = SignFunction::character(3, y);
    for (std::uint64_t z = 0; z < 8; ++z) EXPECT_EQ(fourier_coefficient(f, z), z == y ? 1 : 0);
  }
}

TEST(FourierCoefficient, HandComputedValue) {
  EXPECT_EQ(fourier_coefficient(SignFunction::from_bits(2, 0b1000), 0), Rational(1, 2));
}

TEST(FourierCoefficient, ParsevalIsExactForEveryFunctionUpToFourQubits) {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (1U << n)); ++bits) {
      const auto f = SignFunction::from_bits(n, bits);
      Rational s = 0;
      for (std::uint64_t z = 0; z < f.size(); ++z) s += fourier_coefficient(f, z) * fourier_coefficient(f, z);
      ASSERT_EQ(s, 1) << n << " " << bits;
    }
  // n = 4 through the integer spectrum: sum_z W_z^2 = N^2
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << 16); ++bits) {
    std::int64_t s = 0;
    for (auto w : walsh_spectrum(SignFunction::from_bits(4, bits))) s += w * w;
    ASSERT_EQ(s, 256) << bits;
  }
}

TEST(FourierSamplingState, SpecialCases) {
  EXPECT_LE(linalg::max_abs(fourier_sampling_state(SignFunction::constant(3)).amps() - linalg::basis_vector(8, 0)), 1e-15);
  const auto f = SignFunction(1, {1, -1});
  EXPECT_LE(linalg::max_abs(fourier_sampling_state(f).amps() - linalg::basis_vector(2, 1)), 1e-15);
}

TEST(FourierSamplingState, MatchesDenseCircuit) {
  Rng rng = make_rng(9);
  for (int n = 1; n <= 5; ++n) {
    const auto f = SignFunction::random(n, rng);
    const Vector dense = hadamard_n(n) * fourier_phase_unitary(f).matrix() * hadamard_n(n) * linalg::basis_vector(pow2(n), 0);
    EXPECT_LE(linalg::max_abs(dense - fourier_sampling_state(f).amps()), 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Reflections and oracles

TEST(Reflection, BasisAndPlusStates) {
  Matrix want(2, 2);
  want << -1.0, 0.0, 0.0, 1.0;
  EXPECT_LE(linalg::max_abs(reflection_about(PureState::basis(2, 0)).matrix() - want), 1e-15);
  want << 0.0, -1.0, -1.0, 0.0;
  EXPECT_LE(linalg::max_abs(reflection_about(plus_state()).matrix() - want), 1e-15);
}

TEST(Reflection, IsAnInvolution) {
  for (Seed s = 0; s < 10; ++s) {
    const Matrix R = reflection_about(haar_state(3, s)).matrix();
    EXPECT_LE(linalg::max_abs(R * R - Matrix::Identity(8, 8)), 1e-12);
  }
}

TEST(CanonicalOracle, SwapsPsiAndBot) {
  for (Seed s = 0; s < 10; ++s) {
    const PureState psi = haar_state(3, s);
    OracleHandle o = canonical_oracle(psi);
    EXPECT_EQ(o.dim(), 9);
    const Vector out = o.apply(o.start_state());
    EXPECT_LE(linalg::max_abs(out - psi.with_bot().amps()), 1e-10);
    EXPECT_LE(linalg::max_abs(o.apply(out) - o.start_state()), 1e-10);
    EXPECT_EQ(o.queries(), 2);
  }
}

TEST(CanonicalOracle, SingleQubitMatrix) {
  Matrix want = Matrix::Zero(3, 3);
  want(0, 2) = want(2, 0) = want(1, 1) = 1.0;
  EXPECT_LE(linalg::max_abs(canonical_unitary(PureState::basis(2, 0)).matrix() - want), 1e-15);
}

TEST(RandomPrep, FirstColumnIsPsi) {
  for (Seed s = 0; s < 10; ++s) {
    const PureState psi = haar_state(4, s);
    Rng rng = make_rng(s + 100);
    for (auto c : {Completion::householder, Completion::gram_schmidt}) {
      const Matrix U = random_prep_matrix(psi, rng, c);
      EXPECT_LE(linalg::max_abs(U.col(0) - psi.amps()), 1e-10);
      EXPECT_LE(linalg::unitarity_defect(U), 1e-10);
    }
  }
}

TEST(RandomPrep, OneQubitBasisStateIsDiagonal) {
  Rng rng = make_rng(1);
  const Matrix U = random_prep_matrix(PureState::basis(2, 0), rng);
  EXPECT_NEAR(std::abs(U(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(U(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(U(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(U(1, 1)), 1.0, 1e-12);
}

TEST(RandomPrep, LawDoesNotDependOnTheCompletion) {
  // Moments of a few entries over 10^4 draws, Householder vs Gram-Schmidt.
  const PureState psi = haar_state(2, Seed{5});
  auto moments = [&](Completion c, Seed seed) {
    Rng rng = make_rng(seed);
    std::vector<std::vector<double>> xs(3, std::vector<double>(10000));
    for (std::size_t i = 0; i < 10000; ++i) {
      const Matrix U = random_prep_matrix(psi, rng, c);
      xs[0][i] = std::norm(U(0, 1));
      xs[1][i] = std::norm(U(3, 3));
      xs[2][i] = U(1, 2).real();
    }
    std::vector<xhogkit::testing::MeanSe> out;
    for (const auto& v : xs) out.push_back(xhogkit::testing::mean_se(v));
    return out;
  };
  const auto a = moments(Completion::householder, 1);
  const auto b = moments(Completion::gram_schmidt, 2);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double se = std::hypot(a[j].se, b[j].se);
    EXPECT_LE(std::abs(a[j].mean - b[j].mean), 3.0 * se) << j;
  }
}

TEST(FourierPhaseOracle, DiagonalCases) {
  EXPECT_LE(linalg::max_abs(fourier_phase_unitary(SignFunction::constant(2)).matrix() - Matrix::Identity(4, 4)), 0.0);
  Matrix want = Matrix::Identity(2, 2);
  want(1, 1) = -1.0;
  EXPECT_LE(linalg::max_abs(fourier_phase_unitary(SignFunction::character(1, 1)).matrix() - want), 0.0);
  Rng rng = make_rng(2);
  const Matrix U = fourier_phase_unitary(SignFunction::random(3, rng)).matrix();
  EXPECT_LE(linalg::max_abs(U * U - Matrix::Identity(8, 8)), 0.0);
}

TEST(OracleHandle, ApplyThenAdjointIsIdentityAndCountsEachCall) {
  Rng rng = make_rng(3);
  const PureState psi = haar_state(3, Seed{8});
  std::vector<OracleHandle> handles = {canonical_oracle(psi), random_prep_oracle(psi, 4), reflection_oracle(psi),
                                       fourier_phase_oracle(SignFunction::random(3, rng))};
  for (auto& o : handles) {
    const Vector v = linalg::haar_vector(o.dim(), rng);
    const Vector w = o.apply_adjoint(o.apply(v));
    EXPECT_LE(linalg::max_abs(w - v), 1e-10) << o.name();
    EXPECT_EQ(o.queries(), 2) << o.name();
    Vector c = linalg::haar_vector(2 * o.dim(), rng);
    const Vector cc = o.apply_controlled(c);
    EXPECT_LE(linalg::max_abs(cc.head(o.dim()) - c.head(o.dim())), 0.0);
    EXPECT_LE(linalg::max_abs(cc.tail(o.dim()) - o.apply(c.tail(o.dim()))), 1e-12);
    EXPECT_EQ(o.queries(), 4) << o.name();
    EXPECT_EQ(o.ledger().at(o.name()), 4);
  }
}

TEST(OracleHandle, RejectsWrongDimensionAndTracksReveals) {
  OracleHandle o = canonical_oracle(haar_state(2, Seed{1}));
  EXPECT_THROW(o.apply(Vector::Zero(4)), DimensionMismatch);
  EXPECT_EQ(o.queries(), 0);
  EXPECT_EQ(o.reveal_count(), 0);
  const auto& h = o.reveal(verification::key());
  EXPECT_TRUE(h.psi.has_value());
  EXPECT_EQ(o.reveal_count(), 1);
  EXPECT_EQ(o.unitary(verification::key()).queries("O_psi"), 1);
}

// ---------------------------------------------------------------------------
// Reflection from a preparation unitary

TEST(ReflectionFromPrep, IdentityPrepGivesReflectionAboutZero) {
  for (int n = 1; n <= 3; ++n) {
    const UnitaryOp r = refl_from_prep(UnitaryOp::identity(pow2(n)), n, 1);
    EXPECT_LE(linalg::max_abs(r.matrix() - reflection_about(PureState::basis(pow2(n), 0)).matrix()), 1e-12);
  }
}

TEST(ReflectionFromPrep, LedgerIsTwoTPlusOne) {
  const UnitaryOp prep = UnitaryOp::identity(4);
  for (int t = 1; t <= 3; ++t) EXPECT_EQ(refl_from_prep(prep, 2, t).queries("prep"), 2 * t + 1);
  const UnitaryOp named(Matrix::Identity(4, 4), {{"U", 1}});
  EXPECT_EQ(refl_from_prep(named, 2, 3).queries("U"), 7);
}

TEST(ReflectionFromPrep, GarbageQubitMatchesDenseReflection) {
  const int n = 2;
  for (Seed s = 0; s < 10; ++s) {
    const PureState psi = haar_state(n, s);
    Rng rng = make_rng(s + 50);
    const Matrix U = random_prep_matrix(psi, rng);
    const Matrix G = haar_unitary_matrix(2, rng);
    const UnitaryOp prep = UnitaryOp::trusted(linalg::kron(U, G));
    const UnitaryOp r = refl_from_prep(prep, n, 1);
    const Matrix want = linalg::kron(reflection_about(psi).matrix(), Matrix::Identity(2, 2));
    for (Index x = 0; x < 4; ++x) {
      const Vector in = linalg::kron(linalg::basis_vector(4, x), Vector(G.col(0)));
      EXPECT_LE(linalg::max_abs(r.apply(in) - want * in), 1e-10);
    }
  }
}

TEST(ReflectionFromPrep, RejectsEntangledOutput) {
  // prep|00> = (|00> + |11>)/sqrt(2) is not a product state
  Matrix cnot_h = Matrix::Zero(4, 4);
  const double s = 1.0 / std::numbers::sqrt2;
  cnot_h << s, 0, s, 0, 0, s, 0, s, 0, s, 0, -s, s, 0, -s, 0;
  EXPECT_THROW(refl_from_prep(UnitaryOp(cnot_h), 1, 1), ConstructionError);
}

// ---------------------------------------------------------------------------
// Canonical oracle from a preparation unitary

TEST(CanonicalFromPrep, LedgerIsFourTPlusTwo) {
  const UnitaryOp prep = UnitaryOp::identity(4);
  for (int t = 1; t <= 3; ++t) EXPECT_EQ(canonical_from_prep(prep, t).queries("prep"), 4 * t + 2);
}

TEST(CanonicalFromPrep, IdentityPrepState) {
  // register order: system qubit, flag qubit, ancilla
  const UnitaryOp C = canonical_prep_circuit(UnitaryOp::identity(2));
  const Vector out = C.matrix().col(0);
  Vector want = Vector::Zero(8);
  want(0b010) = 1.0 / std::numbers::sqrt2;   // |0>|1>|0>
  want(0b000) = -1.0 / std::numbers::sqrt2;  // |0>|0>|0>
  EXPECT_NEAR(std::abs(want.dot(out)), 1.0, 1e-12);
}

TEST(CanonicalFromPrep, MatchesCanonicalOracleUnderEncoding) {
  for (int n = 1; n <= 3; ++n)
    for (Seed s = 0; s < 5; ++s) {
      const PureState psi = haar_state(n, s);
      Rng rng = make_rng(s + 7);
      const UnitaryOp prep = UnitaryOp::trusted(random_prep_matrix(psi, rng));
      EXPECT_LE(encoded_oracle_deviation(canonical_from_prep(prep, 1), psi), 1e-10);
    }
}

TEST(CanonicalFromPrep, EvenPowersActAsIdentityOnTheEncodedOracle) {
  const PureState psi = haar_state(2, Seed{3});
  Rng rng = make_rng(3);
  const UnitaryOp prep = UnitaryOp::trusted(random_prep_matrix(psi, rng));
  const Matrix E = encoding_isometry(2);
  EXPECT_LE(linalg::max_abs(canonical_from_prep(prep, 2).matrix() * E - E), 1e-10);
}
