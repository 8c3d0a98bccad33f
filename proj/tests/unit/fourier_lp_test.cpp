#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "xhogkit/fourier_lp/lp.hpp"
#include "xhogkit/fourier_lp/monomial.hpp"
#include "xhogkit/fourier_lp/simplex_solver.hpp"

using namespace xhogkit;
using namespace xhogkit::fourier_lp;

// Reference values below come from an independent Python enumeration
// (tests/oracles/fourier_oracle.py).

TEST(NaiveValue, ExactSmallCases) {
  EXPECT_EQ(naive_value_enumeration(1), Rational(2));
  EXPECT_EQ(naive_fourier_value(2), Rational(5, 2));
  EXPECT_EQ(naive_fourier_value(3), Rational(11, 4));
  EXPECT_EQ(naive_fourier_value(4), Rational(23, 8));
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(naive_value_binomial_moment(n), Rational(3) - Rational(2, 1 << n));
}

TEST(Monomial, SubsetHelpers) {
  EXPECT_EQ(make_subset({3, 1}), (Subset{1, 3}));
  EXPECT_THROW(make_subset({1, 1}), UsageError);
  EXPECT_EQ(xor_of({1, 2, 4}), 7U);
  EXPECT_EQ(subsets_of_size(4, 2).size(), 6U);
  EXPECT_EQ(subsets_of_size(5, 0).size(), 1U);
  EXPECT_EQ(subset_to_string({0, 3}), "{0,3}");
}

TEST(Monomial, FourierSquareEvaluatesExactly) {
  for (std::uint32_t z = 0; z < 4; ++z) {
    const auto p = fourier_square_poly(2, z);
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
      const auto f = SignFunction::from_bits(2, bits);
      const Rational fh = oracles::fourier_coefficient(f, z);
      ASSERT_EQ(p.evaluate(f), fh * fh);
      ASSERT_EQ(p.evaluate_bits(bits), fh * fh);
    }
  }
}

TEST(Monomial, DegreeCapIsEnforced) {
  MonomialPoly p(2, 2);
  EXPECT_THROW(p.set({0, 1, 2}, 1), SizeError);
  EXPECT_THROW(p.set({1, 0}, 1), UsageError);
}

TEST(Symmetrize, ShiftCovariantFamilyIsAFixedPoint) {
  const auto q = fourier_square_poly(2, 0);
  EXPECT_EQ(symmetrize_family(expand_symmetric(q)), q);
}

TEST(Symmetrize, NaiveFamilyCollapsesToZeroCoefficient) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(symmetrize_family(naive_family(n)), fourier_square_poly(n, 0));
  // and the shifted copies reproduce fhat(z)^2 through fhat(z) = (f . chi_z)^(0)
  const auto p = symmetrize_family(naive_family(2));
  for (std::uint32_t z = 0; z < 4; ++z) EXPECT_EQ(p.shifted(z), fourier_square_poly(2, z));
}

TEST(Symmetrize, ObjectiveIsUnchangedOnRandomFamilies) {
  Rng rng = make_rng(17);
  std::uniform_int_distribution<int> num(-4, 4);
  const auto pairs = subsets_of_size(4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    PolyFamily fam;
    for (std::uint32_t z = 0; z < 4; ++z) {
      MonomialPoly p(2, 2);
      p.set({}, Rational(num(rng), 7));
      for (std::uint32_t x = 0; x < 4; ++x) p.set({x}, Rational(num(rng), 11));
      for (const auto& s : pairs) p.set(s, Rational(num(rng), 13));
      fam.push_back(p);
    }
    EXPECT_EQ(family_objective(expand_symmetric(symmetrize_family(fam))), family_objective(fam)) << trial;
  }
}

TEST(Symmetrize, NaiveFamilyIsADistribution) {
  const auto c = check_distribution(naive_family(3));
  EXPECT_TRUE(c.nonnegative);
  EXPECT_TRUE(c.sums_to_one);
  EXPECT_EQ(family_objective(naive_family(3)), Rational(11, 32));
}

TEST(Reductions, NaivePolynomialSatisfiesFixedConstraints) {
  for (int n = 1; n <= 3; ++n) {
    const auto p = fourier_square_poly(n, 0);
    const std::uint32_t N = p.N();
    EXPECT_EQ(p.coeff({}), Rational(1, N));
    EXPECT_EQ(p.coeff({0, 1}), Rational(2, N * N));
    const auto rep = reduce_equality_constraints(p);
    EXPECT_TRUE(rep.feasible) << n;
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_EQ(rep.negation_symmetrized, p);
  }
}

TEST(Reductions, ConstantPolynomialHasNoFreeSet) {
  const auto rep = reduce_equality_constraints(MonomialPoly::constant(2, Rational(1, 4)));
  EXPECT_TRUE(rep.feasible);
  EXPECT_TRUE(rep.free_set.empty());
}

TEST(Reductions, OddMonomialIsNamed) {
  MonomialPoly p(2, 2);
  p.set({}, Rational(1, 4));
  p.set({2}, Rational(1, 9));
  const auto rep = reduce_equality_constraints(p);
  EXPECT_FALSE(rep.feasible);
  ASSERT_EQ(rep.violations.size(), 1U);
  EXPECT_NE(rep.violations[0].find("{2}"), std::string::npos);
  EXPECT_EQ(rep.negation_symmetrized.coeff({2}), 0);
}

TEST(Reductions, ZeroXorMonomialIsNamed) {
  MonomialPoly p(2, 4);
  p.set({}, Rational(1, 4));
  p.set({0, 1, 2, 3}, Rational(1, 9));
  const auto rep = reduce_equality_constraints(p);
  EXPECT_FALSE(rep.feasible);
  EXPECT_NE(rep.violations[0].find("{0,1,2,3}"), std::string::npos);
}

TEST(ObjectiveCoefficient, ClosedFormAndEnumeration) {
  EXPECT_EQ(objective_coefficient(2, {}), 1);
  EXPECT_EQ(objective_coefficient(2, {0, 3}), Rational(1, 2));
  EXPECT_EQ(objective_coefficient(3, {1, 6}), Rational(1, 4));
  EXPECT_EQ(objective_coefficient_enumeration(2, {0, 1, 2, 3}), 0);
  EXPECT_EQ(objective_coefficient_enumeration(2, {1}), 0);
  for (const auto& s : subsets_of_size(8, 2)) ASSERT_EQ(objective_coefficient_enumeration(3, s), Rational(1, 4));
  for (std::uint32_t size = 0; size <= 4; ++size)
    for (const auto& s : subsets_of_size(4, size)) EXPECT_EQ(objective_coefficient(2, s), objective_coefficient_enumeration(2, s));
}

TEST(Primal, Shape) {
  const auto lp1 = build_primal(1, 1);
  EXPECT_EQ(lp1.variables.size(), 1U);
  EXPECT_EQ(lp1.rows.size(), 4U);
  const auto lp2 = build_primal(2, 1);
  EXPECT_EQ(lp2.variables.size(), 6U);
  EXPECT_EQ(lp2.rows.size(), 16U);
  EXPECT_THROW(build_primal(2, 2), UsageError);
  EXPECT_THROW(build_primal(5, 1), SizeError);
}

TEST(Primal, NaivePointIsFeasibleWithValueBOverN) {
  for (int n = 1; n <= 4; ++n) {
    const auto lp = build_primal(n, 1);
    const auto c = naive_primal_point(lp);
    EXPECT_TRUE(primal_feasible(lp, c));
    EXPECT_EQ(primal_min_row(lp, c), 0);
    EXPECT_EQ(primal_objective(lp, c), (Rational(3) - Rational(2, 1 << n)) / (1 << n));
  }
}

TEST(Primal, NumericOptimum) {
  const double want[] = {1.0, 0.625, 0.34375};
  for (int n = 1; n <= 3; ++n) {
    const auto lp = build_primal(n, 1);
    const auto sol = solve_primal_numeric(lp);
    EXPECT_NEAR(sol.value, want[n - 1], 1e-9);
    EXPECT_NEAR(sol.value, to_double(dual_certificate(n).b) / (1 << n), 1e-9);
  }
}

TEST(Primal, ExactRationalOptimumAtTwoQubits) {
  const auto lp = build_primal(2, 1);
  const auto sol = solve_primal<Rational>(lp, Rational(0));
  EXPECT_EQ(sol.value, Rational(5, 8));
  EXPECT_EQ(sol.value, primal_objective(lp, naive_primal_point(lp)));
  EXPECT_TRUE(primal_feasible(lp, sol.c));
}

TEST(SimplexSolver, SmallProgram) {
  // max 3x + 2y  s.t.  x + y <= 4, x + 3y <= 6
  const std::vector<std::vector<double>> A = {{1, 1}, {1, 3}};
  const auto r = simplex_maximize<double>(A, {4, 6}, {3, 2}, 1e-12);
  EXPECT_NEAR(r.value, 12.0, 1e-12);
  EXPECT_THROW(simplex_maximize<double>({{-1.0}}, {1.0}, {1.0}, 1e-12), NumericalError);
  EXPECT_THROW(simplex_maximize<double>({{1.0}}, {-1.0}, {1.0}, 1e-12), UsageError);
}

TEST(HalfN, FourierCoefficients) {
  EXPECT_EQ(halfN_fourier_coefficient(4, 0), Rational(3, 8));
  EXPECT_EQ(halfN_fourier_coefficient(2, 1), Rational(-1, 2));
  EXPECT_EQ(halfN_fourier_coefficient(2, 0), Rational(1, 2));
  const Rational want8[] = {Rational(35, 128), Rational(-5, 128), Rational(3, 128), Rational(-5, 128), Rational(35, 128)};
  for (unsigned j = 0; j <= 4; ++j) {
    EXPECT_EQ(halfN_fourier_coefficient(8, j), want8[j]) << j;
    EXPECT_EQ(halfN_fourier_enumeration(8, 2 * j), want8[j]) << j;
  }
  for (unsigned size = 1; size <= 7; size += 2) EXPECT_EQ(halfN_fourier_enumeration(8, size), 0);
}

TEST(DualCertificate, Constants) {
  EXPECT_EQ(dual_certificate(1).kappa, Rational(1, 2));
  EXPECT_EQ(dual_certificate(1).b, 2);
  EXPECT_EQ(dual_certificate(2).kappa, Rational(1, 4));
  EXPECT_EQ(dual_certificate(2).b, Rational(5, 2));
  EXPECT_EQ(dual_certificate(3).kappa, Rational(1, 40));
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(dual_certificate(n).b, naive_fourier_value(n));
  for (int n = 5; n <= 10; ++n) EXPECT_EQ(dual_certificate(n).b, Rational(3) - Rational(2, 1 << n));
}

TEST(DualCertificate, VerifierTranscript) {
  const std::string t = verify_dual_feasibility(dual_certificate(2), VerifyMode::enumeration);
  EXPECT_NE(t.find("max |residual| = 0/1"), std::string::npos) << t;
  EXPECT_NE(t.find("OPTIMAL b = 5/2"), std::string::npos) << t;
  for (int n = 1; n <= 4; ++n) {
    const std::string e = verify_dual_feasibility(dual_certificate(n), VerifyMode::enumeration);
    EXPECT_NE(e.find("OPTIMAL b = " + to_fraction_string(Rational(3) - Rational(2, 1 << n))), std::string::npos);
  }
}

TEST(DualCertificate, ModesAgree) {
  for (int n = 1; n <= 4; ++n)
    EXPECT_EQ(verify_dual_feasibility(dual_certificate(n), VerifyMode::enumeration),
              verify_dual_feasibility(dual_certificate(n), VerifyMode::formula))
        << n;
}

TEST(DualCertificate, PerturbedKappaIsRejected) {
  auto cert = dual_certificate(2);
  cert.kappa += Rational(1, 1000);
  for (auto mode : {VerifyMode::enumeration, VerifyMode::formula}) {
    try {
      verify_dual_feasibility(cert, mode);
      FAIL() << "perturbed certificate accepted";
    } catch (const CertificateError& e) {
      EXPECT_NE(std::string(e.what()).find("|S|=2"), std::string::npos) << e.what();
    }
  }
}

TEST(DualCertificate, WrongBIsRejected) {
  auto cert = dual_certificate(3);
  cert.b += Rational(1, 8);
  EXPECT_THROW(verify_dual_feasibility(cert, VerifyMode::formula), CertificateError);
}
