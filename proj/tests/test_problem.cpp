#include <gtest/gtest.h>

#include "mep/problem.hpp"
#include "mep/section_model.hpp"
#include "support.hpp"

using namespace mep;

namespace {

ComplexMatrix scalar(cplx v) {
  ComplexMatrix m(1, 1);
  m << v;
  return m;
}

PolynomialMEP2 random_quadratic(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<Monomial, ComplexMatrix> t;
  for (Monomial m : testkit::monomials(testkit::Shape::full))
    t[m] = testkit::random_matrix(n, rng);
  return PolynomialMEP2(n, std::move(t));
}

}  // namespace

TEST(PolynomialMEP2, RejectsBadTerms) {
  std::map<Monomial, ComplexMatrix> only_constant{{{0, 0}, ComplexMatrix::Identity(2, 2)}};
  EXPECT_THROW(PolynomialMEP2(2, only_constant), ValidationError);
  std::map<Monomial, ComplexMatrix> wrong_size{{{1, 0}, ComplexMatrix::Identity(3, 3)}};
  EXPECT_THROW(PolynomialMEP2(2, wrong_size), ValidationError);
  std::map<Monomial, ComplexMatrix> negative{{{-1, 1}, ComplexMatrix::Identity(2, 2)}};
  EXPECT_THROW(PolynomialMEP2(2, negative), ValidationError);
  ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
  nan(1, 1) = std::numeric_limits<double>::infinity();
  std::map<Monomial, ComplexMatrix> non_finite{{{1, 0}, nan}};
  EXPECT_THROW(PolynomialMEP2(2, non_finite), ValidationError);
}

TEST(PolynomialMEP2, Degrees) {
  const PolynomialMEP2 p = make_form(build_matrices(SectionParams::table1_undamped()),
                                     SectionForm::tau_lambda_undamped);
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_EQ(p.degree_in(0), 2);
  EXPECT_EQ(p.degree_in(1), 1);
  EXPECT_TRUE(p.has_term(2, 0));
  EXPECT_FALSE(p.has_term(0, 2));
  EXPECT_EQ(p.term(0, 2), ComplexMatrix::Zero(2, 2));
}

TEST(LinearMEP, RejectsInconsistentEquations) {
  LinearEquation e1{{scalar(1), scalar(2), scalar(3)}};
  LinearEquation e2{{scalar(1), scalar(2)}};
  EXPECT_THROW(LinearMEP({e1, e2}), ValidationError);
  LinearEquation e3{{ComplexMatrix::Identity(2, 2), scalar(2), scalar(3)}};
  EXPECT_THROW(LinearMEP({e1, e3}), ValidationError);
  const LinearMEP ok({e1, e1});
  EXPECT_EQ(ok.n_params(), 2u);
  EXPECT_EQ(ok.param_names().size(), 2u);
}

TEST(ConjugateAugment, RealCoefficientsAreFixed) {
  std::mt19937_64 rng(12);
  std::map<Monomial, ComplexMatrix> t;
  for (Monomial m : testkit::monomials(testkit::Shape::full))
    t[m] = testkit::random_matrix(3, rng).real().cast<cplx>();
  const PolynomialMEP2 p(3, t);
  const auto [a, b] = conjugate_augment(p);
  EXPECT_EQ(a, p);
  EXPECT_EQ(b, p);
  // the undamped section form is not real: its linear tau term is imaginary
  const PolynomialMEP2 s = make_form(build_matrices(SectionParams::table1_undamped()),
                                     SectionForm::tau_lambda_undamped);
  EXPECT_FALSE(conjugate_augment(s).second == s);
}

TEST(ConjugateAugment, ConjugatesEntries) {
  std::map<Monomial, ComplexMatrix> t{{{0, 0}, scalar(1)}, {{1, 0}, scalar(cplx(0, 1))}};
  const auto [a, b] = conjugate_augment(PolynomialMEP2(1, t));
  EXPECT_EQ(b.term(1, 0)(0, 0), cplx(0, -1));
  EXPECT_EQ(b.terms().size(), a.terms().size());
}

TEST(ConjugateAugment, Involution) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PolynomialMEP2 p = random_quadratic(3, seed);
    const PolynomialMEP2 twice = conjugate_augment(conjugate_augment(p).second).second;
    EXPECT_EQ(twice, p);
  }
}

TEST(Evaluate, ConstantTerm) {
  std::mt19937_64 rng(1);
  const ComplexMatrix k = testkit::random_matrix(2, rng);
  std::map<Monomial, ComplexMatrix> t{{{0, 0}, k}, {{1, 0}, ComplexMatrix::Zero(2, 2)},
                                      {{0, 1}, ComplexMatrix::Zero(2, 2)}};
  EXPECT_EQ(evaluate(PolynomialMEP2(2, t), cplx(3, 1), cplx(-2, 5)), k);
}

TEST(Evaluate, SquareConstraintPencil) {
  // [[s, t], [t, 1]] with s as the first parameter and t as the second
  ComplexMatrix s(2, 2), t(2, 2), c(2, 2);
  s << 1, 0, 0, 0;
  t << 0, 1, 1, 0;
  c << 0, 0, 0, 1;
  const PolynomialMEP2 p(2, {{{0, 0}, c}, {{1, 0}, s}, {{0, 1}, t}});
  const ComplexMatrix w = evaluate(p, 4.0, 2.0);
  ComplexMatrix expected(2, 2);
  expected << 4, 2, 2, 1;
  EXPECT_EQ(w, expected);
  EXPECT_EQ(w.determinant(), cplx(0));
}

TEST(Evaluate, Superposition) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const PolynomialMEP2 p = random_quadratic(3, 100 + trial);
    std::map<Monomial, ComplexMatrix> a, b;
    for (const auto& [m, mat] : p.terms()) {
      const ComplexMatrix part = testkit::random_matrix(3, rng);
      a[m] = part;
      b[m] = mat - part;
    }
    const cplx x(0.3, -1.2), y(-0.7, 0.4);
    const ComplexMatrix sum = evaluate(PolynomialMEP2(3, a), x, y) + evaluate(PolynomialMEP2(3, b), x, y);
    const ComplexMatrix direct = evaluate(p, x, y);
    EXPECT_LT((sum - direct).norm(), 1e-12 * direct.norm());
  }
}

TEST(Evaluate, MonomialPowers) {
  std::map<Monomial, ComplexMatrix> t{{{2, 1}, scalar(1)}};
  const PolynomialMEP2 p(1, t);
  EXPECT_NEAR(std::abs(evaluate(p, cplx(1, 1), 3.0)(0, 0) - cplx(0, 6)), 0.0, 1e-15);
}

TEST(Evaluate, NearlySingularAtFlutterPoint) {
  const PolynomialMEP2 p = make_form(build_matrices(SectionParams::table1_undamped()),
                                     SectionForm::tau_lambda_undamped);
  const ComplexMatrix w = evaluate(p, 1.00, 0.57);
  const Eigen::VectorXd s = singular_values(w);
  EXPECT_LT(s(1), 1e-2 * w.norm());
}

TEST(Residual, ScalarExactSolution) {
  // (1+i) + 2 lambda + i tau with lambda = -1/2, tau = -1
  std::map<Monomial, ComplexMatrix> t{
      {{0, 0}, scalar(cplx(1, 1))}, {{1, 0}, scalar(2)}, {{0, 1}, scalar(cplx(0, 1))}};
  const PolynomialMEP2 p(1, t);
  EigenTuple e;
  e.params = {-0.5, -1.0};
  EXPECT_LE(residual(p, e), 1e-14);
}

TEST(Residual, RandomPointIsNotASolution) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  const PolynomialMEP2 p = random_quadratic(3, 42);
  for (int trial = 0; trial < 20; ++trial) {
    EigenTuple e;
    e.params = {cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    EXPECT_GT(residual(p, e), 1e-3);
  }
}

TEST(Residual, RealParamsGiveEqualResiduals) {
  const PolynomialMEP2 p = make_form(build_matrices(SectionParams::table1()), SectionForm::tau_lambda);
  const auto [orig, conj] = conjugate_augment(p);
  for (double tau : {-1.0, 0.3, 1.65}) {
    for (double lam : {0.2, 0.8336}) {
      const double a = singular_values(evaluate(orig, tau, lam)).minCoeff();
      const double b = singular_values(evaluate(conj, tau, lam)).minCoeff();
      EXPECT_EQ(evaluate(orig, tau, lam).conjugate(), evaluate(conj, tau, lam));
      EXPECT_NEAR(a, b, 1e-15 * (1 + a));
    }
  }
}

TEST(Residual, DampedFlutterPointFromThreeFigureInputs) {
  const PolynomialMEP2 p = make_form(build_matrices(SectionParams::table1()), SectionForm::tau_lambda);
  EigenTuple e;
  e.params = {1.650, 0.8336};
  EXPECT_LE(residual(p, e), 1e-2);
}

TEST(Residual, LinearProblemIsMaxOverEquations) {
  LinearEquation e1{{scalar(cplx(1, 1)), scalar(2), scalar(cplx(0, 1))}};
  const LinearMEP sys({e1, conjugate(e1)});
  EigenTuple t;
  t.params = {-0.5, -1.0};
  EXPECT_LE(residual(sys, t), 1e-15);
  t.params = {0.0, 0.0};
  // |1 + i| / |1 + i| for the constant-only evaluation of a 1x1 matrix
  EXPECT_NEAR(residual(sys, t), 1.0, 1e-15);
}

TEST(Classify, RealAndPhysical) {
  EigenTuple t;
  t.params = {cplx(1.0, 1e-12), cplx(0.5, 0)};
  classify(t, 0);
  EXPECT_TRUE(t.is_real);
  EXPECT_TRUE(t.is_physical);
  t.params = {cplx(-1.0, 0), cplx(0.5, 0)};
  classify(t, 0);
  EXPECT_TRUE(t.is_real);
  EXPECT_FALSE(t.is_physical);
  t.params = {cplx(1.0, 1e-3), cplx(0.5, 0)};
  classify(t, 0);
  EXPECT_FALSE(t.is_real);
  EXPECT_FALSE(t.is_physical);
  t.params = {cplx(0.0, 0), cplx(0.5, 0)};
  classify(t, 0);
  EXPECT_FALSE(t.is_physical);
}

TEST(Classify, RealnessToleranceScalesWithMagnitude) {
  EXPECT_TRUE(is_real_value(cplx(1e6, 1e-3)));
  EXPECT_FALSE(is_real_value(cplx(1.0, 1e-6)));
}
