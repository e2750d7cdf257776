#include <gtest/gtest.h>

#include <algorithm>

#include "mep/section_model.hpp"
#include "mep/solver.hpp"
#include "support.hpp"

using namespace mep;

namespace {

ComplexMatrix scalar(cplx v) {
  ComplexMatrix m(1, 1);
  m << v;
  return m;
}

PolynomialMEP2 undamped() {
  return make_form(build_matrices(SectionParams::table1_undamped()),
                   SectionForm::tau_lambda_undamped);
}

PolynomialMEP2 damped(SectionForm f) {
  return make_form(build_matrices(SectionParams::table1()), f);
}

bool conjugation_closed(const std::vector<EigenTuple>& tuples, double tol) {
  for (const auto& t : tuples) {
    std::vector<cplx> c;
    for (cplx z : t.params) c.push_back(std::conj(z));
    bool found = false;
    for (const auto& u : tuples) found = found || testkit::close_params(c, u.params, tol);
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(SolveLinear, ScalarExample) {
  const LinearEquation e{{scalar(cplx(1, 1)), scalar(2), scalar(cplx(0, 1))}};
  const SolveReport r = solve_linear(LinearMEP({e, conjugate(e)}, {"lambda", "tau"}));
  ASSERT_EQ(r.tuples.size(), 1u);
  EXPECT_NEAR(std::abs(r.tuples[0].params[0] - (-0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.tuples[0].params[1] - (-1.0)), 0.0, 1e-12);
  EXPECT_TRUE(r.tuples[0].is_real);
  EXPECT_LE(r.tuples[0].residual, 1e-14);
}

TEST(SolveLinear, ThreeParameterRandomSystem) {
  std::mt19937_64 rng(80);
  std::vector<LinearEquation> eqs;
  for (Index n : {2, 1, 2}) {
    LinearEquation e;
    for (int k = 0; k < 4; ++k) e.coefficients.push_back(testkit::random_matrix(n, rng));
    eqs.push_back(e);
  }
  const LinearMEP sys(eqs);
  const SolveReport r = solve_linear(sys);
  EXPECT_EQ(r.tuples.size(), 4u) << testing::PrintToString(r.diagnostics);
  for (const auto& t : r.tuples) {
    EXPECT_EQ(t.params.size(), 3u);
    EXPECT_LE(residual(sys, t), 1e-10);
  }
}

TEST(SolveDirect, UndampedRealTuples) {
  for (Variant v : {Variant::strict, Variant::quasi}) {
    const SolveReport r = solve_direct(undamped(), v);
    const auto real = filter_tuples(r.tuples, FilterMode::real);
    ASSERT_EQ(real.size(), 4u) << to_string(v);
    EXPECT_NEAR(real[0].params[0].real(), -0.996295, 1e-6);
    EXPECT_NEAR(real[1].params[0].real(), 0.0, 1e-10);
    EXPECT_NEAR(real[2].params[0].real(), 0.0, 1e-10);
    EXPECT_NEAR(real[3].params[0].real(), 0.996295, 1e-6);
    EXPECT_NEAR(real[3].params[1].real(), 0.567477, 1e-6);
    // the double root at tau = 0 carries both structural modes
    std::vector<double> lam{real[1].params[1].real(), real[2].params[1].real()};
    std::sort(lam.begin(), lam.end());
    EXPECT_NEAR(lam[0], 0.491554, 1e-6);
    EXPECT_NEAR(lam[1], 3.32691, 1e-5);
    const auto phys = filter_tuples(r.tuples, FilterMode::physical);
    ASSERT_EQ(phys.size(), 1u);
    EXPECT_GT(phys[0].params[0].real(), 0.0);
    EXPECT_EQ(r.size_compressed, 4);
  }
}

TEST(SolveDirect, ResidualsAndConjugationClosure) {
  for (SectionForm f : {SectionForm::tau_lambda, SectionForm::y_chi})
    for (Variant v : {Variant::strict, Variant::quasi}) {
      const PolynomialMEP2 p = damped(f);
      const SolveReport r = solve_direct(p, v);
      EXPECT_FALSE(r.tuples.empty());
      EXPECT_TRUE(conjugation_closed(r.tuples, 1e-8)) << to_string(f) << " " << to_string(v);
      for (const auto& t : r.tuples) {
        EXPECT_LE(t.residual, 1e-8);
        EXPECT_NEAR(t.residual, residual(p, t), 1e-12);
      }
    }
}

TEST(SolveDirect, QuasiAuxiliariesAreConsistent) {
  for (SectionForm f : {SectionForm::tau_lambda, SectionForm::y_chi}) {
    const SolveReport r = solve_direct(damped(f), Variant::quasi);
    for (const auto& t : r.tuples) {
      EXPECT_FALSE(t.aux.empty());
      for (const auto& a : t.aux) EXPECT_LE(a.consistency, 1e-8) << a.name;
    }
  }
}

TEST(SolveDirect, VariantsAgreeOnAllTuples) {
  for (SectionForm f : {SectionForm::tau_lambda, SectionForm::y_chi}) {
    const SolveReport s = solve_direct(damped(f), Variant::strict);
    const SolveReport q = solve_direct(damped(f), Variant::quasi);
    EXPECT_TRUE(testkit::same_tuple_sets(s.tuples, q.tuples, 1e-6)) << to_string(f);
  }
}

TEST(SolveDirect, RayleighAgreesWithBackSubstitution) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto planted = testkit::planted_problem(testkit::Shape::both_squares, 2, 300 + seed, false);
    SolveOptions rayleigh;
    SolveOptions back;
    back.recovery = Recovery::back_substitution;
    const SolveReport a = solve_direct(planted.problem, Variant::strict, rayleigh);
    const SolveReport b = solve_direct(planted.problem, Variant::strict, back);
    EXPECT_TRUE(testkit::same_tuple_sets(a.tuples, b.tuples, 1e-8)) << "seed " << seed;
  }
}

TEST(SolveDirect, EigenvaluesOnlyMatchesFullSolve) {
  const auto planted = testkit::planted_problem(testkit::Shape::tau_quadratic, 3, 21, false);
  SolveOptions fast;
  fast.eigenvectors = false;
  const SolveReport a = solve_direct(planted.problem, Variant::quasi);
  const SolveReport b = solve_direct(planted.problem, Variant::quasi, fast);
  EXPECT_TRUE(testkit::same_tuple_sets(a.tuples, b.tuples, 1e-8));
}

TEST(SolveDirect, PlantedRootsAreFound) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto planted = testkit::planted_problem(testkit::Shape::full, 2, 400 + seed, seed % 2 == 0);
    const SolveReport r = solve_direct(planted.problem, Variant::quasi);
    for (const auto& root : planted.planted) {
      bool found = false;
      for (const auto& t : filter_tuples(r.tuples, FilterMode::real))
        found = found || testkit::close_params(t.params, {root[0], root[1]}, 1e-8);
      EXPECT_TRUE(found) << "seed " << seed;
    }
  }
}

TEST(SolveDirect, TimingsAndSizesReported) {
  const SolveReport r = solve_direct(undamped(), Variant::strict);
  EXPECT_EQ(r.size_uncompressed, 16);
  EXPECT_GE(r.timings.setup, 0.0);
  EXPECT_GE(r.timings.compression, 0.0);
  EXPECT_GT(r.timings.total(), 0.0);
  const auto j = to_json(r);
  EXPECT_EQ(j["variant"], "strict");
  EXPECT_EQ(j["sizes"]["compressed"], 4);
  EXPECT_EQ(j["tuples"].size(), r.tuples.size());
}

TEST(BackSubstitute, RecoversSecondParameter) {
  const PolynomialMEP2 p = undamped();
  const SolveReport r = solve_direct(p, Variant::strict);
  const auto phys = filter_tuples(r.tuples, FilterMode::physical);
  ASSERT_EQ(phys.size(), 1u);
  const auto cands = back_substitute(p, 0, phys[0].params[0], 4);
  ASSERT_FALSE(cands.empty());
  EXPECT_NEAR(std::abs(cands[0].params[1] - phys[0].params[1]), 0.0, 1e-8);
  // the tau = 0 double root yields both Lambda values
  const auto zero = back_substitute(p, 0, 0.0, 4);
  ASSERT_EQ(zero.size(), 2u);
}

TEST(FilterTuples, Modes) {
  EXPECT_TRUE(filter_tuples({}, FilterMode::real).empty());
  EigenTuple a, b, c;
  a.params = {cplx(1.0, 0.5), 1.0};
  b.params = {-1.0, 2.0};
  c.params = {0.5, 3.0};
  for (auto* t : {&a, &b, &c}) classify(*t, 0);
  const auto all = filter_tuples({a, b, c}, FilterMode::all);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].params[0], cplx(-1.0));
  const auto real = filter_tuples({a, b, c}, FilterMode::real);
  ASSERT_EQ(real.size(), 2u);
  const auto phys = filter_tuples({a, b, c}, FilterMode::physical);
  ASSERT_EQ(phys.size(), 1u);
  EXPECT_EQ(phys[0].params[0], cplx(0.5));
  EXPECT_EQ(filter_mode_from_string("physical"), FilterMode::physical);
  EXPECT_THROW(filter_mode_from_string("odd"), ArgumentError);
}

TEST(Variant, Names) {
  EXPECT_EQ(variant_from_string("strict"), Variant::strict);
  EXPECT_EQ(variant_from_string("quasi"), Variant::quasi);
  EXPECT_THROW(variant_from_string("direct"), ArgumentError);
}
