#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "mep/problem.hpp"

namespace mep::testkit {

inline ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

inline ComplexMatrix random_matrix(Index n, std::mt19937_64& rng) {
  return random_matrix(n, n, rng);
}

inline ComplexMatrix random_unitary(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Term layouts of the random test problems.
enum class Shape {
  tau_quadratic,  // (0,0) (1,0) (2,0) (0,1)
  both_squares,   // adds (0,2)
  full,           // every monomial of degree <= 2
  mixed_no_p1,    // (0,0) (0,1) (0,2) (1,1) (2,0): no linear term in p1
};

inline std::vector<Monomial> monomials(Shape s) {
  switch (s) {
    case Shape::tau_quadratic:
      return {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    case Shape::both_squares:
      return {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}};
    case Shape::full:
      return {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}, {1, 1}};
    case Shape::mixed_no_p1:
      return {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}};
  }
  return {};
}

struct PlantedProblem {
  PolynomialMEP2 problem;
  std::vector<std::array<double, 2>> planted;
};

// Random complex coefficients with real roots planted through one update of
// the constant term: T00 += C with C x_k = -W(a_k, b_k) x_k for unit x_k.
// Since (a_k, b_k) is real the conjugate equation is singular there too.
// With singular_quadratic the (2,0) coefficient gets a zero first column.
inline PlantedProblem planted_problem(Shape shape, Index n, std::uint64_t seed,
                                      bool singular_quadratic, int n_roots = 2,
                                      double box = 2.0) {
  std::mt19937_64 rng(seed);
  std::map<Monomial, ComplexMatrix> t;
  for (Monomial m : monomials(shape)) t[m] = random_matrix(n, rng);
  if (singular_quadratic) t[{2, 0}].col(0).setZero();
  const int k = std::min<int>(n_roots, static_cast<int>(n));
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<std::array<double, 2>> roots;
  ComplexMatrix x(n, k), r(n, k);
  const PolynomialMEP2 base(n, t);
  for (int i = 0; i < k; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    x.col(i) = random_matrix(n, 1, rng).col(0).normalized();
    r.col(i) = evaluate(base, a, b) * x.col(i);
    roots.push_back({a, b});
  }
  if (k > 0)
    t[{0, 0}] -= r * x.completeOrthogonalDecomposition().pseudoInverse();
  return {PolynomialMEP2(n, std::move(t)), roots};
}

// Relative closeness of two parameter tuples.
inline bool close_params(const std::vector<cplx>& a, const std::vector<cplx>& b,
                         double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i]))) return false;
  return true;
}

// Every tuple of `a` has a partner in `b` and vice versa.
inline bool same_tuple_sets(const std::vector<EigenTuple>& a,
                            const std::vector<EigenTuple>& b, double tol) {
  auto covered = [tol](const std::vector<EigenTuple>& x,
                       const std::vector<EigenTuple>& y) {
    for (const auto& s : x) {
      bool found = false;
      for (const auto& t : y) found = found || close_params(s.params, t.params, tol);
      if (!found) return false;
    }
    return true;
  };
  return a.size() == b.size() && covered(a, b) && covered(b, a);
}

}  // namespace mep::testkit
