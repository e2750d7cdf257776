#pragma once

// Problem data model: linear N-parameter problems, two-parameter polynomial
// problems, solution tuples, conjugate augmentation and residuals.

#include <array>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mep/linalg.hpp"

namespace mep {

/// One equation of a linear problem: W(eta) = A_0 + sum_j eta_j A_j.
struct LinearEquation {
  std::vector<ComplexMatrix> coefficients;  // A_0 .. A_N

  Index size() const {
    return coefficients.empty() ? 0 : coefficients.front().rows();
  }
  bool operator==(const LinearEquation& other) const;
};

/// Entrywise conjugate of every coefficient.
LinearEquation conjugate(const LinearEquation& eq);

/// N equations in N parameters; equation sizes may differ.
class LinearMEP {
 public:
  LinearMEP(std::vector<LinearEquation> equations,
            std::vector<std::string> param_names = {});

  std::size_t n_params() const { return equations_.size(); }
  const std::vector<LinearEquation>& equations() const { return equations_; }
  const LinearEquation& equation(std::size_t i) const { return equations_[i]; }
  const ComplexMatrix& coefficient(std::size_t i, std::size_t j) const {
    return equations_[i].coefficients[j];
  }
  const std::vector<std::string>& param_names() const { return names_; }

  bool operator==(const LinearMEP& other) const;

 private:
  std::vector<LinearEquation> equations_;
  std::vector<std::string> names_;
};

/// Powers (p, q) of the first and second parameter.
struct Monomial {
  int p = 0;
  int q = 0;
  auto operator<=>(const Monomial&) const = default;
};

/// A single n x n equation polynomial in two parameters:
/// sum over terms of T_{p,q} * param1^p * param2^q.
class PolynomialMEP2 {
 public:
  PolynomialMEP2(Index size, std::map<Monomial, ComplexMatrix> terms,
                 std::array<std::string, 2> param_names = {"p1", "p2"},
                 int airspeed_param = 0);

  Index size() const { return size_; }
  const std::map<Monomial, ComplexMatrix>& terms() const { return terms_; }
  /// True when the term exists and is not identically zero.
  bool has_term(int p, int q) const;
  /// The coefficient, or a zero matrix when absent.
  ComplexMatrix term(int p, int q) const;
  int total_degree() const;
  int degree_in(int param) const;
  const std::array<std::string, 2>& param_names() const { return names_; }
  int airspeed_param() const { return airspeed_; }
  double norm() const;  // Frobenius norm over all terms

  bool operator==(const PolynomialMEP2& other) const;

 private:
  Index size_;
  std::map<Monomial, ComplexMatrix> terms_;
  std::array<std::string, 2> names_;
  int airspeed_;
};

struct AuxValue {
  std::string name;
  cplx value;
  double consistency = 0.0;  // |value - relation(params)| / (1 + magnitudes)
};

/// One solution point.
struct EigenTuple {
  std::vector<cplx> params;
  std::vector<ComplexVector> vectors;  // one null vector per equation
  std::vector<AuxValue> aux;           // auxiliary parameters (quasi only)
  double residual = 0.0;
  bool is_real = false;
  bool is_physical = false;
};

struct Tolerances {
  double realness = 1e-8;  // |Im| <= realness * (1 + |Re|)
};

/// The problem and its entrywise conjugate; real parameter pairs solving
/// both are exactly the points on the stability boundary.
std::pair<PolynomialMEP2, PolynomialMEP2> conjugate_augment(
    const PolynomialMEP2& p);

ComplexMatrix evaluate(const PolynomialMEP2& p, cplx param1, cplx param2);
ComplexMatrix evaluate(const LinearEquation& eq, std::span<const cplx> params);

struct ResidualDetail {
  double value = 0.0;
  std::vector<ComplexVector> vectors;
};

/// max over the augmented pair {p, conj(p)} of sigma_min(W) / ||W||, with
/// ||W|| = sum over terms of |a^p b^q| ||A_pq||_F (normwise backward error).
ResidualDetail residual_detail(const PolynomialMEP2& p, cplx param1,
                               cplx param2);
/// max over equations of sigma_min(W_i) / ||W_i||, with ||W_i|| as above.
ResidualDetail residual_detail(const LinearMEP& mep,
                               std::span<const cplx> params);

double residual(const PolynomialMEP2& p, const EigenTuple& tuple);
double residual(const LinearMEP& mep, const EigenTuple& tuple);

bool is_real_value(cplx z, double tol = Tolerances{}.realness);
bool is_real_params(std::span<const cplx> params,
                    double tol = Tolerances{}.realness);

/// Sets is_real and is_physical. Physical means real with the airspeed-like
/// parameter strictly positive (beyond the realness tolerance).
void classify(EigenTuple& tuple, int airspeed_param,
              double tol = Tolerances{}.realness);

}  // namespace mep
