#include "mep/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mep {

namespace {

// sigma_min(w) / scale, where scale = sum_k |monomial_k| ||A_k||_F bounds
// ||w||_F from above and stays meaningful when w itself is tiny (1x1 roots).
ResidualDetail min_singular(const ComplexMatrix& w, double scale) {
  ResidualDetail d;
  if (w.size() == 0) return d;
  Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullV);
  const Index last = svd.singularValues().size() - 1;
  d.value = scale > 0.0 ? svd.singularValues()(last) / scale : 0.0;
  d.vectors.push_back(svd.matrixV().col(w.cols() - 1));
  return d;
}

cplx ipow(cplx z, int k) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

bool LinearEquation::operator==(const LinearEquation& other) const {
  if (coefficients.size() != other.coefficients.size()) return false;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    const auto& a = coefficients[j];
    const auto& b = other.coefficients[j];
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

LinearEquation conjugate(const LinearEquation& eq) {
  LinearEquation out;
  out.coefficients.reserve(eq.coefficients.size());
  for (const auto& a : eq.coefficients) out.coefficients.push_back(a.conjugate());
  return out;
}

LinearMEP::LinearMEP(std::vector<LinearEquation> equations,
                     std::vector<std::string> param_names)
    : equations_(std::move(equations)), names_(std::move(param_names)) {
  const std::size_t n = equations_.size();
  if (n == 0) throw ValidationError("LinearMEP: no equations");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = equations_[i].coefficients;
    if (c.size() != n + 1) {
      std::ostringstream msg;
      msg << "LinearMEP: equation " << i << " has " << c.size()
          << " coefficient matrices, expected " << n + 1;
      throw ValidationError(msg.str());
    }
    const Index sz = c[0].rows();
    if (sz == 0) {
      throw ValidationError("LinearMEP: equation " + std::to_string(i) +
                            " has empty matrices");
    }
    for (std::size_t j = 0; j <= n; ++j) {
      if (c[j].rows() != sz || c[j].cols() != sz) {
        std::ostringstream msg;
        msg << "LinearMEP: equation " << i << " matrix " << j << " is "
            << c[j].rows() << "x" << c[j].cols() << ", expected " << sz << "x"
            << sz;
        throw ValidationError(msg.str());
      }
      require_finite(c[j], "LinearMEP equation " + std::to_string(i) +
                               " matrix " + std::to_string(j));
    }
  }
  if (names_.empty()) {
    for (std::size_t j = 0; j < n; ++j)
      names_.push_back("eta" + std::to_string(j + 1));
  } else if (names_.size() != n) {
    throw ValidationError("LinearMEP: expected " + std::to_string(n) +
                          " parameter names");
  }
}

bool LinearMEP::operator==(const LinearMEP& other) const {
  return equations_ == other.equations_ && names_ == other.names_;
}

PolynomialMEP2::PolynomialMEP2(Index size,
                               std::map<Monomial, ComplexMatrix> terms,
                               std::array<std::string, 2> param_names,
                               int airspeed_param)
    : size_(size),
      terms_(std::move(terms)),
      names_(std::move(param_names)),
      airspeed_(airspeed_param) {
  if (size_ <= 0) throw ValidationError("PolynomialMEP2: size must be positive");
  if (airspeed_ != 0 && airspeed_ != 1)
    throw ValidationError("PolynomialMEP2: airspeed_param must be 0 or 1");
  bool has_nonconstant = false;
  for (const auto& [m, a] : terms_) {
    if (m.p < 0 || m.q < 0) {
      std::ostringstream msg;
      msg << "PolynomialMEP2: negative power in term (" << m.p << "," << m.q
          << ")";
      throw ValidationError(msg.str());
    }
    if (a.rows() != size_ || a.cols() != size_) {
      std::ostringstream msg;
      msg << "PolynomialMEP2: term (" << m.p << "," << m.q << ") is "
          << a.rows() << "x" << a.cols() << ", expected " << size_ << "x"
          << size_;
      throw ValidationError(msg.str());
    }
    std::ostringstream what;
    what << "PolynomialMEP2 term (" << m.p << "," << m.q << ")";
    require_finite(a, what.str());
    if (m.p + m.q >= 1) has_nonconstant = true;
  }
  if (!has_nonconstant)
    throw ValidationError("PolynomialMEP2: needs at least one term of degree >= 1");
}

bool PolynomialMEP2::has_term(int p, int q) const {
  auto it = terms_.find({p, q});
  return it != terms_.end() && !it->second.isZero(0.0);
}

ComplexMatrix PolynomialMEP2::term(int p, int q) const {
  auto it = terms_.find({p, q});
  if (it == terms_.end()) return ComplexMatrix::Zero(size_, size_);
  return it->second;
}

int PolynomialMEP2::total_degree() const {
  int d = 0;
  for (const auto& [m, a] : terms_)
    if (!a.isZero(0.0)) d = std::max(d, m.p + m.q);
  return d;
}

int PolynomialMEP2::degree_in(int param) const {
  int d = 0;
  for (const auto& [m, a] : terms_)
    if (!a.isZero(0.0)) d = std::max(d, param == 0 ? m.p : m.q);
  return d;
}

double PolynomialMEP2::norm() const {
  double s = 0.0;
  for (const auto& [m, a] : terms_) s += a.squaredNorm();
  return std::sqrt(s);
}

bool PolynomialMEP2::operator==(const PolynomialMEP2& other) const {
  if (size_ != other.size_ || names_ != other.names_ ||
      airspeed_ != other.airspeed_ || terms_.size() != other.terms_.size())
    return false;
  auto it = other.terms_.begin();
  for (const auto& [m, a] : terms_) {
    if (!(m == it->first) || a != it->second) return false;
    ++it;
  }
  return true;
}

std::pair<PolynomialMEP2, PolynomialMEP2> conjugate_augment(
    const PolynomialMEP2& p) {
  std::map<Monomial, ComplexMatrix> conj_terms;
  for (const auto& [m, a] : p.terms()) conj_terms.emplace(m, a.conjugate());
  return {p, PolynomialMEP2(p.size(), std::move(conj_terms), p.param_names(),
                            p.airspeed_param())};
}

ComplexMatrix evaluate(const PolynomialMEP2& p, cplx param1, cplx param2) {
  ComplexMatrix w = ComplexMatrix::Zero(p.size(), p.size());
  for (const auto& [m, a] : p.terms()) w += (ipow(param1, m.p) * ipow(param2, m.q)) * a;
  return w;
}

ComplexMatrix evaluate(const LinearEquation& eq, std::span<const cplx> params) {
  if (params.size() + 1 != eq.coefficients.size())
    throw ArgumentError("evaluate: expected " +
                        std::to_string(eq.coefficients.size() - 1) +
                        " parameters");
  ComplexMatrix w = eq.coefficients[0];
  for (std::size_t j = 0; j < params.size(); ++j)
    w += params[j] * eq.coefficients[j + 1];
  return w;
}

ResidualDetail residual_detail(const PolynomialMEP2& p, cplx param1,
                               cplx param2) {
  ComplexMatrix w = ComplexMatrix::Zero(p.size(), p.size());
  ComplexMatrix wc = ComplexMatrix::Zero(p.size(), p.size());
  double scale = 0.0;
  for (const auto& [m, t] : p.terms()) {
    const cplx c = ipow(param1, m.p) * ipow(param2, m.q);
    w += c * t;
    wc += c * t.conjugate();
    scale += std::abs(c) * t.norm();
  }
  ResidualDetail a = min_singular(w, scale);
  ResidualDetail b = min_singular(wc, scale);
  ResidualDetail out;
  out.value = std::max(a.value, b.value);
  out.vectors = {a.vectors.at(0), b.vectors.at(0)};
  return out;
}

ResidualDetail residual_detail(const LinearMEP& mep,
                               std::span<const cplx> params) {
  if (params.size() != mep.n_params())
    throw ArgumentError("residual: expected " + std::to_string(mep.n_params()) +
                        " parameters");
  ResidualDetail out;
  for (const auto& eq : mep.equations()) {
    double scale = eq.coefficients[0].norm();
    for (std::size_t j = 0; j < params.size(); ++j)
      scale += std::abs(params[j]) * eq.coefficients[j + 1].norm();
    ResidualDetail d = min_singular(evaluate(eq, params), scale);
    out.value = std::max(out.value, d.value);
    out.vectors.push_back(d.vectors.at(0));
  }
  return out;
}

double residual(const PolynomialMEP2& p, const EigenTuple& tuple) {
  if (tuple.params.size() < 2)
    throw ArgumentError("residual: tuple needs two parameters");
  return residual_detail(p, tuple.params[0], tuple.params[1]).value;
}

double residual(const LinearMEP& mep, const EigenTuple& tuple) {
  return residual_detail(mep, tuple.params).value;
}

bool is_real_value(cplx z, double tol) {
  return std::abs(z.imag()) <= tol * (1.0 + std::abs(z.real()));
}

bool is_real_params(std::span<const cplx> params, double tol) {
  return std::all_of(params.begin(), params.end(),
                     [tol](cplx z) { return is_real_value(z, tol); });
}

void classify(EigenTuple& tuple, int airspeed_param, double tol) {
  tuple.is_real = is_real_params(tuple.params, tol);
  tuple.is_physical =
      tuple.is_real &&
      static_cast<std::size_t>(airspeed_param) < tuple.params.size() &&
      tuple.params[airspeed_param].real() > tol;
}

}  // namespace mep
