#include "mep/section_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mep {

namespace {

constexpr cplx kI(0.0, 1.0);

struct Field {
  const char* name;
  double SectionParams::*member;
};

constexpr Field kFields[] = {
    {"mu", &SectionParams::mu},
    {"r", &SectionParams::r},
    {"omega_h", &SectionParams::omega_h},
    {"omega_theta", &SectionParams::omega_theta},
    {"zeta_h", &SectionParams::zeta_h},
    {"zeta_theta", &SectionParams::zeta_theta},
    {"r_theta", &SectionParams::r_theta},
    {"a", &SectionParams::a},
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return v;
}

void check_range(std::array<double, 2> r, const char* what) {
  if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || !(r[0] < r[1]))
    throw ArgumentError(std::string(what) + ": need finite lo < hi");
}

// Modal frequencies chi and unit mode shapes at one airspeed, unordered.
void modes_at(const SectionMatrices& m, double tau, bool damped,
              std::vector<cplx>& chi, ComplexMatrix& shapes) {
  const Index n = m.K0.rows();
  const ComplexMatrix a = m.M0 + m.G0 + tau * m.G1 + (tau * tau) * m.G2;
  chi.clear();
  if (!damped) {
    const GepSolution s = solve_gep(a, m.K0);
    shapes.resize(n, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s.finite_mask[i]) continue;
      cplx lam = std::sqrt(s.value(i));  // principal branch, Re >= 0
      chi.push_back(1.0 / lam);
      shapes.conservativeResize(n, shapes.cols() + 1);
      shapes.col(shapes.cols() - 1) = s.right_vectors.col(i);
    }
    return;
  }
  // (a chi^2 - D0 chi - K0) x = 0 via [x; chi x].
  ComplexMatrix ca = ComplexMatrix::Zero(2 * n, 2 * n);
  ComplexMatrix cb = ComplexMatrix::Zero(2 * n, 2 * n);
  ca.topRightCorner(n, n).setIdentity();
  ca.bottomLeftCorner(n, n) = m.K0;
  ca.bottomRightCorner(n, n) = m.D0;
  cb.topLeftCorner(n, n).setIdentity();
  cb.bottomRightCorner(n, n) = a;
  const GepSolution s = solve_gep(ca, cb);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.finite_mask[i]) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) {
    return s.value(x).real() > s.value(y).real();
  });
  if (idx.size() > static_cast<std::size_t>(n)) idx.resize(n);
  shapes.resize(n, static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    chi.push_back(s.value(idx[k]));
    ComplexVector x = s.right_vectors.col(idx[k]).head(n);
    const double nx = x.norm();
    shapes.col(static_cast<Index>(k)) = nx > 0 ? ComplexVector(x / nx) : x;
  }
}

}  // namespace

SectionParams SectionParams::table1_undamped() {
  SectionParams p;
  p.zeta_h = 0.0;
  p.zeta_theta = 0.0;
  return p;
}

void SectionParams::validate() const {
  for (const auto& f : kFields)
    if (!std::isfinite(this->*f.member))
      throw ValidationError(std::string(f.name) + ": must be finite");
  if (!(mu > 0)) throw ValidationError("mu: must be positive");
  if (!(r > 0)) throw ValidationError("r: must be positive");
  if (!(omega_h > 0)) throw ValidationError("omega_h: must be positive");
  if (!(omega_theta > 0)) throw ValidationError("omega_theta: must be positive");
  if (zeta_h < 0) throw ValidationError("zeta_h: must be non-negative");
  if (zeta_theta < 0) throw ValidationError("zeta_theta: must be non-negative");
  if (!(std::abs(a) < 1)) throw ValidationError("a: must satisfy |a| < 1");
}

nlohmann::json to_json(const SectionParams& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : kFields) j[f.name] = p.*f.member;
  return j;
}

SectionParams section_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("section parameters: expected an object");
  SectionParams p;
  for (const auto& f : kFields) {
    auto it = j.find(f.name);
    if (it == j.end()) throw ParseError(std::string(f.name) + ": missing field");
    if (!it->is_number())
      throw ParseError(std::string(f.name) + ": expected a number");
    p.*f.member = it->get<double>();
  }
  p.validate();
  return p;
}

SectionParams load_section_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
  return section_params_from_json(j);
}

SectionMatrices build_matrices(const SectionParams& p) {
  p.validate();
  const double a = p.a;
  const double r2 = p.r * p.r;
  SectionMatrices m;
  m.M0.resize(2, 2);
  m.M0 << 1.0, p.r_theta, p.r_theta, r2;
  m.G0.resize(2, 2);
  m.G0 << 1.0, a, a, 0.125 + a * a;
  m.G0 /= p.mu;
  m.G1.resize(2, 2);
  m.G1 << -2.0 * kI, 2.0 * kI * (1.0 - a), -kI * (1.0 + 2.0 * a),
      kI * a * (1.0 - 2.0 * a);
  m.G1 /= p.mu;
  m.G2.resize(2, 2);
  m.G2 << 0.0, 2.0, 0.0, 1.0 + 2.0 * a;
  m.G2 /= p.mu;
  m.D0 = ComplexMatrix::Zero(2, 2);
  m.D0(0, 0) = 2.0 * kI * p.zeta_h * p.omega_h;
  m.D0(1, 1) = 2.0 * kI * r2 * p.zeta_theta * p.omega_theta;
  m.K0 = ComplexMatrix::Zero(2, 2);
  m.K0(0, 0) = p.omega_h * p.omega_h;
  m.K0(1, 1) = r2 * p.omega_theta * p.omega_theta;
  return m;
}

std::string to_string(SectionForm f) {
  switch (f) {
    case SectionForm::tau_lambda_undamped:
      return "undamped";
    case SectionForm::tau_lambda:
      return "tau-lambda";
    case SectionForm::y_chi:
      return "y-chi";
  }
  return "?";
}

SectionForm section_form_from_string(const std::string& s) {
  if (s == "undamped" || s == "tau_lambda_undamped")
    return SectionForm::tau_lambda_undamped;
  if (s == "tau-lambda" || s == "tau_lambda") return SectionForm::tau_lambda;
  if (s == "y-chi" || s == "y_chi") return SectionForm::y_chi;
  throw ArgumentError("unknown form '" + s +
                      "' (expected undamped|tau-lambda|y-chi)");
}

PolynomialMEP2 make_form(const SectionMatrices& m, SectionForm form) {
  const Index n = m.K0.rows();
  const bool damped = !m.D0.isZero(0.0);
  std::map<Monomial, ComplexMatrix> t;
  switch (form) {
    case SectionForm::tau_lambda_undamped:
      if (damped)
        throw ArgumentError(
            "the undamped form requires zero structural damping");
      t[{0, 0}] = m.M0 + m.G0;
      t[{1, 0}] = m.G1;
      t[{2, 0}] = m.G2;
      t[{0, 1}] = -m.K0;
      return PolynomialMEP2(n, std::move(t), {"tau", "Lambda"}, 0);
    case SectionForm::tau_lambda:
      t[{0, 0}] = m.M0 + m.G0;
      t[{1, 0}] = m.G1;
      t[{2, 0}] = m.G2;
      if (damped) t[{0, 1}] = -m.D0;
      t[{0, 2}] = -m.K0;
      return PolynomialMEP2(n, std::move(t), {"tau", "lambda"}, 0);
    case SectionForm::y_chi:
      t[{0, 0}] = -m.K0;
      if (damped) t[{0, 1}] = -m.D0;
      t[{0, 2}] = m.M0 + m.G0;
      t[{1, 1}] = m.G1;
      t[{2, 0}] = m.G2;
      return PolynomialMEP2(n, std::move(t), {"Y", "chi"}, 0);
  }
  throw ArgumentError("make_form: unknown form");
}

std::vector<double> divergence_speed(const SectionMatrices& m) {
  std::vector<double> out;
  if (m.G2.isZero(0.0)) return out;
  GepOptions go;
  go.right_vectors = false;
  const GepSolution s = solve_gep(m.K0, m.G2, go);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.finite_mask[i]) continue;
    const cplx y2 = s.value(i);
    if (is_real_value(y2) && y2.real() > 0.0) out.push_back(std::sqrt(y2.real()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SweepResult modal_sweep(const SectionMatrices& m,
                        const std::vector<double>& taus) {
  for (double t : taus)
    if (!std::isfinite(t)) throw ArgumentError("modal_sweep: non-finite tau");
  const bool damped = !m.D0.isZero(0.0);
  SweepResult res;
  ComplexMatrix prev_shapes;
  std::vector<cplx> prev_chi;
  for (std::size_t step = 0; step < taus.size(); ++step) {
    std::vector<cplx> chi;
    ComplexMatrix shapes;
    modes_at(m, taus[step], damped, chi, shapes);
    const std::size_t k = chi.size();
    std::vector<int> mode_of(k, -1);  // mode index assigned to each new root
    if (step == 0 || prev_chi.size() != k) {
      std::vector<std::size_t> order(k);
      for (std::size_t i = 0; i < k; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
        return chi[x].real() < chi[y].real();
      });
      for (std::size_t i = 0; i < k; ++i) mode_of[order[i]] = static_cast<int>(i);
    } else {
      // Greedy maximal |<prev mode, new shape>| matching.
      const Eigen::MatrixXd ov = (prev_shapes.adjoint() * shapes).cwiseAbs();
      std::vector<bool> used_prev(k, false), used_new(k, false);
      for (std::size_t pass = 0; pass < k; ++pass) {
        double best = -1.0;
        Index bp = 0, bn = 0;
        for (Index p = 0; p < ov.rows(); ++p)
          for (Index q = 0; q < ov.cols(); ++q)
            if (!used_prev[p] && !used_new[q] && ov(p, q) > best) {
              best = ov(p, q);
              bp = p;
              bn = q;
            }
        used_prev[bp] = used_new[bn] = true;
        mode_of[bn] = static_cast<int>(bp);
      }
    }
    std::vector<cplx> by_mode(k);
    ComplexMatrix ordered(shapes.rows(), static_cast<Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      by_mode[mode_of[i]] = chi[i];
      ordered.col(mode_of[i]) = shapes.col(static_cast<Index>(i));
    }
    for (std::size_t md = 0; md < k; ++md) {
      res.rows.push_back({taus[step], static_cast<int>(md), by_mode[md]});
      if (step > 0 && prev_chi.size() == k) {
        const double a = prev_chi[md].imag();
        const double b = by_mode[md].imag();
        if (a * b < 0.0) {
          const double t0 = taus[step - 1], t1 = taus[step];
          const double t = t0 + (t1 - t0) * a / (a - b);
          const double w = (t - t0) / (t1 - t0);
          res.crossings.push_back(
              {static_cast<int>(md), t,
               (1 - w) * prev_chi[md].real() + w * by_mode[md].real()});
        }
      }
    }
    prev_chi = std::move(by_mode);
    prev_shapes = std::move(ordered);
  }
  return res;
}

ContourGrid contour_grid(const PolynomialMEP2& p, std::array<double, 2> range1,
                         std::array<double, 2> range2, int resolution) {
  check_range(range1, "contour_grid range1");
  check_range(range2, "contour_grid range2");
  if (resolution < 2) throw ArgumentError("contour_grid: resolution must be >= 2");
  ContourGrid g;
  g.p1 = linspace(range1[0], range1[1], resolution);
  g.p2 = linspace(range2[0], range2[1], resolution);
  g.d.reserve(g.p1.size() * g.p2.size());
  for (double x : g.p1)
    for (double y : g.p2) g.d.push_back(evaluate(p, x, y).determinant());
  return g;
}

namespace {

// Newton on a 2-real-unknown map with a central-difference Jacobian.
template <class F>
bool newton2(F f, double& x, double& y, double step, const NewtonOptions& opts) {
  for (int it = 0; it < opts.max_iter; ++it) {
    const std::array<double, 2> v = f(x, y);
    const double hx = step * (1.0 + std::abs(x));
    const double hy = step * (1.0 + std::abs(y));
    const std::array<double, 2> xp = f(x + hx, y), xm = f(x - hx, y);
    const std::array<double, 2> yp = f(x, y + hy), ym = f(x, y - hy);
    const double j11 = (xp[0] - xm[0]) / (2 * hx), j12 = (yp[0] - ym[0]) / (2 * hy);
    const double j21 = (xp[1] - xm[1]) / (2 * hx), j22 = (yp[1] - ym[1]) / (2 * hy);
    const double dt = j11 * j22 - j12 * j21;
    if (!std::isfinite(dt) || dt == 0.0) return false;
    const double dx = (-v[0] * j22 + j12 * v[1]) / dt;
    const double dy = (-j11 * v[1] + j21 * v[0]) / dt;
    x += dx;
    y += dy;
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (std::abs(dx) <= opts.tol * (1.0 + std::abs(x)) &&
        std::abs(dy) <= opts.tol * (1.0 + std::abs(y)))
      return true;
  }
  return false;
}

}  // namespace

OracleResult oracle_zero_search(const PolynomialMEP2& p,
                                std::array<double, 2> range1,
                                std::array<double, 2> range2, int resolution,
                                const NewtonOptions& opts) {
  const ContourGrid g = contour_grid(p, range1, range2, resolution);
  const int n = resolution;
  const auto det = [&](double x, double y) {
    return evaluate(p, x, y).determinant();
  };
  const auto changes = [](double lo, double hi) { return lo <= 0.0 && hi >= 0.0; };

  // A real-valued determinant vanishes on curves; the isolated real roots
  // are then the points where those curves cross, d = 0 and grad d = 0.
  double dmax = 0.0, imax_abs = 0.0;
  for (cplx d : g.d) {
    dmax = std::max(dmax, std::abs(d));
    imax_abs = std::max(imax_abs, std::abs(d.imag()));
  }
  const bool real_valued = imax_abs <= 1e-13 * dmax;
  const auto grad = [&](double x, double y) -> std::array<double, 2> {
    const double hx = opts.fd_step * (1.0 + std::abs(x));
    const double hy = opts.fd_step * (1.0 + std::abs(y));
    return {(det(x + hx, y) - det(x - hx, y)).real() / (2 * hx),
            (det(x, y + hy) - det(x, y - hy)).real() / (2 * hy)};
  };
  const auto at = [&](int a, int b) { return g.at(a, b).real(); };

  OracleResult out;
  std::vector<std::array<double, 2>> found;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const int a0 = std::max(0, i - 1), a1 = std::min(n - 1, i + 2);
      const int b0 = std::max(0, j - 1), b1 = std::min(n - 1, j + 2);
      double rmin = INFINITY, rmax = -INFINITY, imin = INFINITY, imax = -INFINITY;
      for (int a = a0; a <= a1; ++a)
        for (int b = b0; b <= b1; ++b) {
          const cplx d = g.at(a, b);
          rmin = std::min(rmin, d.real());
          rmax = std::max(rmax, d.real());
          imin = std::min(imin, d.imag());
          imax = std::max(imax, d.imag());
        }
      if (!changes(rmin, rmax)) continue;
      if (real_valued) {
        // grid differences of d must change sign in both directions
        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (int a = a0; a < a1; ++a)
          for (int b = b0; b <= b1; ++b) {
            xmin = std::min(xmin, at(a + 1, b) - at(a, b));
            xmax = std::max(xmax, at(a + 1, b) - at(a, b));
          }
        for (int a = a0; a <= a1; ++a)
          for (int b = b0; b < b1; ++b) {
            ymin = std::min(ymin, at(a, b + 1) - at(a, b));
            ymax = std::max(ymax, at(a, b + 1) - at(a, b));
          }
        if (!changes(xmin, xmax) || !changes(ymin, ymax)) continue;
      } else if (!changes(imin, imax)) {
        continue;
      }
      ++out.seeds;
      double x = 0.5 * (g.p1[i] + g.p1[i + 1]);
      double y = 0.5 * (g.p2[j] + g.p2[j + 1]);
      bool ok;
      if (real_valued) {
        ok = newton2(grad, x, y, 1e3 * opts.fd_step, opts) &&
             std::abs(det(x, y)) <= 1e-10 * dmax;
      } else {
        const auto f = [&](double u, double v) -> std::array<double, 2> {
          const cplx d = det(u, v);
          return {d.real(), d.imag()};
        };
        ok = newton2(f, x, y, opts.fd_step, opts);
      }
      const double sx = 1e-9 * (range1[1] - range1[0]);
      const double sy = 1e-9 * (range2[1] - range2[0]);
      if (!ok || x < range1[0] - sx || x > range1[1] + sx || y < range2[0] - sy ||
          y > range2[1] + sy) {
        ++out.discarded;
        continue;
      }
      const bool dup = std::any_of(found.begin(), found.end(), [&](const auto& r) {
        return std::hypot(r[0] - x, r[1] - y) <= opts.dedup_radius;
      });
      if (!dup) found.push_back({x, y});
    }
  }
  std::sort(found.begin(), found.end());
  out.roots = std::move(found);
  return out;
}

FlutterSummary summarize_flutter(const SolveReport& report, SectionForm form,
                                 const SectionMatrices& m) {
  FlutterSummary s;
  s.form = form;
  s.divergence = divergence_speed(m);
  for (const auto& t : report.tuples) {
    if (!t.is_physical) continue;
    const double v = t.params[0].real();
    const double f = t.params[1].real();
    if (!(v > 1e-8) || !(f > 1e-8)) continue;
    if (s.found && v >= s.airspeed) continue;
    s.found = true;
    s.airspeed = v;
    s.frequency = f;
    switch (form) {
      case SectionForm::tau_lambda_undamped:
        s.chi = 1.0 / std::sqrt(f);
        break;
      case SectionForm::tau_lambda:
        s.chi = 1.0 / f;
        break;
      case SectionForm::y_chi:
        s.chi = f;
        break;
    }
  }
  return s;
}

nlohmann::json to_json(const FlutterSummary& s) {
  nlohmann::json j = {{"form", to_string(s.form)},
                      {"found", s.found},
                      {"divergence_Y", s.divergence}};
  if (s.found) {
    j["airspeed"] = s.airspeed;
    j["frequency_param"] = s.frequency;
    j["chi"] = s.chi;
  }
  return j;
}

}  // namespace mep
