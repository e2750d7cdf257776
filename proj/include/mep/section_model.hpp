#pragma once

// Two-degree-of-freedom pitch/plunge section with quasisteady aerodynamics:
// matrices, the three polynomial forms, divergence, modal sweeps and the
// determinant-contour root oracle.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mep/problem.hpp"
#include "mep/solver.hpp"

namespace mep {

struct SectionParams {
  double mu = 20.0;
  double r = 0.4899;
  double omega_h = 0.5642;
  double omega_theta = 1.4105;
  double zeta_h = 0.014105;      // fraction, not percent
  double zeta_theta = 0.023508;  // fraction, not percent
  double r_theta = -0.1;
  double a = -0.2;

  /// The reference configuration used throughout the examples.
  static SectionParams table1() { return {}; }
  /// Same, with both damping ratios zero.
  static SectionParams table1_undamped();
  /// Throws ValidationError naming the offending field.
  void validate() const;
};

nlohmann::json to_json(const SectionParams& p);
/// Every field is required; ParseError names a missing or non-numeric one.
SectionParams section_params_from_json(const nlohmann::json& j);
SectionParams load_section_params(const std::filesystem::path& path);

struct SectionMatrices {
  ComplexMatrix M0, G0, G1, G2, D0, K0;
};

SectionMatrices build_matrices(const SectionParams& p);

enum class SectionForm { tau_lambda_undamped, tau_lambda, y_chi };

std::string to_string(SectionForm f);
/// Accepts "undamped", "tau-lambda", "y-chi" (and the enum spellings).
SectionForm section_form_from_string(const std::string& s);

/// Parameter order: (tau, Lambda), (tau, lambda) or (Y, chi); the first
/// parameter is the airspeed-like one. Throws ArgumentError for the
/// undamped form when D0 is nonzero.
PolynomialMEP2 make_form(const SectionMatrices& m, SectionForm form);

/// Real positive roots Y of det(K0 - Y^2 G2) = 0, ascending.
std::vector<double> divergence_speed(const SectionMatrices& m);

struct SweepRow {
  double tau = 0.0;
  int mode = 0;
  cplx chi;
};

struct SweepCrossing {
  int mode = 0;
  double tau = 0.0;  // linear interpolation of the Im(chi) sign change
  double re_chi = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by tau, then mode
  std::vector<SweepCrossing> crossings;
};

/// Per tau, the n modal frequencies chi (chi = 1/lambda, Re chi >= 0),
/// tracked across steps by eigenvector overlap.
SweepResult modal_sweep(const SectionMatrices& m, const std::vector<double>& taus);

struct ContourGrid {
  std::vector<double> p1, p2;
  std::vector<cplx> d;  // d[i * p2.size() + j] = det W(p1[i], p2[j])
  cplx at(std::size_t i, std::size_t j) const { return d[i * p2.size() + j]; }
};

ContourGrid contour_grid(const PolynomialMEP2& p, std::array<double, 2> range1,
                         std::array<double, 2> range2, int resolution);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double fd_step = 1e-6;      // relative: h = fd_step * (1 + |x|)
  double dedup_radius = 1e-6;
};

struct OracleResult {
  std::vector<std::array<double, 2>> roots;  // sorted
  int seeds = 0;
  int discarded = 0;  // seeds whose Newton iteration failed
};

/// Brute-force real roots of det W(p1, p2) = 0 inside the rectangle: Newton
/// on (Re d, Im d) from cells where both change sign. When d is real on the
/// whole grid its zeros form curves, and the roots reported are the points
/// where those curves cross (d = 0 and grad d = 0).
OracleResult oracle_zero_search(const PolynomialMEP2& p,
                                std::array<double, 2> range1,
                                std::array<double, 2> range2, int resolution,
                                const NewtonOptions& opts = {});

struct FlutterSummary {
  SectionForm form = SectionForm::tau_lambda_undamped;
  bool found = false;
  double airspeed = 0.0;    // tau or Y
  double frequency = 0.0;   // Lambda, lambda or chi, as solved
  double chi = 0.0;         // rad/s
  std::vector<double> divergence;  // Y values
};

/// Lowest positive-airspeed physical tuple with positive frequency
/// parameter. Zero-frequency (divergence) tuples are excluded.
FlutterSummary summarize_flutter(const SolveReport& report, SectionForm form,
                                 const SectionMatrices& m);

nlohmann::json to_json(const FlutterSummary& s);

}  // namespace mep
