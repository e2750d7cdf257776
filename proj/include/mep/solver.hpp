#pragma once

// The direct pipeline: conjugate augmentation, linearization, operator
// determinants, compression, one QZ solve and recovery of the remaining
// parameter for every finite regular eigenvalue.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mep/compression.hpp"
#include "mep/linearization.hpp"
#include "mep/operator_determinants.hpp"
#include "mep/problem.hpp"

namespace mep {

enum class Variant { strict, quasi };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

enum class Recovery {
  automatic,          // Rayleigh quotients for simple eigenvalues
  back_substitution,  // always re-solve the original problem at fixed value
};

struct SolveOptions {
  std::optional<double> rank_tol;  // compression; default from matrix size
  double residual_tol = 1e-6;
  double real_tol = 1e-8;
  double cluster_tol = 1e-6;  // relative; eigenvalues closer are one cluster
  double dedup_tol = 1e-8;    // relative; tuples closer are duplicates
  bool eigenvectors = true;   // false: eigenvalues only, back-substitution
  bool left_vectors = true;   // two-sided Rayleigh quotients
  Recovery recovery = Recovery::automatic;
  DeterminantMethod method = DeterminantMethod::leibniz;
  Index max_side = kDefaultMaxSide;
};

struct PhaseTimings {
  double setup = 0.0;
  double compression = 0.0;
  double gep_solve = 0.0;
  double secondary_solve = 0.0;
  double total() const { return setup + compression + gep_solve + secondary_solve; }
};

struct SolveReport {
  std::vector<EigenTuple> tuples;  // all finite regular solutions
  std::vector<RatioPair> infinite;  // eigenvalues of the first pencil at infinity
  PhaseTimings timings;
  Index size_uncompressed = 0;
  Index size_compressed = 0;
  Variant variant = Variant::strict;
  std::vector<std::string> param_names;
  int airspeed_param = 0;
  std::vector<std::string> diagnostics;
  CompressionResult compression;  // deltas dropped after the solve
  LinearizationRecord record;
};

SolveReport solve_direct(const PolynomialMEP2& p, Variant variant,
                         const SolveOptions& opts = {});

/// Linear problem read from a file: Leibniz (or chosen) determinants,
/// compression, Rayleigh quotients for every parameter.
SolveReport solve_linear(const LinearMEP& sys, const SolveOptions& opts = {});

struct RecoveryResult {
  std::vector<EigenTuple> tuples;
  std::vector<std::string> diagnostics;
};

/// Turns the finite eigenvalues of (Delta_1, Delta_0) into tuples of the
/// original problem. `pencils` are the (compressed) Delta_0..Delta_2.
RecoveryResult recover_secondary(const OperatorDeterminants& pencils,
                                 const GepSolution& primary,
                                 const LinearizationRecord& record,
                                 const PolynomialMEP2& p,
                                 const SolveOptions& opts = {});

/// Fixes parameter `fixed` of p at `value` and solves both augmented
/// equations for the other parameter. Returns up to max_count distinct
/// candidates with residual <= opts.residual_tol, best first.
std::vector<EigenTuple> back_substitute(const PolynomialMEP2& p, int fixed,
                                        cplx value, std::size_t max_count,
                                        const SolveOptions& opts = {});

enum class FilterMode { all, real, physical };
FilterMode filter_mode_from_string(const std::string& s);

/// Keeps the tuples matching `mode`, stably sorted by the real part of the
/// first parameter.
std::vector<EigenTuple> filter_tuples(const std::vector<EigenTuple>& tuples,
                                      FilterMode mode);

nlohmann::json to_json(const EigenTuple& t,
                       const std::vector<std::string>& names);
nlohmann::json to_json(const SolveReport& r);

}  // namespace mep
