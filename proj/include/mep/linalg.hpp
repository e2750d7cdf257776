#pragma once

// Dense complex linear algebra used by every other module: Kronecker
// products, SVD-based rank decisions and the QZ generalized eigensolver.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mep/errors.hpp"

namespace mep {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default cap on either side of a Kronecker product or operator determinant.
inline constexpr Index kDefaultMaxSide = 4096;

bool all_finite(const ComplexMatrix& a);

/// Throws ValidationError naming `what` if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const std::string& what);

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
/// Throws DimensionError when either side of the result exceeds max_side.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   Index max_side = kDefaultMaxSide);

/// max(rows, cols) * unit roundoff * 100.
double default_rank_tolerance(Index rows, Index cols);

struct RankDecision {
  Index rank = 0;
  Eigen::VectorXd singular_values;
  double threshold = 0.0;
  bool ambiguous = false;  // a singular value lies within 10x of threshold
  ComplexMatrix col_basis;        // range(A)
  ComplexMatrix row_basis;        // range(A^H)
  ComplexMatrix null_basis;       // ker(A)
  ComplexMatrix left_null_basis;  // ker(A^H)
};

/// Rank = number of singular values above rel_tol * sigma_max.
RankDecision numerical_rank(const ComplexMatrix& a, double rel_tol);

/// Same, but the threshold is rel_tol * reference_norm. Used when the
/// matrix is a block of a larger family whose scale decides what is zero.
RankDecision numerical_rank(const ComplexMatrix& a, double rel_tol,
                            double reference_norm);

/// Singular values only, descending.
Eigen::VectorXd singular_values(const ComplexMatrix& a);

struct RatioPair {
  cplx alpha;
  cplx beta;
};

struct GepSolution {
  std::vector<RatioPair> eigenvalues;
  std::vector<bool> finite_mask;
  ComplexMatrix right_vectors;               // columns, unit 2-norm; empty if not requested
  std::optional<ComplexMatrix> left_vectors;  // columns, unit 2-norm

  std::size_t size() const { return eigenvalues.size(); }
  /// alpha / beta; throws ArgumentError for an eigenvalue flagged infinite.
  cplx value(std::size_t i) const;
};

struct GepOptions {
  bool right_vectors = true;
  bool left_vectors = false;
};

/// All generalized eigenvalues of A z = lambda B z by complex QZ.
/// Eigenvalues with |beta| <= 10 n eps ||B||_F are flagged infinite.
GepSolution solve_gep(const ComplexMatrix& a, const ComplexMatrix& b,
                      bool want_left = false);
GepSolution solve_gep(const ComplexMatrix& a, const ComplexMatrix& b,
                      const GepOptions& options);

}  // namespace mep
