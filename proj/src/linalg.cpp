#include "mep/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void normalize_columns(ComplexMatrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    const double n = v.col(j).norm();
    if (n > 0.0) v.col(j) /= n;
  }
}

struct SvdFactors {
  Eigen::VectorXd s;
  ComplexMatrix u;   // m x m
  ComplexMatrix vt;  // n x n (V^H)
};

// Full SVD. zgesdd first; zgesvd if divide-and-conquer does not converge.
SvdFactors full_svd(const ComplexMatrix& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  SvdFactors f;
  f.s.resize(std::min(m, n));
  f.u.resize(m, m);
  f.vt.resize(n, n);
  ComplexMatrix work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, work.data(),
                                   std::max(1, m), f.s.data(), f.u.data(),
                                   std::max(1, m), f.vt.data(), std::max(1, n));
  if (info > 0) {
    work = a;
    std::vector<double> superb(std::max<lapack_int>(1, std::min(m, n)));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'A', 'A', m, n, work.data(),
                          std::max(1, m), f.s.data(), f.u.data(),
                          std::max(1, m), f.vt.data(), std::max(1, n),
                          superb.data());
  }
  if (info != 0) {
    std::ostringstream msg;
    msg << "SVD of " << m << "x" << n << " matrix failed (LAPACK info " << info
        << ")";
    throw NumericalError(msg.str());
  }
  return f;
}

RankDecision decide(const ComplexMatrix& a, double rel_tol,
                    std::optional<double> reference_norm) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw ArgumentError("numerical_rank: rel_tol must lie in (0, 1)");
  const Index m = a.rows();
  const Index n = a.cols();
  RankDecision d;
  if (m == 0 || n == 0) {
    d.col_basis.resize(m, 0);
    d.row_basis.resize(n, 0);
    d.null_basis = ComplexMatrix::Identity(n, n);
    d.left_null_basis = ComplexMatrix::Identity(m, m);
    return d;
  }
  SvdFactors f = full_svd(a);
  d.singular_values = f.s;
  const double scale = reference_norm.value_or(f.s(0));
  d.threshold = rel_tol * scale;
  Index r = 0;
  for (Index i = 0; i < f.s.size(); ++i) {
    const double s = f.s(i);
    if (s > d.threshold) ++r;
    if (d.threshold > 0.0 && s > d.threshold / 10.0 && s < d.threshold * 10.0)
      d.ambiguous = true;
  }
  d.rank = r;
  const ComplexMatrix v = f.vt.adjoint();
  d.col_basis = f.u.leftCols(r);
  d.left_null_basis = f.u.rightCols(m - r);
  d.row_basis = v.leftCols(r);
  d.null_basis = v.rightCols(n - r);
  return d;
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

void require_finite(const ComplexMatrix& a, const std::string& what) {
  if (!all_finite(a)) throw ValidationError(what + ": non-finite entry");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   Index max_side) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > max_side || cols > max_side) {
    std::ostringstream msg;
    msg << "kron: result would be " << rows << "x" << cols << " ("
        << a.rows() << "x" << a.cols() << " (x) " << b.rows() << "x"
        << b.cols() << "), exceeding the side cap " << max_side;
    throw DimensionError(msg.str());
  }
  ComplexMatrix out(rows, cols);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double default_rank_tolerance(Index rows, Index cols) {
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * kEps * 100.0;
}

RankDecision numerical_rank(const ComplexMatrix& a, double rel_tol) {
  return decide(a, rel_tol, std::nullopt);
}

RankDecision numerical_rank(const ComplexMatrix& a, double rel_tol,
                            double reference_norm) {
  return decide(a, rel_tol, reference_norm);
}

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  ComplexMatrix work = a;
  cplx dummy{};
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                                   s.data(), &dummy, 1, &dummy, 1);
  if (info > 0) {
    work = a;
    std::vector<double> superb(std::min(m, n));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, work.data(), m,
                          s.data(), &dummy, 1, &dummy, 1, superb.data());
  }
  if (info != 0)
    throw NumericalError("singular_values: LAPACK info " +
                         std::to_string(info));
  return s;
}

cplx GepSolution::value(std::size_t i) const {
  if (!finite_mask.at(i))
    throw ArgumentError("GepSolution::value: eigenvalue " + std::to_string(i) +
                        " is infinite");
  return eigenvalues[i].alpha / eigenvalues[i].beta;
}

GepSolution solve_gep(const ComplexMatrix& a, const ComplexMatrix& b,
                      bool want_left) {
  GepOptions opts;
  opts.left_vectors = want_left;
  return solve_gep(a, b, opts);
}

GepSolution solve_gep(const ComplexMatrix& a, const ComplexMatrix& b,
                      const GepOptions& options) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw ArgumentError("solve_gep: matrices must be square");
  if (a.rows() != b.rows())
    throw ArgumentError("solve_gep: matrices must have the same size");
  if (!all_finite(a) || !all_finite(b))
    throw ArgumentError("solve_gep: non-finite entries");

  const lapack_int n = static_cast<lapack_int>(a.rows());
  GepSolution sol;
  if (n == 0) {
    sol.right_vectors.resize(0, 0);
    if (options.left_vectors) sol.left_vectors = ComplexMatrix(0, 0);
    return sol;
  }

  ComplexMatrix aw = a;
  ComplexMatrix bw = b;
  ComplexVector alpha(n), beta(n);
  const char jobvl = options.left_vectors ? 'V' : 'N';
  const char jobvr = options.right_vectors ? 'V' : 'N';
  ComplexMatrix vl(options.left_vectors ? n : 1, options.left_vectors ? n : 1);
  ComplexMatrix vr(options.right_vectors ? n : 1,
                   options.right_vectors ? n : 1);
  const lapack_int info = LAPACKE_zggev3(
      LAPACK_COL_MAJOR, jobvl, jobvr, n, aw.data(), n, bw.data(), n,
      alpha.data(), beta.data(), vl.data(), vl.rows(), vr.data(), vr.rows());
  if (info != 0) {
    std::ostringstream msg;
    if (info < 0) {
      msg << "solve_gep: illegal argument " << -info << " to zggev3";
      throw ArgumentError(msg.str());
    }
    if (info <= n)
      msg << "solve_gep: QZ iteration failed; eigenvalues " << info
          << ".." << n << " are not reliable (zggev3 info " << info << ")";
    else
      msg << "solve_gep: QZ post-processing failed (zggev3 info " << info
          << ")";
    throw NumericalError(msg.str());
  }

  const double cutoff = 10.0 * n * kEps * b.norm();
  sol.eigenvalues.resize(n);
  sol.finite_mask.resize(n);
  for (lapack_int i = 0; i < n; ++i) {
    sol.eigenvalues[i] = {alpha(i), beta(i)};
    sol.finite_mask[i] = std::abs(beta(i)) > cutoff && std::abs(beta(i)) > 0.0;
  }
  if (options.right_vectors) {
    normalize_columns(vr);
    sol.right_vectors = std::move(vr);
  } else {
    sol.right_vectors.resize(n, 0);
  }
  if (options.left_vectors) {
    normalize_columns(vl);
    sol.left_vectors = std::move(vl);
  }
  return sol;
}

}  // namespace mep
