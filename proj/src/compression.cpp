#include "mep/compression.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<double> norms(const std::vector<ComplexMatrix>& ds) {
  std::vector<double> out;
  for (const auto& d : ds) out.push_back(d.norm());
  return out;
}

// Staircase steps amplify rounding noise when Delta_0 has small but genuine
// singular values, so values a little above the threshold may still be
// noise. Decisions near the threshold are settled by the widest singular
// value gap among cuts that drop values below kDropBand * threshold or keep
// values above threshold / 10. The family scale sits above the spectrum and
// eps * scale below it, so a block of pure noise still shows a gap.
constexpr double kDropBand = 1e3;

RankDecision resolve_by_gap(RankDecision d, double scale) {
  const Eigen::VectorXd& s = d.singular_values;
  const Index k = s.size();
  bool near = false;
  for (Index i = 0; i < k; ++i)
    near = near || (s(i) > d.threshold / 10.0 && s(i) < kDropBand * d.threshold);
  if (!near) return d;
  const double floor = kEps * scale;
  auto sigma = [&](Index i) {
    if (i < 0) return scale;
    if (i >= k) return floor;
    return std::max(s(i), floor);
  };
  auto gap = [&](Index r) { return sigma(r - 1) / sigma(r); };
  Index best = d.rank;
  for (Index r = 0; r <= k; ++r) {
    const bool drop_ok = r < d.rank && s(r) < kDropBand * d.threshold;
    const bool keep_ok = r > d.rank && s(r - 1) > d.threshold / 10.0;
    if ((drop_ok || keep_ok) && gap(r) > gap(best)) best = r;
  }
  if (best == d.rank) return d;
  const Index m = d.col_basis.rows();
  const Index n = d.row_basis.rows();
  ComplexMatrix u(m, m), v(n, n);
  u << d.col_basis, d.left_null_basis;
  v << d.row_basis, d.null_basis;
  d.rank = best;
  d.ambiguous = true;
  d.col_basis = u.leftCols(best);
  d.left_null_basis = u.rightCols(m - best);
  d.row_basis = v.leftCols(best);
  d.null_basis = v.rightCols(n - best);
  return d;
}

}  // namespace

std::string to_string(CompressionStage::Side s) {
  return s == CompressionStage::Side::row ? "row" : "col";
}

CompressionResult compress(const OperatorDeterminants& d,
                           std::optional<double> rel_tol) {
  if (d.deltas.size() < 3)
    throw ArgumentError("compress: needs at least Delta_0, Delta_1, Delta_2");
  const Index m = d.deltas[0].rows();
  for (const auto& x : d.deltas)
    if (x.rows() != m || x.cols() != m)
      throw ArgumentError("compress: deltas must be square of equal size");

  const double tol = rel_tol.value_or(default_rank_tolerance(m, m));
  double scale = 0.0;
  for (const auto& x : d.deltas) scale = std::max(scale, x.norm());

  CompressionResult res;
  res.original_size = m;
  res.compressed.method = d.method;

  if (m == 0 || scale == 0.0) {
    res.compressed = d;
    res.compressed_size = m;
    return res;
  }

  // Fast path: a full-rank Delta_0 is passed through untouched.
  {
    const Eigen::VectorXd s = singular_values(d.deltas[0]);
    const double threshold = tol * scale;
    const bool full = s.size() > 0 && s(s.size() - 1) > threshold;
    if (full) {
      res.ambiguous = s(s.size() - 1) < 10.0 * threshold;
      res.compressed = d;
      res.compressed_size = m;
      return res;
    }
  }

  res.heuristic_n_gt_2 = d.deltas.size() > 3;
  std::vector<ComplexMatrix> w{d.deltas[0], d.deltas[1], d.deltas[2]};

  while (true) {
    const Index rows = w[0].rows();
    const Index cols = w[0].cols();
    if (rows == 0 || cols == 0) break;
    const RankDecision r0 = 
        resolve_by_gap(numerical_rank(w[0], tol, scale), scale);
    if (r0.rank == rows && rows == cols) {
      res.ambiguous = res.ambiguous || r0.ambiguous;
      break;
    }

    CompressionStage st;
    st.rank = r0.rank;
    st.rows_before = rows;
    st.cols_before = cols;
    st.threshold = r0.threshold;
    st.ambiguous = r0.ambiguous;
    st.norms_before = norms(w);

    if (cols > r0.rank) {
      st.side = CompressionStage::Side::col;
      const ComplexMatrix& v2 = r0.null_basis;
      ComplexMatrix stack(rows, 2 * v2.cols());
      stack << w[1] * v2, w[2] * v2;
      const RankDecision rw =
          resolve_by_gap(numerical_rank(stack, tol, scale), scale);
      st.ambiguous = st.ambiguous || rw.ambiguous;
      ComplexMatrix u(rows, rows);
      u << rw.col_basis, rw.left_null_basis;
      ComplexMatrix v(cols, cols);
      v << r0.row_basis, r0.null_basis;
      for (auto& x : w) {
        const ComplexMatrix t = u.adjoint() * x * v;
        st.norms_transformed.push_back(t.norm());
        x = t.bottomLeftCorner(rows - rw.rank, r0.rank);
      }
    } else {
      st.side = CompressionStage::Side::row;
      const ComplexMatrix& u2 = r0.left_null_basis;
      ComplexMatrix stack(2 * u2.cols(), cols);
      stack << u2.adjoint() * w[1], u2.adjoint() * w[2];
      const RankDecision rs =
          resolve_by_gap(numerical_rank(stack, tol, scale), scale);
      st.ambiguous = st.ambiguous || rs.ambiguous;
      ComplexMatrix u(rows, rows);
      u << r0.col_basis, r0.left_null_basis;
      ComplexMatrix v(cols, cols);
      v << rs.null_basis, rs.row_basis;
      for (auto& x : w) {
        const ComplexMatrix t = u.adjoint() * x * v;
        st.norms_transformed.push_back(t.norm());
        x = t.topLeftCorner(r0.rank, cols - rs.rank);
      }
    }
    st.rows_after = w[0].rows();
    st.cols_after = w[0].cols();
    res.ambiguous = res.ambiguous || st.ambiguous;
    res.stage_log.push_back(std::move(st));
    if (w[0].rows() == rows && w[0].cols() == cols) {
      std::ostringstream msg;
      msg << "compress: no progress at size " << rows << "x" << cols
          << " (rank " << r0.rank << ")";
      throw SingularStructureError(msg.str(), res.stage_log);
    }
  }

  if (w[0].rows() != w[0].cols()) {
    // Ran out of rows or columns: there is no regular part.
    for (auto& x : w) x.resize(0, 0);
  }
  res.compressed.deltas = std::move(w);
  res.compressed.size = res.compressed.deltas[0].rows();
  res.compressed_size = res.compressed.size;
  return res;
}

nlohmann::json to_json(const CompressionStage& s) {
  return {{"side", to_string(s.side)},
          {"rank", s.rank},
          {"size_before", {s.rows_before, s.cols_before}},
          {"size_after", {s.rows_after, s.cols_after}},
          {"threshold", s.threshold},
          {"ambiguous", s.ambiguous},
          {"norms_before", s.norms_before},
          {"norms_transformed", s.norms_transformed}};
}

nlohmann::json to_json(const CompressionResult& r) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : r.stage_log) stages.push_back(to_json(s));
  return {{"original_size", r.original_size},
          {"compressed_size", r.compressed_size},
          {"heuristic_n_gt_2", r.heuristic_n_gt_2},
          {"ambiguous", r.ambiguous},
          {"stages", stages}};
}

}  // namespace mep
