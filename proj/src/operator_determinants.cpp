#include "mep/operator_determinants.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mep {

namespace {

int resolve_max_index(const LinearMEP& sys, int max_index) {
  const int n = static_cast<int>(sys.n_params());
  if (max_index < 0) return n;
  if (max_index > n)
    throw ArgumentError("operator determinants: max_index " +
                        std::to_string(max_index) + " exceeds " +
                        std::to_string(n));
  return max_index;
}

// Entry (i, c) of the array whose determinant gives Delta_k: column c of
// the coefficient array, with column k replaced by -A_{i0}.
ComplexMatrix entry(const LinearMEP& sys, std::size_t i, std::size_t c,
                    std::size_t k) {
  if (c == k) return -sys.coefficient(i, 0);
  return sys.coefficient(i, c);
}

ComplexMatrix leibniz_one(const LinearMEP& sys, std::size_t k, Index side,
                          Index max_side) {
  const std::size_t n = sys.n_params();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<ComplexMatrix> factors(n);
  ComplexMatrix out = ComplexMatrix::Zero(side, side);
  do {
    bool zero = false;
    for (std::size_t i = 0; i < n && !zero; ++i) {
      factors[i] = entry(sys, i, perm[i] + 1, k);
      zero = factors[i].isZero(0.0);
    }
    if (zero) continue;
    ComplexMatrix term = factors[0];
    for (std::size_t i = 1; i < n; ++i) term = kron(term, factors[i], max_side);
    if (permutation_sign(perm) > 0)
      out += term;
    else
      out -= term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Reorders the Kronecker factors of `m` (currently in order `order`, with
// sizes taken from the equations) into ascending equation order.
ComplexMatrix shuffle_to_sorted(const ComplexMatrix& m,
                                const std::vector<std::size_t>& order,
                                const LinearMEP& sys) {
  const std::size_t f = order.size();
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted == order) return m;
  std::vector<Index> size_of(sys.n_params());
  for (std::size_t i = 0; i < sys.n_params(); ++i)
    size_of[i] = sys.equation(i).size();
  // Stride of each equation's digit in the sorted layout.
  std::vector<Index> stride(sys.n_params(), 0);
  Index s = 1;
  for (std::size_t t = f; t-- > 0;) {
    stride[sorted[t]] = s;
    s *= size_of[sorted[t]];
  }
  const Index total = m.rows();
  std::vector<Index> perm(total);
  std::vector<Index> digit(f, 0);
  for (Index src = 0; src < total; ++src) {
    Index dst = 0;
    for (std::size_t t = 0; t < f; ++t) dst += digit[t] * stride[order[t]];
    perm[src] = dst;
    for (std::size_t t = f; t-- > 0;) {
      if (++digit[t] < size_of[order[t]]) break;
      digit[t] = 0;
    }
  }
  ComplexMatrix out(total, total);
  for (Index c = 0; c < total; ++c)
    for (Index r = 0; r < total; ++r) out(perm[r], perm[c]) = m(r, c);
  return out;
}

// Operator determinant of the subarray with the given rows (equations) and
// columns, Kronecker factors in ascending equation order.
ComplexMatrix laplace_rec(const LinearMEP& sys, std::size_t k,
                          const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols,
                          Index max_side) {
  if (rows.size() == 1) return entry(sys, rows[0], cols[0], k);
  Index side = 1;
  for (auto r : rows) side *= sys.equation(r).size();
  ComplexMatrix out = ComplexMatrix::Zero(side, side);
  const std::vector<std::size_t> minor_cols(cols.begin() + 1, cols.end());
  for (std::size_t pos = 0; pos < rows.size(); ++pos) {
    const ComplexMatrix head = entry(sys, rows[pos], cols[0], k);
    if (head.isZero(0.0)) continue;
    std::vector<std::size_t> minor_rows;
    for (std::size_t t = 0; t < rows.size(); ++t)
      if (t != pos) minor_rows.push_back(rows[t]);
    const ComplexMatrix minor =
        laplace_rec(sys, k, minor_rows, minor_cols, max_side);
    if (minor.isZero(0.0)) continue;
    std::vector<std::size_t> order{rows[pos]};
    order.insert(order.end(), minor_rows.begin(), minor_rows.end());
    ComplexMatrix term = shuffle_to_sorted(kron(head, minor, max_side), order, sys);
    if (pos % 2 == 0)
      out += term;
    else
      out -= term;
  }
  return out;
}

}  // namespace

std::string to_string(DeterminantMethod m) {
  switch (m) {
    case DeterminantMethod::two_param:
      return "two_param";
    case DeterminantMethod::leibniz:
      return "leibniz";
    case DeterminantMethod::laplace:
      return "laplace";
  }
  return "?";
}

DeterminantMethod determinant_method_from_string(const std::string& s) {
  if (s == "two_param") return DeterminantMethod::two_param;
  if (s == "leibniz") return DeterminantMethod::leibniz;
  if (s == "laplace") return DeterminantMethod::laplace;
  throw ArgumentError("unknown determinant method '" + s + "'");
}

int permutation_sign(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      if (perm[j] < 0 || static_cast<std::size_t>(perm[j]) >= perm.size())
        throw ArgumentError("permutation_sign: not a permutation");
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

Index determinant_side(const LinearMEP& sys, Index max_side) {
  Index side = 1;
  std::ostringstream sizes;
  for (std::size_t i = 0; i < sys.n_params(); ++i) {
    const Index n = sys.equation(i).size();
    sizes << (i ? " x " : "") << n;
    if (side > max_side / std::max<Index>(n, 1) + 1 || side * n > max_side) {
      throw DimensionError("operator determinant side exceeds cap " +
                           std::to_string(max_side) + " (equation sizes " +
                           sizes.str() + " ...)");
    }
    side *= n;
  }
  return side;
}

OperatorDeterminants deltas_two_param(const LinearMEP& sys, Index max_side) {
  if (sys.n_params() != 2)
    throw ArgumentError("deltas_two_param: needs exactly 2 equations, got " +
                        std::to_string(sys.n_params()));
  OperatorDeterminants d;
  d.method = DeterminantMethod::two_param;
  d.size = determinant_side(sys, max_side);
  const auto& A = sys.coefficient(0, 0);
  const auto& B = sys.coefficient(0, 1);
  const auto& C = sys.coefficient(0, 2);
  const auto& A2 = sys.coefficient(1, 0);
  const auto& B2 = sys.coefficient(1, 1);
  const auto& C2 = sys.coefficient(1, 2);
  d.deltas.push_back(kron(B, C2, max_side) - kron(C, B2, max_side));
  d.deltas.push_back(kron(C, A2, max_side) - kron(A, C2, max_side));
  d.deltas.push_back(kron(A, B2, max_side) - kron(B, A2, max_side));
  return d;
}

OperatorDeterminants deltas_leibniz(const LinearMEP& sys, Index max_side,
                                    int max_index) {
  const int kmax = resolve_max_index(sys, max_index);
  OperatorDeterminants d;
  d.method = DeterminantMethod::leibniz;
  d.size = determinant_side(sys, max_side);
  for (int k = 0; k <= kmax; ++k)
    d.deltas.push_back(leibniz_one(sys, static_cast<std::size_t>(k), d.size,
                                   max_side));
  return d;
}

OperatorDeterminants deltas_laplace(const LinearMEP& sys, Index max_side,
                                    int max_index) {
  const int kmax = resolve_max_index(sys, max_index);
  OperatorDeterminants d;
  d.method = DeterminantMethod::laplace;
  d.size = determinant_side(sys, max_side);
  std::vector<std::size_t> rows(sys.n_params()), cols(sys.n_params());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 1);
  for (int k = 0; k <= kmax; ++k) {
    ComplexMatrix m =
        laplace_rec(sys, static_cast<std::size_t>(k), rows, cols, max_side);
    if (m.rows() != d.size) m = ComplexMatrix::Zero(d.size, d.size);
    d.deltas.push_back(std::move(m));
  }
  return d;
}

OperatorDeterminants build_deltas(const LinearMEP& sys, DeterminantMethod m,
                                  Index max_side, int max_index) {
  switch (m) {
    case DeterminantMethod::two_param: {
      OperatorDeterminants d = deltas_two_param(sys, max_side);
      if (max_index >= 0 && max_index < 2) d.deltas.resize(max_index + 1);
      return d;
    }
    case DeterminantMethod::leibniz:
      return deltas_leibniz(sys, max_side, max_index);
    case DeterminantMethod::laplace:
      return deltas_laplace(sys, max_side, max_index);
  }
  throw ArgumentError("build_deltas: unknown method");
}

std::vector<Pencil> assemble_geps(const OperatorDeterminants& d) {
  std::vector<Pencil> out;
  for (std::size_t k = 1; k < d.deltas.size(); ++k)
    out.emplace_back(std::cref(d.deltas[k]), std::cref(d.deltas[0]));
  return out;
}

}  // namespace mep
