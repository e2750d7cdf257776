#pragma once

// Kronecker-product operator determinants Delta_0 .. Delta_N of a linear
// multiparameter problem. Delta_k z = eta_k Delta_0 z for every solution.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mep/problem.hpp"

namespace mep {

enum class DeterminantMethod { two_param, leibniz, laplace };

std::string to_string(DeterminantMethod m);
DeterminantMethod determinant_method_from_string(const std::string& s);

struct OperatorDeterminants {
  std::vector<ComplexMatrix> deltas;  // Delta_0 .. Delta_K
  Index size = 0;
  DeterminantMethod method = DeterminantMethod::leibniz;
};

/// Closed forms for two equations in two parameters; throws ArgumentError
/// for any other arity.
OperatorDeterminants deltas_two_param(const LinearMEP& sys,
                                      Index max_side = kDefaultMaxSide);

/// Signed sum over permutations. Kronecker factors are always in equation
/// order. Only Delta_0 .. Delta_{max_index} are built (default: all N).
OperatorDeterminants deltas_leibniz(const LinearMEP& sys,
                                    Index max_side = kDefaultMaxSide,
                                    int max_index = -1);

/// Cofactor recursion down the first column. Each minor is shuffled back to
/// equation factor order, so the result equals deltas_leibniz up to rounding.
OperatorDeterminants deltas_laplace(const LinearMEP& sys,
                                    Index max_side = kDefaultMaxSide,
                                    int max_index = -1);

OperatorDeterminants build_deltas(const LinearMEP& sys, DeterminantMethod m,
                                  Index max_side = kDefaultMaxSide,
                                  int max_index = -1);

/// Parity of a permutation of 0..n-1: +1 or -1.
int permutation_sign(const std::vector<int>& perm);

using Pencil = std::pair<std::reference_wrapper<const ComplexMatrix>,
                         std::reference_wrapper<const ComplexMatrix>>;

/// (Delta_k, Delta_0) for k = 1 .. K, in parameter order.
std::vector<Pencil> assemble_geps(const OperatorDeterminants& d);

/// Product of equation sizes; DimensionError if it exceeds max_side.
Index determinant_side(const LinearMEP& sys, Index max_side);

}  // namespace mep
