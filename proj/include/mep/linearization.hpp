#pragma once

// Reduce a quadratic two-parameter problem to a linear multiparameter one,
// either by enlarging the matrices (strict) or by adding auxiliary
// parameters with 2x2 constraint equations (quasi).

#include <optional>
#include <string>
#include <vector>

#include "mep/problem.hpp"

namespace mep {

enum class LinearizationKind { strict, quasi };

std::string to_string(LinearizationKind k);

/// What a parameter of the linear problem stands for.
struct ParamSlot {
  enum class Role { primary, square, product };
  std::string name;
  Role role = Role::primary;
  int of = 0;  // original parameter index for primary/square; unused for product
};

struct LinearizationRecord {
  LinearizationKind kind = LinearizationKind::strict;
  Index original_size = 0;
  Index linear_size = 0;  // size of the linearized main equation
  /// Strict only: block k of the enlarged vector is x times
  /// (1, param1, param2)[block_power[k]].
  std::vector<int> block_power;
  std::string block_map;
  std::vector<ParamSlot> slots;  // linear parameter order
  /// Original parameter that has no primary slot and is recovered as
  /// product / other (the mixed-term quasi form); -1 if none.
  int dropped_primary = -1;

  /// Original parameter index held in the first slot.
  int first_primary() const { return slots.at(0).of; }
  /// Slot holding the given original parameter directly, or -1.
  int primary_slot(int param) const;
};

struct StrictLinearization {
  LinearEquation equation;  // coefficients for (1, param1, param2)
  LinearizationRecord record;
  /// The equation and its conjugate as a two-parameter linear problem.
  LinearMEP augmented(const std::array<std::string, 2>& names) const;
};

struct QuasiLinearization {
  LinearEquation main;                      // in the slot parameters
  std::vector<LinearEquation> constraints;  // 2x2 determinant constraints
  LinearizationRecord record;
  /// main, conj(main), constraints..., in that equation order.
  LinearMEP augmented() const;
};

/// Throws UnsupportedDegreeError for total degree > 2 and ArgumentError if
/// a parameter does not appear in any term.
StrictLinearization linearize_strict(const PolynomialMEP2& p);
QuasiLinearization linearize_quasi(const PolynomialMEP2& p);

/// 2x2 pencil [[s, t], [t, 1]]: singular exactly when s = t^2.
/// Returned as coefficients of (1, t, s) in the given slot positions.
LinearEquation square_constraint(std::size_t n_slots, std::size_t t_slot,
                                 std::size_t s_slot);

/// Aux consistency |value - relation| / (1 + |value| + |relation|).
double aux_consistency(const ParamSlot& slot, cplx value, cplx param1,
                       cplx param2);

}  // namespace mep
