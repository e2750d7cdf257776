#include "mep/linearization.hpp"

#include <cmath>

namespace mep {

namespace {

void check_degree(const PolynomialMEP2& p) {
  for (const auto& [m, a] : p.terms()) {
    if (m.p + m.q > 2 && !a.isZero(0.0))
      throw UnsupportedDegreeError(
          "linearization supports total degree <= 2; found term (" +
          std::to_string(m.p) + "," + std::to_string(m.q) + ")");
  }
  if (p.degree_in(0) == 0 || p.degree_in(1) == 0)
    throw ArgumentError(
        "linearization: both parameters must appear in some nonzero term");
}

ComplexMatrix pencil2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

std::string to_string(LinearizationKind k) {
  return k == LinearizationKind::strict ? "strict" : "quasi";
}

int LinearizationRecord::primary_slot(int param) const {
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (slots[s].role == ParamSlot::Role::primary && slots[s].of == param)
      return static_cast<int>(s);
  return -1;
}

LinearMEP StrictLinearization::augmented(
    const std::array<std::string, 2>& names) const {
  return LinearMEP({equation, conjugate(equation)}, {names[0], names[1]});
}

LinearMEP QuasiLinearization::augmented() const {
  std::vector<LinearEquation> eqs{main, conjugate(main)};
  eqs.insert(eqs.end(), constraints.begin(), constraints.end());
  std::vector<std::string> names;
  for (const auto& s : record.slots) names.push_back(s.name);
  return LinearMEP(std::move(eqs), std::move(names));
}

StrictLinearization linearize_strict(const PolynomialMEP2& p) {
  check_degree(p);
  const Index n = p.size();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix Z = ComplexMatrix::Zero(n, n);
  const auto& nm = p.param_names();

  StrictLinearization out;
  auto& rec = out.record;
  rec.kind = LinearizationKind::strict;
  rec.original_size = n;
  rec.slots = {{nm[0], ParamSlot::Role::primary, 0},
               {nm[1], ParamSlot::Role::primary, 1}};
  auto& c = out.equation.coefficients;

  if (p.total_degree() <= 1) {
    c = {p.term(0, 0), p.term(1, 0), p.term(0, 1)};
    rec.block_power = {0};
    rec.block_map = "q = x";
  } else if (!p.has_term(0, 2) || !p.has_term(2, 0)) {
    // Only one parameter enters quadratically: q = [x; s*x].
    const int s = p.has_term(0, 2) ? 1 : 0;
    const ComplexMatrix sq = s == 0 ? p.term(2, 0) : p.term(0, 2);
    ComplexMatrix a0(2 * n, 2 * n), as(2 * n, 2 * n), ao(2 * n, 2 * n);
    a0 << p.term(0, 0), Z, Z, -I;
    as << (s == 0 ? p.term(1, 0) : p.term(0, 1)), sq, I, Z;
    ao << (s == 0 ? p.term(0, 1) : p.term(1, 0)), p.term(1, 1), Z, Z;
    c = s == 0 ? std::vector<ComplexMatrix>{a0, as, ao}
               : std::vector<ComplexMatrix>{a0, ao, as};
    rec.block_power = {0, s + 1};
    rec.block_map = "q = [x; " + nm[s] + "*x]";
  } else {
    // q = [x; p2*x; p1*x].
    const ComplexMatrix A = p.term(0, 0), B = p.term(0, 1), C = p.term(1, 0),
                        D = p.term(0, 2), E = p.term(1, 1), F = p.term(2, 0);
    ComplexMatrix a0(3 * n, 3 * n), a1(3 * n, 3 * n), a2(3 * n, 3 * n);
    a0 << A, B, C, Z, -I, Z, Z, Z, -I;
    a2 << Z, D, E, I, Z, Z, Z, Z, Z;
    a1 << Z, Z, F, Z, Z, Z, I, Z, Z;
    c = {a0, a1, a2};
    rec.block_power = {0, 2, 1};
    rec.block_map = "q = [x; " + nm[1] + "*x; " + nm[0] + "*x]";
  }
  rec.linear_size = c[0].rows();
  return out;
}

LinearEquation square_constraint(std::size_t n_slots, std::size_t t_slot,
                                 std::size_t s_slot) {
  LinearEquation eq;
  eq.coefficients.assign(n_slots + 1, ComplexMatrix::Zero(2, 2));
  eq.coefficients[0] = pencil2(0, 0, 0, 1);
  eq.coefficients[t_slot + 1] = pencil2(0, 1, 1, 0);
  eq.coefficients[s_slot + 1] = pencil2(1, 0, 0, 0);
  return eq;
}

QuasiLinearization linearize_quasi(const PolynomialMEP2& p) {
  check_degree(p);
  const Index n = p.size();
  const auto& nm = p.param_names();
  using Role = ParamSlot::Role;

  QuasiLinearization out;
  auto& rec = out.record;
  rec.kind = LinearizationKind::quasi;
  rec.original_size = n;
  rec.linear_size = n;
  rec.block_map = "x unchanged; auxiliary parameters carried by 2x2 constraints";
  auto& slots = rec.slots;
  // Coefficient of each slot in the main equation.
  std::vector<ComplexMatrix> coef;
  const auto square_name = [&](int k) { return nm[k] + "^2"; };
  const std::string product_name = nm[0] + "*" + nm[1];
  const Monomial sq_mono[2] = {{2, 0}, {0, 2}};
  const Monomial lin_mono[2] = {{1, 0}, {0, 1}};

  const bool mixed = p.has_term(1, 1);
  if (mixed && !(p.has_term(1, 0) && p.has_term(0, 1))) {
    // Keep the parameter with a linear term (l) plus the product g = l*o and
    // both squares; o is recovered as g / l. Constraints: sl = l^2 and
    // g^2 = sl * so.
    const int l = p.has_term(0, 1) || !p.has_term(1, 0) ? 1 : 0;
    const int o = 1 - l;
    slots = {{nm[l], Role::primary, l},
             {product_name, Role::product, 0},
             {square_name(l), Role::square, l},
             {square_name(o), Role::square, o}};
    coef = {p.term(lin_mono[l].p, lin_mono[l].q), p.term(1, 1),
            p.term(sq_mono[l].p, sq_mono[l].q),
            p.term(sq_mono[o].p, sq_mono[o].q)};
    rec.dropped_primary = o;
    out.constraints.push_back(square_constraint(4, 0, 2));
    LinearEquation prod;
    prod.coefficients.assign(5, ComplexMatrix::Zero(2, 2));
    prod.coefficients[2] = ComplexMatrix::Identity(2, 2);  // g
    prod.coefficients[3] = pencil2(0, 1, 0, 0);            // sl
    prod.coefficients[4] = pencil2(0, 0, 1, 0);            // so
    out.constraints.push_back(std::move(prod));
  } else {
    slots = {{nm[0], Role::primary, 0}, {nm[1], Role::primary, 1}};
    coef = {p.term(1, 0), p.term(0, 1)};
    int g_slot = -1;
    if (mixed) {
      g_slot = static_cast<int>(slots.size());
      slots.push_back({product_name, Role::product, 0});
      coef.push_back(p.term(1, 1));
    }
    std::vector<std::pair<int, int>> squares;  // (primary, slot)
    for (int k = 0; k < 2; ++k) {
      if (!p.has_term(sq_mono[k].p, sq_mono[k].q)) continue;
      squares.emplace_back(k, static_cast<int>(slots.size()));
      slots.push_back({square_name(k), Role::square, k});
      coef.push_back(p.term(sq_mono[k].p, sq_mono[k].q));
    }
    const std::size_t ns = slots.size();
    if (g_slot >= 0) {
      // [[g, p1], [p2, 1]]: singular exactly when g = p1*p2.
      LinearEquation prod;
      prod.coefficients.assign(ns + 1, ComplexMatrix::Zero(2, 2));
      prod.coefficients[0] = pencil2(0, 0, 0, 1);
      prod.coefficients[1] = pencil2(0, 1, 0, 0);
      prod.coefficients[2] = pencil2(0, 0, 1, 0);
      prod.coefficients[g_slot + 1] = pencil2(1, 0, 0, 0);
      out.constraints.push_back(std::move(prod));
    }
    for (auto [k, s] : squares)
      out.constraints.push_back(square_constraint(ns, k, s));
  }

  out.main.coefficients.push_back(p.term(0, 0));
  for (auto& m : coef) out.main.coefficients.push_back(std::move(m));
  return out;
}

double aux_consistency(const ParamSlot& slot, cplx value, cplx param1,
                       cplx param2) {
  cplx rel;
  switch (slot.role) {
    case ParamSlot::Role::primary:
      rel = slot.of == 0 ? param1 : param2;
      break;
    case ParamSlot::Role::square:
      rel = slot.of == 0 ? param1 * param1 : param2 * param2;
      break;
    case ParamSlot::Role::product:
      rel = param1 * param2;
      break;
  }
  return std::abs(value - rel) /
         (1.0 + std::abs(value) + std::abs(rel));
}

}  // namespace mep
