#include "mep/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace mep {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(cplx z) {
  std::ostringstream s;
  s.precision(10);
  s << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

bool close_tuples(const EigenTuple& a, const EigenTuple& b, double tol) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (std::abs(a.params[i] - b.params[i]) > tol * (1.0 + std::abs(a.params[i])))
      return false;
  return true;
}

// Keeps the minimal-residual representative of each group of near-equal tuples.
std::vector<EigenTuple> dedup(std::vector<EigenTuple> in, double tol) {
  std::stable_sort(in.begin(), in.end(), [](const auto& a, const auto& b) {
    return a.residual < b.residual;
  });
  std::vector<EigenTuple> out;
  for (auto& t : in) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& o) {
      return close_tuples(o, t, tol);
    });
    if (!dup) out.push_back(std::move(t));
  }
  return out;
}

// Auxiliary quasi parameters, from their defining relations.
void add_aux(EigenTuple& t, const LinearizationRecord& record) {
  if (record.kind != LinearizationKind::quasi) return;
  const cplx p1 = t.params[0], p2 = t.params[1];
  for (const auto& s : record.slots) {
    if (s.role == ParamSlot::Role::primary) continue;
    const cplx v = s.role == ParamSlot::Role::square
                       ? (s.of == 0 ? p1 * p1 : p2 * p2)
                       : p1 * p2;
    t.aux.push_back({s.name, v, aux_consistency(s, v, p1, p2)});
  }
}

EigenTuple make_eigen_tuple(const PolynomialMEP2& p, cplx p1, cplx p2,
                            const LinearizationRecord* record,
                            const SolveOptions& opts) {
  EigenTuple t;
  t.params = {p1, p2};
  ResidualDetail rd = residual_detail(p, p1, p2);
  t.residual = rd.value;
  t.vectors = std::move(rd.vectors);
  if (record) add_aux(t, *record);
  classify(t, p.airspeed_param(), opts.real_tol);
  return t;
}

// Finite eigenvalues of C0 + s C1 + s^2 C2 (degree taken from the data).
std::vector<cplx> polynomial_roots(const ComplexMatrix& c0,
                                   const ComplexMatrix& c1,
                                   const ComplexMatrix& c2) {
  const Index n = c0.rows();
  GepOptions go;
  go.right_vectors = false;
  GepSolution sol;
  if (!c2.isZero(0.0)) {
    ComplexMatrix a = ComplexMatrix::Zero(2 * n, 2 * n);
    ComplexMatrix b = ComplexMatrix::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n).setIdentity();
    a.bottomLeftCorner(n, n) = -c0;
    a.bottomRightCorner(n, n) = -c1;
    b.topLeftCorner(n, n).setIdentity();
    b.bottomRightCorner(n, n) = c2;
    sol = solve_gep(a, b, go);
  } else if (!c1.isZero(0.0)) {
    sol = solve_gep(-c0, c1, go);
  } else {
    return {};
  }
  std::vector<cplx> out;
  for (std::size_t i = 0; i < sol.size(); ++i)
    if (sol.finite_mask[i]) out.push_back(sol.value(i));
  return out;
}

struct Clusters {
  std::vector<std::vector<std::size_t>> members;
  std::vector<cplx> mean;
};

Clusters cluster_values(const std::vector<cplx>& v, double tol) {
  Clusters c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool placed = false;
    for (std::size_t k = 0; k < c.members.size() && !placed; ++k) {
      const cplx ref = v[c.members[k].front()];
      if (std::abs(v[i] - ref) <= tol * (1.0 + std::abs(ref))) {
        c.members[k].push_back(i);
        placed = true;
      }
    }
    if (!placed) c.members.push_back({i});
  }
  for (const auto& m : c.members) {
    cplx s = 0.0;
    for (auto i : m) s += v[i];
    c.mean.push_back(s / static_cast<double>(m.size()));
  }
  return c;
}

}  // namespace

std::string to_string(Variant v) {
  return v == Variant::strict ? "strict" : "quasi";
}

Variant variant_from_string(const std::string& s) {
  if (s == "strict") return Variant::strict;
  if (s == "quasi") return Variant::quasi;
  throw ArgumentError("unknown variant '" + s + "' (expected strict|quasi)");
}

FilterMode filter_mode_from_string(const std::string& s) {
  if (s == "all") return FilterMode::all;
  if (s == "real") return FilterMode::real;
  if (s == "physical") return FilterMode::physical;
  throw ArgumentError("unknown filter '" + s + "' (expected all|real|physical)");
}

std::vector<EigenTuple> back_substitute(const PolynomialMEP2& p, int fixed,
                                        cplx value, std::size_t max_count,
                                        const SolveOptions& opts) {
  if (fixed != 0 && fixed != 1)
    throw ArgumentError("back_substitute: fixed must be 0 or 1");
  const Index n = p.size();
  std::array<ComplexMatrix, 3> c, cc;
  for (auto& m : c) m = ComplexMatrix::Zero(n, n);
  for (auto& m : cc) m = ComplexMatrix::Zero(n, n);
  for (const auto& [mono, a] : p.terms()) {
    const int fp = fixed == 0 ? mono.p : mono.q;
    const int op = fixed == 0 ? mono.q : mono.p;
    if (a.isZero(0.0)) continue;
    if (op > 2)
      throw UnsupportedDegreeError("back_substitute: degree > 2 in the free parameter");
    const cplx f = std::pow(value, fp);
    c[op] += f * a;
    cc[op] += f * a.conjugate();
  }
  const std::vector<cplx> cand1 = polynomial_roots(c[0], c[1], c[2]);
  const std::vector<cplx> cand2 = polynomial_roots(cc[0], cc[1], cc[2]);

  // A solution is a root of both equations. Try candidates in order of
  // their distance to the nearest root of the other equation, so that the
  // residual (an SVD each) is evaluated only for the likely ones.
  std::vector<std::pair<double, cplx>> order;
  for (const auto* pair : {&cand1, &cand2}) {
    const auto& own = *pair;
    const auto& other = pair == &cand1 ? cand2 : cand1;
    for (cplx s : own) {
      double best = INFINITY;
      for (cplx o : other) best = std::min(best, std::abs(s - o));
      order.emplace_back(best / (1.0 + std::abs(s)), s);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<EigenTuple> good;
  for (const auto& [dist, s] : order) {
    if (good.size() >= max_count) break;
    const cplx p1 = fixed == 0 ? value : s;
    const cplx p2 = fixed == 0 ? s : value;
    const bool dup = std::any_of(good.begin(), good.end(), [&](const auto& g) {
      return std::abs(g.params[1 - fixed] - s) <=
             opts.cluster_tol * (1.0 + std::abs(s));
    });
    if (dup) continue;
    EigenTuple t = make_eigen_tuple(p, p1, p2, nullptr, opts);
    if (t.residual <= opts.residual_tol) good.push_back(std::move(t));
  }
  std::stable_sort(good.begin(), good.end(), [](const auto& a, const auto& b) {
    return a.residual < b.residual;
  });
  return good;
}

RecoveryResult recover_secondary(const OperatorDeterminants& pencils,
                                 const GepSolution& primary,
                                 const LinearizationRecord& record,
                                 const PolynomialMEP2& p,
                                 const SolveOptions& opts) {
  RecoveryResult out;
  if (pencils.deltas.size() < 3)
    throw ArgumentError("recover_secondary: needs Delta_0..Delta_2");
  const ComplexMatrix& d0 = pencils.deltas[0];
  const ComplexMatrix& d2 = pencils.deltas[2];
  const int first = record.first_primary();
  const bool have_right = primary.right_vectors.cols() > 0;
  const bool have_left = primary.left_vectors.has_value();

  std::vector<std::size_t> finite;
  std::vector<cplx> values;
  for (std::size_t i = 0; i < primary.size(); ++i) {
    if (!primary.finite_mask[i]) continue;
    finite.push_back(i);
    values.push_back(primary.value(i));
  }
  const Clusters cl = cluster_values(values, opts.cluster_tol);

  std::vector<EigenTuple> tuples;
  for (std::size_t k = 0; k < cl.members.size(); ++k) {
    const auto& mem = cl.members[k];
    const cplx v = cl.mean[k];
    if (mem.size() == 1 && have_right && opts.recovery == Recovery::automatic) {
      const std::size_t col = finite[mem[0]];
      const ComplexVector z = primary.right_vectors.col(col);
      const ComplexVector d0z = d0 * z;
      const ComplexVector w = have_left ? ComplexVector(primary.left_vectors->col(col)) : d0z;
      const cplx den = w.dot(d0z);
      if (std::abs(den) > 1e-14 * d0z.norm() * w.norm()) {
        const cplx s2 = w.dot(d2 * z) / den;
        std::optional<std::pair<cplx, cplx>> pr;
        const ParamSlot& second = record.slots.at(1);
        if (second.role == ParamSlot::Role::primary) {
          std::array<cplx, 2> prm;
          prm[first] = v;
          prm[second.of] = s2;
          pr = {prm[0], prm[1]};
        } else if (std::abs(v) > 1e-6) {
          // slot 2 holds the product of both parameters
          std::array<cplx, 2> prm;
          prm[first] = v;
          prm[1 - first] = s2 / v;
          pr = {prm[0], prm[1]};
        }
        if (pr) {
          EigenTuple t = make_eigen_tuple(p, pr->first, pr->second, &record, opts);
          if (t.residual <= opts.residual_tol) {
            tuples.push_back(std::move(t));
            continue;
          }
          out.diagnostics.push_back("Rayleigh recovery at " + fmt(v) +
                                    " failed the residual test; re-solving");
        }
      }
    }
    std::vector<EigenTuple> bs = back_substitute(p, first, v, mem.size(), opts);
    if (bs.size() < mem.size()) {
      std::ostringstream msg;
      msg << "eigenvalue " << fmt(v) << " (multiplicity " << mem.size()
          << "): back-substitution found " << bs.size()
          << " solution(s) within residual tolerance";
      out.diagnostics.push_back(msg.str());
    }
    for (auto& t : bs) {
      add_aux(t, record);
      tuples.push_back(std::move(t));
    }
  }
  out.tuples = dedup(std::move(tuples), opts.dedup_tol);
  return out;
}

SolveReport solve_direct(const PolynomialMEP2& p, Variant variant,
                         const SolveOptions& opts) {
  SolveReport rep;
  rep.variant = variant;
  rep.param_names = {p.param_names()[0], p.param_names()[1]};
  rep.airspeed_param = p.airspeed_param();

  Stopwatch sw;
  std::optional<LinearMEP> sys;
  if (variant == Variant::strict) {
    StrictLinearization lin = linearize_strict(p);
    rep.record = lin.record;
    sys.emplace(lin.augmented(p.param_names()));
  } else {
    QuasiLinearization lin = linearize_quasi(p);
    rep.record = lin.record;
    sys.emplace(lin.augmented());
  }
  DeterminantMethod method = opts.method;
  if (method == DeterminantMethod::two_param && sys->n_params() != 2) {
    method = DeterminantMethod::leibniz;
    rep.diagnostics.push_back(
        "two_param determinants need two equations; using leibniz");
  }
  OperatorDeterminants d = build_deltas(*sys, method, opts.max_side, 2);
  rep.size_uncompressed = d.size;
  rep.timings.setup = sw.lap();

  rep.compression = compress(d, opts.rank_tol);
  if (sys->n_params() > 2 && !rep.compression.stage_log.empty())
    rep.compression.heuristic_n_gt_2 = true;
  rep.size_compressed = rep.compression.compressed_size;
  if (rep.compression.ambiguous)
    rep.diagnostics.push_back(
        "rank decision ambiguous: a singular value lies near the threshold; "
        "the cut was placed at the largest gap");
  d = OperatorDeterminants{};
  rep.timings.compression = sw.lap();

  const OperatorDeterminants& cd = rep.compression.compressed;
  if (rep.size_compressed == 0) {
    rep.diagnostics.push_back("empty regular part: no finite solutions");
    rep.compression.compressed.deltas.clear();
    return rep;
  }
  GepOptions go;
  go.right_vectors = opts.eigenvectors && opts.recovery == Recovery::automatic;
  go.left_vectors = go.right_vectors && opts.left_vectors;
  const GepSolution sol = solve_gep(cd.deltas[1], cd.deltas[0], go);
  for (std::size_t i = 0; i < sol.size(); ++i)
    if (!sol.finite_mask[i]) rep.infinite.push_back(sol.eigenvalues[i]);
  rep.timings.gep_solve = sw.lap();

  RecoveryResult rr = recover_secondary(cd, sol, rep.record, p, opts);
  rep.tuples = std::move(rr.tuples);
  rep.diagnostics.insert(rep.diagnostics.end(), rr.diagnostics.begin(),
                         rr.diagnostics.end());
  rep.timings.secondary_solve = sw.lap();
  rep.compression.compressed.deltas.clear();
  return rep;
}

SolveReport solve_linear(const LinearMEP& sys, const SolveOptions& opts) {
  SolveReport rep;
  rep.param_names = sys.param_names();
  const std::size_t n = sys.n_params();
  if (n < 2) throw ArgumentError("solve_linear: needs at least two parameters");

  Stopwatch sw;
  DeterminantMethod method = opts.method;
  if (method == DeterminantMethod::two_param && n != 2)
    method = DeterminantMethod::leibniz;
  OperatorDeterminants d = build_deltas(sys, method, opts.max_side);
  rep.size_uncompressed = d.size;
  rep.timings.setup = sw.lap();

  rep.compression = compress(d, opts.rank_tol);
  rep.size_compressed = rep.compression.compressed_size;
  if (!rep.compression.stage_log.empty() && n > 2) {
    throw SingularStructureError(
        "solve_linear: a singular problem with more than two parameters "
        "cannot recover parameters beyond the second",
        rep.compression.stage_log);
  }
  rep.timings.compression = sw.lap();
  const OperatorDeterminants& cd = rep.compression.compressed;
  if (rep.size_compressed == 0) {
    rep.diagnostics.push_back("empty regular part: no finite solutions");
    return rep;
  }

  GepOptions go;
  go.left_vectors = opts.left_vectors;
  const GepSolution sol = solve_gep(cd.deltas[1], cd.deltas[0], go);
  for (std::size_t i = 0; i < sol.size(); ++i)
    if (!sol.finite_mask[i]) rep.infinite.push_back(sol.eigenvalues[i]);
  rep.timings.gep_solve = sw.lap();

  std::vector<cplx> values;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < sol.size(); ++i)
    if (sol.finite_mask[i]) {
      values.push_back(sol.value(i));
      cols.push_back(i);
    }
  const Clusters cl = cluster_values(values, opts.cluster_tol);
  const auto finish = [&](std::vector<cplx> prm) {
    EigenTuple t;
    t.params = std::move(prm);
    ResidualDetail rd = residual_detail(sys, t.params);
    t.residual = rd.value;
    t.vectors = std::move(rd.vectors);
    classify(t, 0, opts.real_tol);
    return t;
  };

  std::vector<EigenTuple> tuples;
  for (std::size_t k = 0; k < cl.members.size(); ++k) {
    const auto& mem = cl.members[k];
    if (mem.size() > 1 && n == 2) {
      // Fix eta_1 and solve each equation's pencil in eta_2.
      const cplx v = cl.mean[k];
      std::vector<EigenTuple> cand;
      GepOptions vo;
      vo.right_vectors = false;
      for (const auto& eq : sys.equations()) {
        const ComplexMatrix a0 = eq.coefficients[0] + v * eq.coefficients[1];
        const GepSolution s = solve_gep(-a0, eq.coefficients[2], vo);
        for (std::size_t i = 0; i < s.size(); ++i)
          if (s.finite_mask[i]) {
            EigenTuple t = finish({v, s.value(i)});
            if (t.residual <= opts.residual_tol) cand.push_back(std::move(t));
          }
      }
      cand = dedup(std::move(cand), opts.cluster_tol);
      if (cand.size() > mem.size()) cand.resize(mem.size());
      if (cand.size() < mem.size())
        rep.diagnostics.push_back("eigenvalue " + fmt(v) +
                                  ": back-substitution found fewer solutions "
                                  "than its multiplicity");
      for (auto& t : cand) tuples.push_back(std::move(t));
      continue;
    }
    for (auto m : mem) {
      const std::size_t col = cols[m];
      const ComplexVector z = sol.right_vectors.col(col);
      const ComplexVector d0z = cd.deltas[0] * z;
      const ComplexVector w =
          sol.left_vectors ? ComplexVector(sol.left_vectors->col(col)) : d0z;
      const cplx den = w.dot(d0z);
      std::vector<cplx> prm{values[m]};
      for (std::size_t j = 2; j < cd.deltas.size(); ++j)
        prm.push_back(w.dot(cd.deltas[j] * z) / den);
      EigenTuple t = finish(std::move(prm));
      if (t.residual <= opts.residual_tol)
        tuples.push_back(std::move(t));
      else
        rep.diagnostics.push_back("eigenvalue " + fmt(values[m]) +
                                  " dropped: residual " +
                                  std::to_string(t.residual));
    }
  }
  rep.tuples = dedup(std::move(tuples), opts.dedup_tol);
  rep.timings.secondary_solve = sw.lap();
  rep.compression.compressed.deltas.clear();
  return rep;
}

std::vector<EigenTuple> filter_tuples(const std::vector<EigenTuple>& tuples,
                                      FilterMode mode) {
  std::vector<EigenTuple> out;
  for (const auto& t : tuples) {
    if (mode == FilterMode::real && !t.is_real) continue;
    if (mode == FilterMode::physical && !t.is_physical) continue;
    out.push_back(t);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.params.at(0).real() < b.params.at(0).real();
  });
  return out;
}

nlohmann::json to_json(const EigenTuple& t,
                       const std::vector<std::string>& names) {
  nlohmann::json params = nlohmann::json::object();
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    const std::string key = i < names.size() ? names[i] : "p" + std::to_string(i + 1);
    params[key] = {t.params[i].real(), t.params[i].imag()};
  }
  nlohmann::json aux = nlohmann::json::array();
  for (const auto& a : t.aux)
    aux.push_back({{"name", a.name},
                   {"value", {a.value.real(), a.value.imag()}},
                   {"consistency", a.consistency}});
  return {{"params", params},
          {"residual", t.residual},
          {"is_real", t.is_real},
          {"is_physical", t.is_physical},
          {"aux", aux}};
}

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& t : r.tuples) tuples.push_back(to_json(t, r.param_names));
  nlohmann::json inf = nlohmann::json::array();
  for (const auto& e : r.infinite)
    inf.push_back({{"alpha", {e.alpha.real(), e.alpha.imag()}},
                   {"beta", {e.beta.real(), e.beta.imag()}}});
  return {{"variant", to_string(r.variant)},
          {"param_names", r.param_names},
          {"sizes",
           {{"uncompressed", r.size_uncompressed},
            {"compressed", r.size_compressed}}},
          {"timings",
           {{"setup", r.timings.setup},
            {"compression", r.timings.compression},
            {"gep_solve", r.timings.gep_solve},
            {"secondary_solve", r.timings.secondary_solve}}},
          {"tuples", tuples},
          {"infinite", inf},
          {"compression", to_json(r.compression)},
          {"linearization",
           {{"kind", to_string(r.record.kind)},
            {"block_map", r.record.block_map},
            {"linear_size", r.record.linear_size}}},
          {"diagnostics", r.diagnostics}};
}

}  // namespace mep
