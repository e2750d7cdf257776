// Command-line front end: flutter, solve, sweep, contour, bench, form.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mep/bench.hpp"
#include "mep/problem_io.hpp"
#include "mep/section_model.hpp"
#include "mep/solver.hpp"

namespace {

enum Exit {
  kOk = 0,
  kGeneric = 1,
  kUsage = 2,
  kFile = 3,
  kValidation = 4,
  kNumerical = 5,
  kDimension = 6,
};

struct Common {
  std::string variant = "quasi";
  std::optional<double> tol;
  double residual_tol = 1e-6;
  bool trace = false;
  std::string output;
  std::string params;
  std::string method = "leibniz";
};

mep::SolveOptions solve_options(const Common& c) {
  mep::SolveOptions o;
  o.rank_tol = c.tol;
  o.residual_tol = c.residual_tol;
  o.method = mep::determinant_method_from_string(c.method);
  return o;
}

mep::SectionParams section_params(const Common& c) {
  return c.params.empty() ? mep::SectionParams::table1()
                          : mep::load_section_params(c.params);
}

// Writes to --output if given, otherwise to stdout.
void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw mep::ParseError("cannot write " + c.output);
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_tuples(const mep::SolveReport& rep,
                  const std::vector<mep::EigenTuple>& tuples) {
  std::printf("%-4s %24s %24s %12s %s\n", "#", rep.param_names.at(0).c_str(),
              rep.param_names.at(1).c_str(), "residual", "flags");
  int k = 0;
  for (const auto& t : tuples) {
    std::string flags = t.is_physical ? "physical" : (t.is_real ? "real" : "");
    char a[64], b[64];
    std::snprintf(a, sizeof a, "%.6f%+.2ei", t.params[0].real(), t.params[0].imag());
    std::snprintf(b, sizeof b, "%.6f%+.2ei", t.params[1].real(), t.params[1].imag());
    std::printf("%-4d %24s %24s %12.2e %s\n", k++, a, b, t.residual, flags.c_str());
  }
}

void print_trace(const mep::SolveReport& rep) {
  std::cerr << mep::to_json(rep.compression).dump(2) << "\n";
}

int cmd_flutter(const Common& c, const std::string& form_name) {
  const mep::SectionForm form = mep::section_form_from_string(form_name);
  mep::SectionParams prm = section_params(c);
  if (form == mep::SectionForm::tau_lambda_undamped) {
    prm.zeta_h = 0.0;
    prm.zeta_theta = 0.0;
  }
  const mep::SectionMatrices m = mep::build_matrices(prm);
  const mep::PolynomialMEP2 p = mep::make_form(m, form);
  const mep::SolveReport rep =
      mep::solve_direct(p, mep::variant_from_string(c.variant), solve_options(c));
  if (c.trace) print_trace(rep);
  const mep::FlutterSummary s = mep::summarize_flutter(rep, form, m);

  std::printf("form %s, variant %s, determinant size %lld -> %lld\n",
              mep::to_string(form).c_str(), c.variant.c_str(),
              static_cast<long long>(rep.size_uncompressed),
              static_cast<long long>(rep.size_compressed));
  print_tuples(rep, mep::filter_tuples(rep.tuples, mep::FilterMode::real));
  const std::string& an = rep.param_names[0];
  const std::string& fn = rep.param_names[1];
  if (s.found) {
    std::printf("flutter: %s_F = %.4f, %s_F = %.4f", an.c_str(), s.airspeed,
                fn.c_str(), s.frequency);
    if (fn != "chi") std::printf(", chi_F = %.4f", s.chi);
    std::printf(" (rad/s)\n");
  } else {
    std::printf("flutter: no physical flutter point\n");
  }
  for (double y : s.divergence) std::printf("divergence: Y_D = %.4f\n", y);
  for (const auto& d : rep.diagnostics) std::fprintf(stderr, "note: %s\n", d.c_str());

  if (!c.output.empty()) {
    mep::SolveReport sorted = rep;
    sorted.tuples = mep::filter_tuples(rep.tuples, mep::FilterMode::all);
    nlohmann::json j = mep::to_json(sorted);
    j["flutter"] = mep::to_json(s);
    j["section_params"] = mep::to_json(prm);
    emit(c, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_solve(const Common& c, const std::string& file, const std::string& filter) {
  const mep::Problem prob = mep::load_problem(file);
  const mep::SolveOptions opts = solve_options(c);
  mep::SolveReport rep;
  if (const auto* poly = std::get_if<mep::PolynomialMEP2>(&prob))
    rep = mep::solve_direct(*poly, mep::variant_from_string(c.variant), opts);
  else
    rep = mep::solve_linear(std::get<mep::LinearMEP>(prob), opts);
  if (c.trace) print_trace(rep);
  const auto tuples =
      mep::filter_tuples(rep.tuples, mep::filter_mode_from_string(filter));
  std::printf("determinant size %lld -> %lld, %zu tuple(s)\n",
              static_cast<long long>(rep.size_uncompressed),
              static_cast<long long>(rep.size_compressed), tuples.size());
  print_tuples(rep, tuples);
  for (const auto& d : rep.diagnostics) std::fprintf(stderr, "note: %s\n", d.c_str());
  if (!c.output.empty()) {
    mep::SolveReport filtered = rep;
    filtered.tuples = tuples;
    emit(c, mep::to_json(filtered).dump(2) + "\n");
  }
  return kOk;
}

int cmd_sweep(const Common& c, double lo, double hi, int steps, bool undamped) {
  if (steps < 1) throw mep::ArgumentError("--steps must be >= 1");
  mep::SectionParams prm = section_params(c);
  if (undamped) {
    prm.zeta_h = 0.0;
    prm.zeta_theta = 0.0;
  }
  std::vector<double> taus(steps);
  for (int i = 0; i < steps; ++i)
    taus[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  const mep::SweepResult res = mep::modal_sweep(mep::build_matrices(prm), taus);
  std::string csv = "tau,mode,re_chi,im_chi\n";
  for (const auto& r : res.rows)
    csv += fmt(r.tau) + "," + std::to_string(r.mode) + "," + fmt(r.chi.real()) +
           "," + fmt(r.chi.imag()) + "\n";
  emit(c, csv);
  auto& log = c.output.empty() ? std::cerr : std::cout;
  for (const auto& x : res.crossings)
    log << "crossing: mode " << x.mode << " Im(chi) changes sign at tau ~ "
        << x.tau << " (Re chi ~ " << x.re_chi << ")\n";
  return kOk;
}

int cmd_contour(const Common& c, const std::string& form_name,
                const std::string& problem_file, std::vector<double> r1,
                std::vector<double> r2, int resolution) {
  std::optional<mep::PolynomialMEP2> p;
  if (!problem_file.empty()) {
    mep::Problem prob = mep::load_problem(problem_file);
    if (!std::holds_alternative<mep::PolynomialMEP2>(prob))
      throw mep::ArgumentError("contour needs a poly2 problem file");
    p.emplace(std::get<mep::PolynomialMEP2>(prob));
  } else {
    const mep::SectionForm form = mep::section_form_from_string(form_name);
    mep::SectionParams prm = section_params(c);
    if (form == mep::SectionForm::tau_lambda_undamped) {
      prm.zeta_h = 0.0;
      prm.zeta_theta = 0.0;
    }
    p.emplace(mep::make_form(mep::build_matrices(prm), form));
  }
  const mep::ContourGrid g =
      mep::contour_grid(*p, {r1.at(0), r1.at(1)}, {r2.at(0), r2.at(1)}, resolution);
  std::string csv = "p1,p2,re_d,im_d\n";
  for (std::size_t i = 0; i < g.p1.size(); ++i)
    for (std::size_t j = 0; j < g.p2.size(); ++j) {
      const mep::cplx d = g.at(i, j);
      csv += fmt(g.p1[i]) + "," + fmt(g.p2[j]) + "," + fmt(d.real()) + "," +
             fmt(d.imag()) + "\n";
    }
  emit(c, csv);
  return kOk;
}

int cmd_bench(const Common& c, std::vector<int> sizes, std::vector<int> trials,
              std::uint64_t seed, bool parallel, bool no_warmup) {
  mep::BenchConfig cfg;
  cfg.sizes = std::move(sizes);
  if (trials.empty()) {
    const mep::BenchConfig def;
    for (int n : cfg.sizes) {
      int t = 1;
      for (std::size_t k = 0; k < def.sizes.size(); ++k)
        if (def.sizes[k] == n) t = def.trials[k];
      trials.push_back(t);
    }
  }
  if (trials.size() == 1 && cfg.sizes.size() > 1)
    trials.assign(cfg.sizes.size(), trials[0]);
  cfg.trials = std::move(trials);
  cfg.seed = seed;
  cfg.variant = mep::variant_from_string(c.variant);
  cfg.method = mep::determinant_method_from_string(c.method);
  cfg.parallel_trials = parallel;
  cfg.warm_up = !no_warmup;
  const mep::BenchResult res = mep::run_bench(cfg);
  std::ostringstream csv;
  mep::write_bench_csv(res.records, csv);
  emit(c, csv.str());
  auto& log = c.output.empty() ? std::cerr : std::cout;
  for (const auto& n : res.notices) log << "notice: " << n << "\n";
  for (std::size_t i = 0; i < res.sizes.size(); ++i)
    log << "n = " << res.sizes[i] << ": mean gep_solve " << res.mean_gep[i] << " s\n";
  if (res.sizes.size() >= 2)
    log << "gep_solve log-log slope " << res.gep_fit.slope << " (R^2 "
        << res.gep_fit.r2 << ")\n";
  log << "mean compression fraction " << res.compression_fraction << "\n";
  if (parallel) log << "note: trials ran concurrently; timings are not comparable\n";
  return kOk;
}

int cmd_form(const Common& c, const std::string& form_name) {
  const mep::SectionForm form = mep::section_form_from_string(form_name);
  mep::SectionParams prm = section_params(c);
  if (form == mep::SectionForm::tau_lambda_undamped) {
    prm.zeta_h = 0.0;
    prm.zeta_theta = 0.0;
  }
  emit(c, mep::dump_problem(mep::make_form(mep::build_matrices(prm), form)) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct multiparameter eigenvalue solver for flutter problems"};
  app.require_subcommand(1);
  Common c;
  const std::vector<std::string> variants{"strict", "quasi"};
  const std::vector<std::string> forms{"undamped", "tau-lambda", "y-chi"};
  const std::vector<std::string> methods{"leibniz", "laplace", "two_param"};

  const auto add_solver_flags = [&](CLI::App* s) {
    s->add_option("--variant", c.variant, "strict|quasi")
        ->check(CLI::IsMember(variants));
    s->add_option("--tol", c.tol, "relative rank tolerance for compression");
    s->add_option("--residual-tol", c.residual_tol, "maximum tuple residual");
    s->add_option("--method", c.method, "operator determinant construction")
        ->check(CLI::IsMember(methods));
    s->add_flag("--trace", c.trace, "print the compression stage log to stderr");
  };

  std::string form = "undamped";
  auto* flutter = app.add_subcommand("flutter", "flutter points of the section model");
  flutter->add_option("--form", form, "undamped|tau-lambda|y-chi")
      ->check(CLI::IsMember(forms));
  flutter->add_option("--params", c.params, "section parameter JSON")
      ->check(CLI::ExistingFile);
  flutter->add_option("--output", c.output, "write the JSON report here");
  add_solver_flags(flutter);

  std::string problem, filter = "all";
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("problem", problem, "problem JSON")->required();
  solve->add_option("--filter", filter, "all|real|physical")
      ->check(CLI::IsMember({"all", "real", "physical"}));
  solve->add_option("--output", c.output, "write the JSON report here");
  add_solver_flags(solve);

  double tau_lo = 0.0, tau_hi = 2.0;
  int steps = 100;
  bool undamped = false;
  auto* sweep = app.add_subcommand("sweep", "modal frequencies over airspeed (CSV)");
  sweep->add_option("--params", c.params, "section parameter JSON")
      ->check(CLI::ExistingFile);
  sweep->add_option("--tau-min", tau_lo);
  sweep->add_option("--tau-max", tau_hi);
  sweep->add_option("--steps", steps);
  sweep->add_flag("--undamped", undamped, "zero both damping ratios");
  sweep->add_option("--output", c.output, "CSV path (default stdout)");

  std::vector<double> r1{-2.0, 2.0}, r2{0.0, 4.0};
  int resolution = 101;
  std::string contour_problem;
  auto* contour = app.add_subcommand("contour", "determinant over a grid (CSV)");
  contour->add_option("--form", form, "undamped|tau-lambda|y-chi")
      ->check(CLI::IsMember(forms));
  contour->add_option("--problem", contour_problem, "poly2 problem file instead of --form")
      ->check(CLI::ExistingFile);
  contour->add_option("--params", c.params, "section parameter JSON")
      ->check(CLI::ExistingFile);
  contour->add_option("--p1-range", r1)->expected(2);
  contour->add_option("--p2-range", r2)->expected(2);
  contour->add_option("--resolution", resolution)->check(CLI::Range(2, 100000));
  contour->add_option("--output", c.output, "CSV path (default stdout)");

  std::vector<int> sizes{2, 4, 8, 16, 32}, trials;
  std::uint64_t seed = 0;
  bool parallel = false, no_warmup = false;
  auto* bench = app.add_subcommand("bench", "scaling benchmark on random problems (CSV)");
  bench->add_option("--sizes", sizes)->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--trials", trials, "per size, or one value for all")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed)->required();
  bench->add_option("--variant", c.variant, "strict|quasi")->check(CLI::IsMember(variants));
  bench->add_option("--method", c.method)->check(CLI::IsMember(methods));
  bench->add_flag("--parallel-trials", parallel);
  bench->add_flag("--no-warmup", no_warmup);
  bench->add_option("--output", c.output, "CSV path (default stdout)");

  auto* formcmd = app.add_subcommand("form", "write a section-model problem file");
  formcmd->add_option("--form", form, "undamped|tau-lambda|y-chi")
      ->check(CLI::IsMember(forms));
  formcmd->add_option("--params", c.params, "section parameter JSON")
      ->check(CLI::ExistingFile);
  formcmd->add_option("--output", c.output, "problem path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*flutter) return cmd_flutter(c, form);
    if (*solve) return cmd_solve(c, problem, filter);
    if (*sweep) return cmd_sweep(c, tau_lo, tau_hi, steps, undamped);
    if (*contour) return cmd_contour(c, form, contour_problem, r1, r2, resolution);
    if (*bench) return cmd_bench(c, sizes, trials, seed, parallel, no_warmup);
    if (*formcmd) return cmd_form(c, form);
  } catch (const mep::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFile;
  } catch (const mep::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const mep::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const mep::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const mep::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeneric;
  }
  return kGeneric;
}
