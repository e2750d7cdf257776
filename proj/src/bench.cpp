#include "mep/bench.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <random>

namespace mep {

namespace {

ComplexMatrix gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

BenchRecord run_one(const BenchConfig& cfg, int n, int trial) {
  const PolynomialMEP2 p = random_quadratic_problem(n, cfg.seed, trial);
  SolveOptions opts;
  opts.eigenvectors = false;
  opts.method = cfg.method;
  opts.max_side = cfg.max_side;
  const SolveReport rep = solve_direct(p, cfg.variant, opts);
  BenchRecord r;
  r.n = n;
  r.trial = trial;
  r.variant = cfg.variant;
  r.timings = rep.timings;
  r.size_uncompressed = rep.size_uncompressed;
  r.size_compressed = rep.size_compressed;
  r.tuples = rep.tuples.size();
  r.comparable = !cfg.parallel_trials;
  return r;
}

}  // namespace

PolynomialMEP2 random_quadratic_problem(int n, std::uint64_t seed, int trial) {
  if (n < 1) throw ArgumentError("random_quadratic_problem: n must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::map<Monomial, ComplexMatrix> t;
  for (Monomial m : {Monomial{0, 0}, Monomial{1, 0}, Monomial{2, 0},
                     Monomial{0, 1}})
    t[m] = gaussian(n, rng);
  return PolynomialMEP2(n, std::move(t), {"p1", "p2"}, 0);
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ArgumentError("fit_loglog: need at least two matching points");
  const std::size_t k = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw ArgumentError("fit_loglog: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  LogLogFit f;
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw ArgumentError("fit_loglog: x values are all equal");
  f.slope = (k * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / k;
  const double mean = sy / k;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = ly[i] - (f.slope * lx[i] + f.intercept);
    ss_res += e * e;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.sizes.size() != cfg.trials.size())
    throw ArgumentError("run_bench: sizes and trials must have equal length");
  BenchResult res;
  if (cfg.warm_up && !cfg.sizes.empty()) {
    try {
      run_one(cfg, cfg.sizes.front(), -1);
    } catch (const DimensionError&) {
    }
  }
  double frac_sum = 0.0;
  std::size_t frac_count = 0;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    const int n = cfg.sizes[s];
    std::vector<BenchRecord> recs;
    try {
      if (cfg.parallel_trials) {
        std::vector<std::future<BenchRecord>> fut;
        for (int t = 0; t < cfg.trials[s]; ++t)
          fut.push_back(std::async(std::launch::async, run_one, std::cref(cfg), n, t));
        for (auto& f : fut) recs.push_back(f.get());
      } else {
        for (int t = 0; t < cfg.trials[s]; ++t) recs.push_back(run_one(cfg, n, t));
      }
    } catch (const DimensionError& e) {
      res.notices.push_back("n = " + std::to_string(n) + " skipped: " + e.what());
      continue;
    }
    double gep = 0.0;
    for (const auto& r : recs) {
      gep += r.timings.gep_solve;
      if (r.timings.total() > 0) {
        frac_sum += r.timings.compression / r.timings.total();
        ++frac_count;
      }
    }
    if (!recs.empty()) {
      res.sizes.push_back(n);
      res.mean_gep.push_back(gep / recs.size());
    }
    res.records.insert(res.records.end(), recs.begin(), recs.end());
  }
  if (frac_count) res.compression_fraction = frac_sum / frac_count;
  if (res.sizes.size() >= 2) {
    std::vector<double> xs(res.sizes.begin(), res.sizes.end());
    std::vector<double> ys = res.mean_gep;
    for (double& y : ys) y = std::max(y, 1e-9);
    res.gep_fit = fit_loglog(xs, ys);
  }
  return res;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "n,trial,variant,setup_s,compress_s,gep_s,secondary_s,size_unc,size_cmp\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n",
                  r.n, r.trial, to_string(r.variant).c_str(), r.timings.setup,
                  r.timings.compression, r.timings.gep_solve,
                  r.timings.secondary_solve,
                  static_cast<long long>(r.size_uncompressed),
                  static_cast<long long>(r.size_compressed));
    out << buf;
  }
}

}  // namespace mep
