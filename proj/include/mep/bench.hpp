#pragma once

// Scaling benchmark on random conjugate-augmented quadratic problems.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mep/solver.hpp"

namespace mep {

struct BenchConfig {
  std::vector<int> sizes{2, 4, 8, 16, 32};
  std::vector<int> trials{50, 10, 5, 1, 1};  // per size
  std::uint64_t seed = 0;
  Variant variant = Variant::quasi;
  DeterminantMethod method = DeterminantMethod::leibniz;
  bool warm_up = true;
  bool parallel_trials = false;  // timings then marked non-comparable
  Index max_side = kDefaultMaxSide;
};

struct BenchRecord {
  int n = 0;
  int trial = 0;
  Variant variant = Variant::quasi;
  PhaseTimings timings;
  Index size_uncompressed = 0;
  Index size_compressed = 0;
  std::size_t tuples = 0;
  bool comparable = true;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<int> sizes;           // sizes actually run
  std::vector<double> mean_gep;     // mean gep_solve time per size
  LogLogFit gep_fit;
  double compression_fraction = 0.0;  // mean compression / total
  std::vector<std::string> notices;
};

/// Terms (0,0), (1,0), (2,0), (0,1) with independent standard complex
/// Gaussian entries (real and imaginary parts N(0, 1/2)). Deterministic in
/// (seed, n, trial).
PolynomialMEP2 random_quadratic_problem(int n, std::uint64_t seed, int trial);

BenchResult run_bench(const BenchConfig& cfg);

/// Least squares fit of log y = slope * log x + intercept.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace mep
