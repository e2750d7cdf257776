#pragma once

// Extraction of the common regular part of the singular pencils
// Delta_1 - lambda Delta_0 and Delta_2 - mu Delta_0 by a staircase of
// unitary column and row deflations.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mep/operator_determinants.hpp"

namespace mep {

struct CompressionStage {
  enum class Side { row, col };
  Side side = Side::col;
  Index rank = 0;  // numerical rank of Delta_0 entering the stage
  Index rows_before = 0, cols_before = 0;
  Index rows_after = 0, cols_after = 0;
  double threshold = 0.0;
  bool ambiguous = false;  // a singular value lay near the threshold
  /// Frobenius norms of Delta_0..2 before the stage and after the unitary
  /// transformation, before truncation.
  std::vector<double> norms_before;
  std::vector<double> norms_transformed;
};

struct CompressionResult {
  OperatorDeterminants compressed;
  Index original_size = 0;
  Index compressed_size = 0;
  std::vector<CompressionStage> stage_log;
  bool heuristic_n_gt_2 = false;
  bool ambiguous = false;  // any stage (or the final rank check) was ambiguous
};

class SingularStructureError : public NumericalError {
 public:
  SingularStructureError(const std::string& what,
                         std::vector<CompressionStage> log)
      : NumericalError(what), log_(std::move(log)) {}
  const std::vector<CompressionStage>& stage_log() const { return log_; }

 private:
  std::vector<CompressionStage> log_;
};

/// rel_tol defaults to default_rank_tolerance of the original size. Ranks
/// are decided against rel_tol * max_k ||Delta_k||_F of the input.
CompressionResult compress(const OperatorDeterminants& d,
                           std::optional<double> rel_tol = std::nullopt);

std::string to_string(CompressionStage::Side s);
nlohmann::json to_json(const CompressionStage& s);
nlohmann::json to_json(const CompressionResult& r);

}  // namespace mep
