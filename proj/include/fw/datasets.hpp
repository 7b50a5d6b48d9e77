#ifndef FW_DATASETS_HPP
#define FW_DATASETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fw/objectives.hpp"

namespace fw {

/// Loaded problem data: a dense (A, y) regression bundle or a ratings
/// triple list for completion. Dense bundles carry their Z-score metadata.
struct DatasetBundle {
  enum class Kind { Dense, Ratings };
  Kind kind = Kind::Dense;

  // Dense
  Matrix A;
  Vector y;
  Vector feature_mean, feature_std;
  double target_mean = 0.0, target_std = 1.0;

  // Ratings
  std::vector<Observation> observed;
  Index rows = 0;
  Index cols = 0;
};

/// Z-scores every column in place: (x - mean) / std with the population
/// standard deviation. A constant column raises DataError.
void zscore_columns(Matrix& A, Vector& mean_out, Vector& std_out,
                    const std::vector<std::string>& names);

/// Numeric CSV with a header row; the named target column becomes y and the
/// remaining columns become A, all Z-scored.
DatasetBundle load_dense_csv(const std::string& path,
                             const std::string& target_column);

struct SubsampleSpec {
  Index max_users = 0;
  Index max_items = 0;
  unsigned seed = 0;
};

/// Tab-separated `user item rating timestamp` rows with 1-based ids,
/// remapped to dense 0-based indices. Optional subsampling keeps the
/// densest users/items up to the caps and reindexes.
DatasetBundle load_movielens(const std::string& path,
                             std::optional<SubsampleSpec> subsample = {});

enum class SynthKind { Identity, Gaussian };

struct SynthRegression {
  Matrix A;
  Vector y;
  Vector x_unc;
};

/// Deterministic synthetic regression instance. Identity: A = I_n (m = n),
/// y standard normal, so x_unc = y. Gaussian: i.i.d. standard normal A.
SynthRegression synth_regression(unsigned seed, Index m, Index n,
                                 SynthKind kind);

}  // namespace fw

#endif  // FW_DATASETS_HPP
