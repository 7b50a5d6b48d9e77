#include "fw/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fw/errors.hpp"
#include "fw/linalg.hpp"

namespace fw {

void zscore_columns(Matrix& A, Vector& mean_out, Vector& std_out,
                    const std::vector<std::string>& names) {
  const Index m = A.rows();
  const Index n = A.cols();
  mean_out.resize(n);
  std_out.resize(n);
  for (Index j = 0; j < n; ++j) {
    const double mean = A.col(j).mean();
    const double var = (A.col(j).array() - mean).square().sum() / double(m);
    const double sd = std::sqrt(var);
    if (sd <= 1e-12 * (1.0 + std::abs(mean))) {
      const std::string name =
          j < static_cast<Index>(names.size()) ? names[static_cast<std::size_t>(j)]
                                               : std::to_string(j);
      throw DataError("zscore: column '" + name + "' is constant");
    }
    A.col(j) = (A.col(j).array() - mean) / sd;
    mean_out[j] = mean;
    std_out[j] = sd;
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  // Tolerate surrounding whitespace only.
  while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
  if (used != cell.size() || cell.empty()) {
    std::ostringstream msg;
    msg << "non-numeric cell '" << cell << "' at row " << row << ", column "
        << col;
    throw DataError(msg.str());
  }
  return value;
}

}  // namespace

DatasetBundle load_dense_csv(const std::string& path,
                             const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("load_dense_csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("load_dense_csv: '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  long target_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target_column) target_idx = static_cast<long>(j);
  }
  if (target_idx < 0) {
    throw DataError("load_dense_csv: no column named '" + target_column + "'");
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "load_dense_csv: row " << line_no << " has " << cells.size()
          << " cells, header has " << header.size();
      throw DataError(msg.str());
    }
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      row[j] = parse_cell(cells[j], line_no, j + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("load_dense_csv: '" + path + "' has no data rows");

  const Index m = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(header.size()) - 1;
  DatasetBundle bundle;
  bundle.kind = DatasetBundle::Kind::Dense;
  bundle.A.resize(m, n);
  bundle.y.resize(m);
  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (static_cast<long>(j) != target_idx) feature_names.push_back(header[j]);
  }
  for (Index i = 0; i < m; ++i) {
    Index jj = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      const double v = rows[static_cast<std::size_t>(i)][j];
      if (static_cast<long>(j) == target_idx) {
        bundle.y[i] = v;
      } else {
        bundle.A(i, jj++) = v;
      }
    }
  }

  zscore_columns(bundle.A, bundle.feature_mean, bundle.feature_std, feature_names);
  Matrix ycol = bundle.y;
  Vector ymean, ystd;
  zscore_columns(ycol, ymean, ystd, {target_column});
  bundle.y = ycol.col(0);
  bundle.target_mean = ymean[0];
  bundle.target_std = ystd[0];
  return bundle;
}

DatasetBundle load_movielens(const std::string& path,
                             std::optional<SubsampleSpec> subsample) {
  std::ifstream in(path);
  if (!in) throw DataError("load_movielens: cannot open '" + path + "'");

  struct RawRating {
    long user, item;
    double rating;
  };
  std::vector<RawRating> ratings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    long user = 0, item = 0;
    double rating = 0.0;
    long timestamp = 0;
    if (!(row >> user >> item >> rating >> timestamp) || user < 1 || item < 1) {
      std::ostringstream msg;
      msg << "load_movielens: malformed row at line " << line_no << ": '"
          << line << "'";
      throw DataError(msg.str());
    }
    ratings.push_back(RawRating{user, item, rating});
  }
  if (ratings.empty()) {
    throw DataError("load_movielens: '" + path + "' contains no observations");
  }

  std::map<long, long> user_count, item_count;
  for (const RawRating& r : ratings) {
    ++user_count[r.user];
    ++item_count[r.item];
  }

  // Keep the densest ids up to the caps; a seeded hash breaks count ties so
  // the selection is deterministic for a given seed.
  const auto select_ids = [](const std::map<long, long>& counts, Index cap,
                             unsigned seed) {
    std::vector<std::pair<long, long>> by_density(counts.begin(), counts.end());
    std::ranges::sort(by_density, [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      const auto h = [&](long id) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<unsigned long long>(id));
        return rng();
      };
      const auto ha = h(a.first), hb = h(b.first);
      if (ha != hb) return ha < hb;
      return a.first < b.first;
    });
    if (cap > 0 && static_cast<Index>(by_density.size()) > cap) {
      by_density.resize(static_cast<std::size_t>(cap));
    }
    std::map<long, long> remap;
    std::vector<long> kept;
    kept.reserve(by_density.size());
    for (const auto& [id, count] : by_density) kept.push_back(id);
    std::ranges::sort(kept);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      remap[kept[k]] = static_cast<long>(k);
    }
    return remap;
  };

  const Index user_cap = subsample ? subsample->max_users : 0;
  const Index item_cap = subsample ? subsample->max_items : 0;
  const unsigned seed = subsample ? subsample->seed : 0;
  const std::map<long, long> user_map = select_ids(user_count, user_cap, seed);
  const std::map<long, long> item_map = select_ids(item_count, item_cap, seed + 1);

  DatasetBundle bundle;
  bundle.kind = DatasetBundle::Kind::Ratings;
  bundle.rows = static_cast<Index>(user_map.size());
  bundle.cols = static_cast<Index>(item_map.size());
  for (const RawRating& r : ratings) {
    const auto u = user_map.find(r.user);
    const auto v = item_map.find(r.item);
    if (u == user_map.end() || v == item_map.end()) continue;
    bundle.observed.push_back(Observation{u->second, v->second, r.rating});
  }
  if (bundle.observed.empty()) {
    throw DataError("load_movielens: subsampling left no observations");
  }
  return bundle;
}

SynthRegression synth_regression(unsigned seed, Index m, Index n,
                                 SynthKind kind) {
  if (n < 1 || m < n) {
    throw InvalidParameterError("synth_regression: need m >= n >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthRegression out;
  if (kind == SynthKind::Identity) {
    out.A = Matrix::Identity(n, n);
    out.y.resize(n);
    for (Index i = 0; i < n; ++i) out.y[i] = gauss(rng);
    out.x_unc = out.y;
    return out;
  }
  out.A.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) out.A(i, j) = gauss(rng);
  }
  out.y.resize(m);
  for (Index i = 0; i < m; ++i) out.y[i] = gauss(rng);
  out.x_unc = least_squares(out.A, out.y);
  return out;
}

}  // namespace fw
