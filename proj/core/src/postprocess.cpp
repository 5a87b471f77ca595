#include "fpp/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fpp/error.hpp"

namespace fpp {

namespace {

// Leading k eigenpairs of the scatter of `centered`. Power iteration is the
// primary solver; a near-degenerate cluster that stalls it falls back to the
// dense Jacobi solve of the same scatter matrix.
std::vector<EigenPair> leading_eigenpairs(const Matrix& centered, std::size_t k) {
  try {
    if (centered.rows() < centered.cols()) return gram_eigenpairs(centered, k);
    return top_eigenpairs(scatter(centered), k);
  } catch (const ConvergenceError&) {
    auto all = symmetric_eigen(scatter(centered));
    all.resize(k);
    return all;
  }
}

}  // namespace

void PostprocessModel::validate(double tol) const {
  auto bad = [](const std::string& what) {
    fail(ErrorKind::InvariantViolation, "postprocess model: " + what);
  };
  if (mean.size() != dim) bad("mean has wrong length");
  if (t > dim) bad("t exceeds dimension");
  if (directions.size() != t || eigenvalues.size() != t) bad("direction count differs from t");
  for (double m : mean)
    if (!std::isfinite(m)) bad("mean is not finite");
  for (std::size_t j = 0; j < t; ++j) {
    if (directions[j].size() != dim) bad("direction has wrong length");
    if (!std::isfinite(eigenvalues[j]) || eigenvalues[j] < 0.0) bad("negative eigenvalue");
    if (j > 0 && eigenvalues[j] > eigenvalues[j - 1]) bad("eigenvalues not descending");
    for (std::size_t i = 0; i <= j; ++i) {
      const double expected = i == j ? 1.0 : 0.0;
      if (!(std::abs(dot(directions[i], directions[j]) - expected) <= tol)) {
        bad("directions not orthonormal");
      }
    }
  }
}

PostprocessModel fit(const Matrix& features, std::size_t t, std::size_t pca_dim) {
  if (features.rows() < 2) {
    fail(ErrorKind::EmptyInput, "fit needs at least 2 feature vectors, got " +
                                    std::to_string(features.rows()));
  }
  const std::size_t d = features.cols();
  if (pca_dim == 0) pca_dim = d;
  if (pca_dim > d) {
    fail(ErrorKind::InvalidArgument, "pca_dim " + std::to_string(pca_dim) +
                                         " exceeds feature dimension " + std::to_string(d));
  }
  if (t > pca_dim) {
    fail(ErrorKind::InvalidArgument,
         "t " + std::to_string(t) + " exceeds pca_dim " + std::to_string(pca_dim));
  }

  PostprocessModel model;
  model.dim = d;
  model.t = t;
  model.source_count = features.rows();
  model.mean = column_mean(features);
  if (t == 0) return model;

  const Matrix centered = subtract_row(features, model.mean);
  auto pairs = leading_eigenpairs(centered, t);

  const double top = pairs.front().value;
  std::size_t positive = 0;
  for (const auto& p : pairs) {
    if (top > 0.0 && p.value > 1e-12 * top) ++positive;
  }
  if (positive < t) {
    fail(ErrorKind::RankDeficient,
         "demeaned features have only " + std::to_string(positive) +
             " non-null principal directions; achievable t is 0.." + std::to_string(positive));
  }

  model.directions.reserve(t);
  model.eigenvalues.reserve(t);
  for (auto& p : pairs) {
    model.eigenvalues.push_back(p.value);
    model.directions.push_back(std::move(p.vector));
  }
  return model;
}

Matrix transform(const Matrix& features, const PostprocessModel& model) {
  if (features.cols() != model.dim) {
    fail(ErrorKind::DimensionMismatch,
         "features have " + std::to_string(features.cols()) + " columns, model expects " +
             std::to_string(model.dim));
  }
  Matrix out = subtract_row(features, model.mean);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (const auto& u : model.directions) {
      const double alpha = dot(u, row);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] -= alpha * u[c];
    }
  }
  return out;
}

std::pair<PostprocessModel, Matrix> fit_transform(const Matrix& features, std::size_t t,
                                                  std::size_t pca_dim) {
  PostprocessModel model = fit(features, t, pca_dim);
  Matrix out = transform(features, model);
  return {std::move(model), std::move(out)};
}

SpectrumSummary spectrum_summary(const Matrix& features, std::size_t k) {
  if (features.empty()) fail(ErrorKind::EmptyInput, "empty input");
  if (k > features.cols()) {
    fail(ErrorKind::InvalidArgument, "k " + std::to_string(k) + " exceeds dimension " +
                                         std::to_string(features.cols()));
  }
  SpectrumSummary s;
  s.n = features.rows();
  s.dim = features.cols();
  const Vector mean = column_mean(features);
  s.mean_norm = norm2(mean);
  double total = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) total += norm2(features.row(i));
  s.avg_row_norm = total / static_cast<double>(s.n);
  s.norm_ratio = s.avg_row_norm > 0.0 ? s.mean_norm / s.avg_row_norm : 0.0;

  if (k == 0) return s;
  const Matrix centered = subtract_row(features, mean);
  double trace = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    for (double x : centered.row(i)) trace += x * x;
  }
  trace /= static_cast<double>(s.n);

  const auto pairs = leading_eigenpairs(centered, k);
  double running = 0.0;
  for (const auto& p : pairs) {
    s.eigenvalues.push_back(p.value);
    running += p.value;
    s.cumulative_energy.push_back(trace > 0.0 ? running / trace : 0.0);
  }
  return s;
}

std::string format_spectrum_row(const std::string& name, const SpectrumSummary& summary) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  dim=%zu  n=%zu  ‖u‖₂=%.5g  avg‖f‖₂=%.5g  ratio=%.4g",
                name.c_str(), summary.dim, summary.n, summary.mean_norm, summary.avg_row_norm,
                summary.norm_ratio);
  std::string line = buf;
  if (!summary.cumulative_energy.empty()) {
    line += "  energy=";
    for (std::size_t j = 0; j < summary.cumulative_energy.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%.4f", j == 0 ? "" : ",", summary.cumulative_energy[j]);
      line += buf;
    }
  }
  return line;
}

}  // namespace fpp
