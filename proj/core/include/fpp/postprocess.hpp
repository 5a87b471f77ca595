#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpp/linalg.hpp"

namespace fpp {

/// Learned state of the postprocessing step: the common mean vector and the
/// ordered dominating directions that get projected away.
struct PostprocessModel {
  std::size_t dim = 0;
  std::size_t t = 0;
  Vector mean;
  std::vector<Vector> directions;
  std::vector<double> eigenvalues;
  std::size_t source_count = 0;

  /// Throws Error(InvariantViolation) when the shapes disagree, the directions
  /// are not orthonormal within `tol`, or the eigenvalues are not descending
  /// and non-negative.
  void validate(double tol = 1e-8) const;

  friend bool operator==(const PostprocessModel&, const PostprocessModel&) = default;
};

/// Fits the mean and the top-t principal directions of the demeaned features.
///
/// `pca_dim` is the number of components PCA is allowed to extract (0 means
/// the full feature dimension). Only the top t are kept, and because the
/// solver extracts components in order the kept ones do not depend on
/// pca_dim. When N < D the N×N Gram form is used.
///
/// Fails with RankDeficient when fewer than t eigenvalues are strictly
/// positive (λ > 1e-12·λ₁); the message lists the achievable t.
PostprocessModel fit(const Matrix& features, std::size_t t, std::size_t pca_dim = 0);

/// f'(i) = f̃(i) − Σ_j (u_jᵀ f̃(i)) u_j with f̃(i) = f(i) − mean. The output
/// keeps all D columns.
Matrix transform(const Matrix& features, const PostprocessModel& model);

std::pair<PostprocessModel, Matrix> fit_transform(const Matrix& features, std::size_t t,
                                                  std::size_t pca_dim = 0);

/// One-line description of a feature set: size, mean norm, spectrum energy.
struct SpectrumSummary {
  std::size_t n = 0;
  std::size_t dim = 0;
  double mean_norm = 0.0;      // ‖u‖₂
  double avg_row_norm = 0.0;   // mean of ‖f(i)‖₂
  double norm_ratio = 0.0;     // mean_norm / avg_row_norm, 0 when both vanish
  std::vector<double> eigenvalues;        // top-k of the demeaned scatter
  std::vector<double> cumulative_energy;  // Σ_{i≤j} λ_i / trace
};

SpectrumSummary spectrum_summary(const Matrix& features, std::size_t k);

/// One line: `<name>  dim=<D>  n=<N>  ‖u‖₂=<norm>  avg‖f‖₂=<..>  ratio=<..>`
/// followed by the leading energy fractions.
std::string format_spectrum_row(const std::string& name, const SpectrumSummary& summary);

}  // namespace fpp
