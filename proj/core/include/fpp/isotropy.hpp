#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpp/linalg.hpp"

namespace fpp {

/// Summary of how isotropic a feature set is. H values are the partition
/// function Σ exp(ωᵀ f(i)) at the extreme probes; they are also kept in log
/// form because the plain values overflow for realistic feature norms.
struct IsotropyReport {
  std::size_t n = 0;
  std::size_t dim = 0;
  double h_min = 0.0;
  double h_max = 0.0;
  double log_h_min = 0.0;
  double log_h_max = 0.0;
  double m_empirical = 0.0;
  double m_first_order = 0.0;
  double m_second_order = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double ones_proj_norm = 0.0;  // ‖1ᵀA‖₂

  friend bool operator==(const IsotropyReport&, const IsotropyReport&) = default;
};

/// log Σ_i exp(wᵀ f(i)), evaluated with the log-sum-exp shift.
/// Requires ‖w‖₂ = 1 ± 1e-8.
double log_partition(const Matrix& features, std::span<const double> w);

/// Σ_i exp(wᵀ f(i)). Throws Error(Overflow) when the value is not
/// representable; use log_partition() in that case.
double partition(const Matrix& features, std::span<const double> w);

/// min/max ratio of H over the given unit probes.
double isotropy_over_probes(const Matrix& features, const std::vector<Vector>& probes);

/// The eigenvectors of AᵀA and their negations, 2D probes in total.
std::vector<Vector> eigen_probes(const Matrix& features);

/// min H / max H over eigen_probes(); always in [0, 1].
double isotropy_empirical(const Matrix& features);

/// (N − ‖1ᵀA‖) / (N + ‖1ᵀA‖). Negative when the mean dominates.
double isotropy_first_order(const Matrix& features);

/// (N − ‖1ᵀA‖ + σ²_min/2) / (N + ‖1ᵀA‖ + σ²_max/2) with σ the singular
/// values of A. σ_min is 0 when N < D.
double isotropy_second_order(const Matrix& features);

IsotropyReport isotropy_report(const Matrix& features);

}  // namespace fpp
