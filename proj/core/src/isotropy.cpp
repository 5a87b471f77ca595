#include "fpp/isotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fpp/error.hpp"

namespace fpp {

namespace {

void require_nonempty(const Matrix& features) {
  if (features.empty()) fail(ErrorKind::EmptyInput, "empty input");
}

double ones_projection_norm(const Matrix& features) {
  Vector sums(features.cols(), 0.0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto r = features.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) sums[j] += r[j];
  }
  return norm2(sums);
}

struct ProbeStats {
  double log_min = std::numeric_limits<double>::infinity();
  double log_max = -std::numeric_limits<double>::infinity();
};

ProbeStats probe_stats(const Matrix& features, const std::vector<Vector>& probes) {
  if (probes.empty()) fail(ErrorKind::InvalidArgument, "empty probe set");
  ProbeStats s;
  for (const auto& w : probes) {
    const double lh = log_partition(features, w);
    s.log_min = std::min(s.log_min, lh);
    s.log_max = std::max(s.log_max, lh);
  }
  return s;
}

std::vector<Vector> probes_from(const std::vector<EigenPair>& pairs) {
  std::vector<Vector> probes;
  probes.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    probes.push_back(p.vector);
    Vector neg = p.vector;
    for (double& x : neg) x = -x;
    probes.push_back(std::move(neg));
  }
  return probes;
}

double second_order_from(std::size_t n, std::size_t d, double ones_norm,
                         const std::vector<EigenPair>& spectrum, double* sigma_min,
                         double* sigma_max) {
  const double top = std::max(0.0, spectrum.front().value);
  const double bottom = n < d ? 0.0 : std::max(0.0, spectrum.back().value);
  *sigma_max = std::sqrt(top);
  *sigma_min = std::sqrt(bottom);
  const double count = static_cast<double>(n);
  return (count - ones_norm + 0.5 * bottom) / (count + ones_norm + 0.5 * top);
}

}  // namespace

double log_partition(const Matrix& features, std::span<const double> w) {
  require_nonempty(features);
  if (w.size() != features.cols()) {
    fail(ErrorKind::DimensionMismatch, "probe has length " + std::to_string(w.size()) +
                                           ", features have " +
                                           std::to_string(features.cols()) + " columns");
  }
  if (const double nrm = norm2(w); !(std::abs(nrm - 1.0) <= 1e-8)) {
    fail(ErrorKind::InvalidArgument, "probe direction is not unit norm (‖w‖ = " +
                                         std::to_string(nrm) + ")");
  }
  std::vector<double> z(features.rows());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < features.rows(); ++i) {
    z[i] = dot(w, features.row(i));
    peak = std::max(peak, z[i]);
  }
  if (!std::isfinite(peak)) fail(ErrorKind::Overflow, "partition function overflows in log domain");
  double acc = 0.0;
  for (double v : z) acc += std::exp(v - peak);
  const double result = peak + std::log(acc);
  if (!std::isfinite(result)) {
    fail(ErrorKind::Overflow, "partition function overflows in log domain");
  }
  return result;
}

double partition(const Matrix& features, std::span<const double> w) {
  const double lh = log_partition(features, w);
  if (lh > std::log(std::numeric_limits<double>::max())) {
    fail(ErrorKind::Overflow, "partition function exceeds double range (log H = " +
                                  std::to_string(lh) + "); use log_partition");
  }
  return std::exp(lh);
}

double isotropy_over_probes(const Matrix& features, const std::vector<Vector>& probes) {
  const auto s = probe_stats(features, probes);
  return std::exp(s.log_min - s.log_max);
}

std::vector<Vector> eigen_probes(const Matrix& features) {
  require_nonempty(features);
  return probes_from(symmetric_eigen(cross_product(features)));
}

double isotropy_empirical(const Matrix& features) {
  return isotropy_over_probes(features, eigen_probes(features));
}

double isotropy_first_order(const Matrix& features) {
  require_nonempty(features);
  const double ones_norm = ones_projection_norm(features);
  const double n = static_cast<double>(features.rows());
  return (n - ones_norm) / (n + ones_norm);
}

double isotropy_second_order(const Matrix& features) {
  require_nonempty(features);
  double lo = 0.0;
  double hi = 0.0;
  return second_order_from(features.rows(), features.cols(), ones_projection_norm(features),
                           symmetric_eigen(cross_product(features)), &lo, &hi);
}

IsotropyReport isotropy_report(const Matrix& features) {
  require_nonempty(features);
  IsotropyReport r;
  r.n = features.rows();
  r.dim = features.cols();
  const auto spectrum = symmetric_eigen(cross_product(features));
  const auto stats = probe_stats(features, probes_from(spectrum));
  r.log_h_min = stats.log_min;
  r.log_h_max = stats.log_max;
  r.h_min = std::exp(stats.log_min);
  r.h_max = std::exp(stats.log_max);
  r.m_empirical = std::exp(stats.log_min - stats.log_max);
  r.ones_proj_norm = ones_projection_norm(features);
  const double n = static_cast<double>(r.n);
  r.m_first_order = (n - r.ones_proj_norm) / (n + r.ones_proj_norm);
  r.m_second_order = second_order_from(r.n, r.dim, r.ones_proj_norm, spectrum, &r.sigma_min,
                                       &r.sigma_max);
  return r;
}

}  // namespace fpp
