#include "fpp/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fpp/error.hpp"

namespace fpp {

namespace {

std::size_t planted_count(const SynthSpec& spec) {
  std::size_t m = spec.spike_variances.size();
  if (spec.offset_norm > 0.0) ++m;
  if (spec.class_sep > 0.0 && spec.n_classes > 1) m += spec.n_classes;
  return m;
}

// Draws the planted directions and the noise stream that follows them.
GroundTruth plant(const SynthSpec& spec, NormalStream& normals) {
  validate(spec);
  const std::size_t d = spec.dim;
  std::vector<Vector> basis;
  const std::size_t m = planted_count(spec);
  basis.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    Vector v(d);
    for (double& x : v) x = normals.next();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < d; ++i) v[i] -= c * b[i];
      }
    }
    const double nrm = norm2(v);
    if (nrm < 1e-8) fail(ErrorKind::InvalidArgument, "degenerate planted direction draw");
    for (double& x : v) x /= nrm;
    basis.push_back(std::move(v));
  }

  GroundTruth gt;
  std::size_t next = 0;
  gt.offset.assign(d, 0.0);
  if (spec.offset_norm > 0.0) {
    const auto& q = basis[next++];
    for (std::size_t i = 0; i < d; ++i) gt.offset[i] = spec.offset_norm * q[i];
  }
  for (std::size_t k = 0; k < spec.spike_variances.size(); ++k) gt.spikes.push_back(basis[next++]);
  gt.centroids.assign(spec.n_classes, Vector(d, 0.0));
  if (spec.class_sep > 0.0 && spec.n_classes > 1) {
    const double scale = spec.class_sep / std::numbers::sqrt2;
    for (auto& c : gt.centroids) {
      const auto& q = basis[next++];
      for (std::size_t i = 0; i < d; ++i) c[i] = scale * q[i];
    }
  }
  return gt;
}

}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::InvalidArgument, "below: bound must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - rng_.uniform();  // (0, 1]
  const double u2 = rng_.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

void validate(const SynthSpec& spec) {
  auto bad = [](const std::string& what) { fail(ErrorKind::InvalidArgument, "synth: " + what); };
  if (spec.n_per_class < 1 || spec.n_classes < 1 || spec.dim < 1) bad("counts must be >= 1");
  if (!std::isfinite(spec.base_variance) || spec.base_variance <= 0.0)
    bad("base_variance must be positive");
  if (!std::isfinite(spec.offset_norm) || spec.offset_norm < 0.0)
    bad("offset_norm must be >= 0");
  if (!std::isfinite(spec.class_sep) || spec.class_sep < 0.0) bad("class_sep must be >= 0");
  for (double s : spec.spike_variances) {
    if (!std::isfinite(s) || s <= spec.base_variance)
      bad("spike variances must exceed base_variance");
  }
  if (spec.spike_variances.size() > spec.dim) bad("more spikes than dimensions");
  if (const std::size_t m = planted_count(spec); m > spec.dim) {
    bad("dim " + std::to_string(spec.dim) + " cannot host " + std::to_string(m) +
        " orthogonal planted directions (offset, spikes, class axes)");
  }
}

GroundTruth ground_truth(const SynthSpec& spec) {
  NormalStream normals(spec.seed);
  return plant(spec, normals);
}

SynthData generate(const SynthSpec& spec) {
  NormalStream normals(spec.seed);
  const GroundTruth gt = plant(spec, normals);
  const std::size_t d = spec.dim;
  const std::size_t n = spec.n_per_class * spec.n_classes;
  const double base_sd = std::sqrt(spec.base_variance);
  std::vector<double> spike_gain;
  for (double s : spec.spike_variances) spike_gain.push_back(std::sqrt(s) - base_sd);

  SynthData out{Matrix(n, d), std::vector<int>(n)};
  Vector z(d);
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    for (std::size_t i = 0; i < spec.n_per_class; ++i, ++row) {
      for (double& x : z) x = normals.next();
      auto f = out.features.row(row);
      for (std::size_t j = 0; j < d; ++j) {
        f[j] = gt.centroids[c][j] + gt.offset[j] + base_sd * z[j];
      }
      for (std::size_t k = 0; k < gt.spikes.size(); ++k) {
        const double a = spike_gain[k] * dot(gt.spikes[k], z);
        for (std::size_t j = 0; j < d; ++j) f[j] += a * gt.spikes[k][j];
      }
      out.labels[row] = static_cast<int>(c);
    }
  }
  return out;
}

}  // namespace fpp
