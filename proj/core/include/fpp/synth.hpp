#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fpp/linalg.hpp"

namespace fpp {

/// SplitMix64. The exact output sequence is part of the synthetic data
/// contract: datasets generated from the same seed are identical everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (bound > 0).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

/// Standard normals by Box-Muller: each pair of uniforms (u1, u2) yields
/// r·cos(2πu2) and then r·sin(2πu2), with r = sqrt(-2 ln(1 - u1)).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  SplitMix64 rng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Parameters of the spiked-covariance generator. Every row is
/// class centroid + common offset + noise, where the noise has variance
/// spike_variances[k] along planted direction k and base_variance elsewhere.
struct SynthSpec {
  std::size_t n_per_class = 100;
  std::size_t n_classes = 1;
  std::size_t dim = 16;
  double offset_norm = 0.0;
  std::vector<double> spike_variances;
  double base_variance = 1.0;
  double class_sep = 0.0;  // pairwise distance between class centroids
  std::uint64_t seed = 0;
};

struct SynthData {
  Matrix features;
  std::vector<int> labels;  // class-major: all rows of class 0 first
};

/// Exact planted quantities of a spec.
struct GroundTruth {
  Vector offset;                 // zero vector when offset_norm == 0
  std::vector<Vector> spikes;    // orthonormal, one per spike variance
  std::vector<Vector> centroids; // one per class, pairwise distance class_sep
};

/// Throws Error(InvalidArgument) for malformed specs, including a dimension
/// too small to hold offset, spikes, and centroid axes orthogonally.
void validate(const SynthSpec& spec);

/// Planted structure. The RNG stream first draws one Gaussian D-vector per
/// planted direction (offset slot if offset_norm > 0, then spikes, then one
/// axis per class if class_sep > 0 and there are at least 2 classes) and
/// orthonormalizes them in that order.
GroundTruth ground_truth(const SynthSpec& spec);

/// Rows continue on the same stream after the planted directions, class by
/// class, D normals per row in dimension order.
SynthData generate(const SynthSpec& spec);

}  // namespace fpp
