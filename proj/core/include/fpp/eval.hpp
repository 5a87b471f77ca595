#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/linalg.hpp"

namespace fpp {

enum class Evaluator { NearestCentroid, Knn, PairVerify };
enum class Metric { Euclidean, Cosine };
enum class FitOn { Train, All };
// Where rows get L2-normalized relative to postprocessing, if at all.
enum class L2Mode { None, Before, After };

std::string_view to_string(Evaluator e);
std::string_view to_string(Metric m);
std::string_view to_string(FitOn f);
std::string_view to_string(L2Mode m);
Evaluator parse_evaluator(std::string_view s);
Metric parse_metric(std::string_view s);
FitOn parse_fit_on(std::string_view s);
L2Mode parse_l2_mode(std::string_view s);

struct LabeledSet {
  Matrix features;
  std::vector<int> labels;
};

struct Split {
  LabeledSet train;
  LabeledSet test;
  std::vector<std::size_t> train_index;  // ascending row ids into the input
  std::vector<std::size_t> test_index;
};

/// Stratified, deterministic train/test split.
///
/// The total test count is round(test_fraction·N); it is spread over classes
/// by largest remainder of test_fraction·n_c (ties go to the smaller class id)
/// and every class keeps at least one row on each side. Rows inside a class
/// are shuffled with SplitMix64(seed), classes visited in ascending id order.
Split split(const Matrix& features, const std::vector<int>& labels, double test_fraction,
            std::uint64_t seed);

/// Euclidean nearest class mean; ties go to the smallest class id.
std::vector<int> nearest_centroid(const LabeledSet& train, const Matrix& test);

/// Majority vote among the k nearest training rows. Neighbours are ranked by
/// distance (or descending cosine similarity), then by training row index;
/// vote ties go to the smallest class id. Cosine similarity with a zero
/// vector is taken as -1.
std::vector<int> knn(const LabeledSet& train, const Matrix& test, std::size_t k, Metric metric);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct VerifyResult {
  double threshold = 0.0;  // a pair is "same" when its similarity > threshold
  double accuracy = 0.0;
};

/// Best-threshold accuracy of cosine-similarity verification. Candidate
/// thresholds are -inf, the midpoints between consecutive distinct observed
/// similarities, and +inf; the smallest best threshold wins.
VerifyResult verify_pairs(const Matrix& a, const Matrix& b, const std::vector<bool>& same);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

struct EvalParams {
  Evaluator evaluator = Evaluator::NearestCentroid;
  std::size_t k = 1;
  Metric metric = Metric::Euclidean;
  double test_fraction = 0.3;
  std::size_t pca_dim = 0;  // 0: full dimension
  FitOn fit_on = FitOn::Train;
  L2Mode l2 = L2Mode::None;
};

struct EvalReport {
  Evaluator evaluator = Evaluator::NearestCentroid;
  EvalParams params;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t t_used = 0;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  // Pair verification only.
  std::size_t pair_count = 0;
  double threshold_before = 0.0;
  double threshold_after = 0.0;
  // Classifiers only: accuracy per true test class.
  std::map<int, double> per_class_before;
  std::map<int, double> per_class_after;
};

/// Runs the evaluator on raw features ("before") and on postprocessed
/// features ("after") with the same split. The model is fitted on the
/// training rows unless params.fit_on is All.
EvalReport compare(const Matrix& features, const std::vector<int>& labels, std::size_t t,
                   const EvalParams& params, std::uint64_t seed);

struct SweepRow {
  EvalReport report;
  double m_empirical_before = 0.0;  // raw features, all rows
  double m_empirical_after = 0.0;   // all rows through the fitted model
};

/// compare() for t = 0..t_max on one shared split.
std::vector<SweepRow> sweep(const Matrix& features, const std::vector<int>& labels,
                            std::size_t t_max, const EvalParams& params, std::uint64_t seed);

}  // namespace fpp
