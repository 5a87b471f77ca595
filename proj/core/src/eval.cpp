#include "fpp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "fpp/error.hpp"
#include "fpp/isotropy.hpp"
#include "fpp/postprocess.hpp"
#include "fpp/synth.hpp"

namespace fpp {

namespace {

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto src = m.row(idx[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

std::vector<int> select_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

Matrix l2_normalized(const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    const double nrm = norm2(r);
    if (nrm > 0.0) {
      for (double& x : r) x /= nrm;
    }
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_train(const LabeledSet& train, const Matrix& test) {
  if (train.features.rows() == 0) fail(ErrorKind::EmptyInput, "empty training set");
  if (train.labels.size() != train.features.rows()) {
    fail(ErrorKind::DimensionMismatch, "training labels do not match training rows");
  }
  if (test.cols() != train.features.cols()) {
    fail(ErrorKind::DimensionMismatch,
         "test features have " + std::to_string(test.cols()) + " columns, training has " +
             std::to_string(train.features.cols()));
  }
}

std::map<int, double> per_class(const std::vector<int>& predicted, const std::vector<int>& truth) {
  std::map<int, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& c = counts[truth[i]];
    ++c.second;
    if (predicted[i] == truth[i]) ++c.first;
  }
  std::map<int, double> out;
  for (const auto& [cls, c] : counts) {
    out[cls] = static_cast<double>(c.first) / static_cast<double>(c.second);
  }
  return out;
}

struct PairSet {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  std::vector<bool> same;
};

// Balanced same/different pairs drawn from the test rows, one of each per
// two test rows.
PairSet sample_pairs(const std::vector<int>& labels, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::size_t> pairable;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (by_class[labels[i]].size() >= 2) pairable.push_back(i);
  }
  const bool can_same = !pairable.empty();
  const bool can_diff = by_class.size() >= 2;
  if (!can_same && !can_diff) {
    fail(ErrorKind::InvalidArgument, "pair verification needs at least two test rows");
  }
  const std::size_t per_kind = std::max<std::size_t>(1, labels.size() / 2);
  SplitMix64 rng(seed ^ 0x5EED5A17F00DULL);
  PairSet pairs;
  if (can_same) {
    for (std::size_t p = 0; p < per_kind; ++p) {
      const std::size_t i = pairable[rng.below(pairable.size())];
      const auto& mates = by_class[labels[i]];
      std::size_t j = i;
      while (j == i) j = mates[rng.below(mates.size())];
      pairs.a.push_back(i);
      pairs.b.push_back(j);
      pairs.same.push_back(true);
    }
  }
  if (can_diff) {
    for (std::size_t p = 0; p < per_kind; ++p) {
      const std::size_t i = rng.below(labels.size());
      std::size_t j = i;
      while (labels[j] == labels[i]) j = rng.below(labels.size());
      pairs.a.push_back(i);
      pairs.b.push_back(j);
      pairs.same.push_back(false);
    }
  }
  return pairs;
}

struct ArmResult {
  double accuracy = 0.0;
  double threshold = 0.0;
  std::map<int, double> per_class;
};

ArmResult evaluate_arm(const LabeledSet& train, const LabeledSet& test, const EvalParams& params,
                       const PairSet& pairs) {
  ArmResult r;
  switch (params.evaluator) {
    case Evaluator::NearestCentroid: {
      const auto pred = nearest_centroid(train, test.features);
      r.accuracy = accuracy(pred, test.labels);
      r.per_class = per_class(pred, test.labels);
      break;
    }
    case Evaluator::Knn: {
      const auto pred = knn(train, test.features, params.k, params.metric);
      r.accuracy = accuracy(pred, test.labels);
      r.per_class = per_class(pred, test.labels);
      break;
    }
    case Evaluator::PairVerify: {
      const auto v = verify_pairs(select_rows(test.features, pairs.a),
                                  select_rows(test.features, pairs.b), pairs.same);
      r.accuracy = v.accuracy;
      r.threshold = v.threshold;
      break;
    }
  }
  return r;
}

// Everything that stays fixed while t varies.
struct Prepared {
  Matrix input;  // features after optional pre-normalization
  Split parts;
  LabeledSet before_train;
  LabeledSet before_test;
  PairSet pairs;
};

Prepared prepare(const Matrix& features, const std::vector<int>& labels,
                 const EvalParams& params, std::uint64_t seed) {
  if (labels.size() != features.rows()) {
    fail(ErrorKind::DimensionMismatch, "labels (" + std::to_string(labels.size()) +
                                           ") do not match feature rows (" +
                                           std::to_string(features.rows()) + ")");
  }
  Prepared p;
  p.input = params.l2 == L2Mode::Before ? l2_normalized(features) : features;
  p.parts = split(p.input, labels, params.test_fraction, seed);
  p.before_train = p.parts.train;
  p.before_test = p.parts.test;
  if (params.l2 == L2Mode::After) {
    p.before_train.features = l2_normalized(p.before_train.features);
    p.before_test.features = l2_normalized(p.before_test.features);
  }
  if (params.evaluator == Evaluator::PairVerify) p.pairs = sample_pairs(p.parts.test.labels, seed);
  return p;
}

PostprocessModel fit_model(const Prepared& p, std::size_t t, const EvalParams& params) {
  const Matrix& source = params.fit_on == FitOn::All ? p.input : p.parts.train.features;
  return fit(source, t, params.pca_dim);
}

EvalReport run_compare(const Prepared& p, const PostprocessModel& model, std::size_t t,
                       const EvalParams& params, std::uint64_t seed) {
  EvalReport report;
  report.evaluator = params.evaluator;
  report.params = params;
  report.seed = seed;
  report.train_size = p.parts.train.labels.size();
  report.test_size = p.parts.test.labels.size();
  report.t_used = t;
  report.pair_count = p.pairs.same.size();

  const ArmResult before = evaluate_arm(p.before_train, p.before_test, params, p.pairs);

  LabeledSet train{transform(p.parts.train.features, model), p.parts.train.labels};
  LabeledSet test{transform(p.parts.test.features, model), p.parts.test.labels};
  if (params.l2 == L2Mode::After) {
    train.features = l2_normalized(train.features);
    test.features = l2_normalized(test.features);
  }
  const ArmResult after = evaluate_arm(train, test, params, p.pairs);

  report.accuracy_before = before.accuracy;
  report.accuracy_after = after.accuracy;
  report.threshold_before = before.threshold;
  report.threshold_after = after.threshold;
  report.per_class_before = before.per_class;
  report.per_class_after = after.per_class;
  return report;
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, E>> table,
             const char* what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  fail(ErrorKind::InvalidArgument, std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Evaluator e) {
  switch (e) {
    case Evaluator::NearestCentroid: return "nearest_centroid";
    case Evaluator::Knn: return "knn";
    case Evaluator::PairVerify: return "pair_verify";
  }
  return "?";
}

std::string_view to_string(Metric m) { return m == Metric::Euclidean ? "euclidean" : "cosine"; }
std::string_view to_string(FitOn f) { return f == FitOn::Train ? "train" : "all"; }

std::string_view to_string(L2Mode m) {
  switch (m) {
    case L2Mode::None: return "none";
    case L2Mode::Before: return "before";
    case L2Mode::After: return "after";
  }
  return "?";
}

Evaluator parse_evaluator(std::string_view s) {
  return parse_enum<Evaluator>(s,
                               {{"nearest_centroid", Evaluator::NearestCentroid},
                                {"knn", Evaluator::Knn},
                                {"pair_verify", Evaluator::PairVerify}},
                               "evaluator");
}

Metric parse_metric(std::string_view s) {
  return parse_enum<Metric>(s, {{"euclidean", Metric::Euclidean}, {"cosine", Metric::Cosine}},
                            "metric");
}

FitOn parse_fit_on(std::string_view s) {
  return parse_enum<FitOn>(s, {{"train", FitOn::Train}, {"all", FitOn::All}}, "fit-on mode");
}

L2Mode parse_l2_mode(std::string_view s) {
  return parse_enum<L2Mode>(
      s, {{"none", L2Mode::None}, {"before", L2Mode::Before}, {"after", L2Mode::After}},
      "l2 mode");
}

Split split(const Matrix& features, const std::vector<int>& labels, double test_fraction,
            std::uint64_t seed) {
  const std::size_t n = features.rows();
  if (labels.size() != n) fail(ErrorKind::DimensionMismatch, "labels do not match feature rows");
  if (n < 2) fail(ErrorKind::InvalidArgument, "split needs at least 2 rows");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail(ErrorKind::InvalidArgument, "test fraction must lie in (0, 1)");
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  for (const auto& [cls, rows] : by_class) {
    if (rows.size() < 2) {
      fail(ErrorKind::InvalidArgument,
           "class " + std::to_string(cls) + " has a single example and cannot be split");
    }
  }

  // Largest-remainder apportionment of the total test count.
  const auto total = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<std::size_t> quota;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  std::size_t c = 0;
  for (const auto& [cls, rows] : by_class) {
    const double ideal = test_fraction * static_cast<double>(rows.size());
    const auto whole = static_cast<std::size_t>(std::floor(ideal));
    quota.push_back(whole);
    assigned += whole;
    remainders.emplace_back(ideal - static_cast<double>(whole), c++);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r, ++assigned) {
    ++quota[remainders[r].second];
  }

  SplitMix64 rng(seed);
  Split out;
  c = 0;
  for (auto& [cls, rows] : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[rng.below(i)]);
    }
    const std::size_t take = std::clamp<std::size_t>(quota[c++], 1, rows.size() - 1);
    out.test_index.insert(out.test_index.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    out.train_index.insert(out.train_index.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(out.test_index.begin(), out.test_index.end());
  std::sort(out.train_index.begin(), out.train_index.end());
  out.train = {select_rows(features, out.train_index), select_labels(labels, out.train_index)};
  out.test = {select_rows(features, out.test_index), select_labels(labels, out.test_index)};
  return out;
}

std::vector<int> nearest_centroid(const LabeledSet& train, const Matrix& test) {
  check_train(train, test);
  const std::size_t d = train.features.cols();
  std::map<int, std::pair<Vector, std::size_t>> sums;
  for (std::size_t i = 0; i < train.labels.size(); ++i) {
    auto& [sum, count] = sums[train.labels[i]];
    if (sum.empty()) sum.assign(d, 0.0);
    const auto r = train.features.row(i);
    for (std::size_t j = 0; j < d; ++j) sum[j] += r[j];
    ++count;
  }
  std::vector<std::pair<int, Vector>> centroids;
  for (auto& [cls, sc] : sums) {
    for (double& x : sc.first) x /= static_cast<double>(sc.second);
    centroids.emplace_back(cls, std::move(sc.first));
  }

  std::vector<int> pred(test.rows());
  for (std::size_t i = 0; i < test.rows(); ++i) {
    const auto x = test.row(i);
    double best = std::numeric_limits<double>::infinity();
    int best_cls = centroids.front().first;
    for (const auto& [cls, mu] : centroids) {
      const double dist = squared_distance(x, mu);
      if (dist < best) {
        best = dist;
        best_cls = cls;
      }
    }
    pred[i] = best_cls;
  }
  return pred;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return -1.0;
  return dot(a, b) / (na * nb);
}

std::vector<int> knn(const LabeledSet& train, const Matrix& test, std::size_t k, Metric metric) {
  check_train(train, test);
  if (k == 0) fail(ErrorKind::InvalidArgument, "k must be at least 1");
  const std::size_t n = train.labels.size();
  if (k > n) {
    fail(ErrorKind::InvalidArgument,
         "k=" + std::to_string(k) + " exceeds training size " + std::to_string(n));
  }
  std::vector<int> pred(test.rows());
  std::vector<std::pair<double, std::size_t>> ranked(n);
  for (std::size_t i = 0; i < test.rows(); ++i) {
    const auto x = test.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      // Smaller key means closer.
      const double key = metric == Metric::Euclidean
                             ? squared_distance(x, train.features.row(j))
                             : -cosine_similarity(x, train.features.row(j));
      ranked[j] = {key, j};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
    std::map<int, std::size_t> votes;
    for (std::size_t r = 0; r < k; ++r) ++votes[train.labels[ranked[r].second]];
    int best_cls = votes.begin()->first;
    std::size_t best_votes = 0;
    for (const auto& [cls, v] : votes) {
      if (v > best_votes) {
        best_votes = v;
        best_cls = cls;
      }
    }
    pred[i] = best_cls;
  }
  return pred;
}

VerifyResult verify_pairs(const Matrix& a, const Matrix& b, const std::vector<bool>& same) {
  if (a.rows() != b.rows() || a.rows() != same.size()) {
    fail(ErrorKind::DimensionMismatch, "pair inputs have mismatched lengths");
  }
  if (a.cols() != b.cols()) fail(ErrorKind::DimensionMismatch, "pair features differ in width");
  const std::size_t n = same.size();
  if (n == 0) fail(ErrorKind::EmptyInput, "no pairs to verify");

  std::vector<std::pair<double, bool>> sims(n);
  std::size_t same_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sims[i] = {cosine_similarity(a.row(i), b.row(i)), same[i]};
    if (same[i]) ++same_count;
  }
  std::sort(sims.begin(), sims.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  // Threshold -inf: everything predicted "same".
  std::size_t correct = same_count;
  VerifyResult best{-std::numeric_limits<double>::infinity(),
                    static_cast<double>(correct) / static_cast<double>(n)};
  std::size_t best_correct = correct;
  std::size_t i = 0;
  while (i < n) {
    const double value = sims[i].first;
    std::size_t j = i;
    while (j < n && sims[j].first == value) {
      if (sims[j].second) {
        --correct;
      } else {
        ++correct;
      }
      ++j;
    }
    const double threshold = j < n ? 0.5 * (value + sims[j].first)
                                   : std::numeric_limits<double>::infinity();
    if (correct > best_correct) {
      best_correct = correct;
      best = {threshold, static_cast<double>(correct) / static_cast<double>(n)};
    }
    i = j;
  }
  return best;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    fail(ErrorKind::DimensionMismatch, "prediction and label counts differ");
  }
  if (truth.empty()) fail(ErrorKind::EmptyInput, "no predictions to score");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

EvalReport compare(const Matrix& features, const std::vector<int>& labels, std::size_t t,
                   const EvalParams& params, std::uint64_t seed) {
  const Prepared p = prepare(features, labels, params, seed);
  return run_compare(p, fit_model(p, t, params), t, params, seed);
}

std::vector<SweepRow> sweep(const Matrix& features, const std::vector<int>& labels,
                            std::size_t t_max, const EvalParams& params, std::uint64_t seed) {
  const Prepared p = prepare(features, labels, params, seed);
  const double m_before = isotropy_empirical(p.input);
  std::vector<SweepRow> rows;
  rows.reserve(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    const PostprocessModel model = fit_model(p, t, params);
    SweepRow row;
    row.report = run_compare(p, model, t, params, seed);
    row.m_empirical_before = m_before;
    row.m_empirical_after = isotropy_empirical(transform(p.input, model));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fpp
