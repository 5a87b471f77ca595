// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fpp/error.hpp"
#include "fpp/eval.hpp"
#include "fpp/io.hpp"
#include "fpp/isotropy.hpp"
#include "fpp/linalg.hpp"
#include "fpp/postprocess.hpp"
#include "fpp/synth.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace {

using fpp::Matrix;
namespace io = fpp::io;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double row_norm(std::span<const double> r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return std::sqrt(s);
}

fpp::SynthSpec spiked_family(std::uint64_t seed) {
  fpp::SynthSpec spec;
  spec.n_per_class = 2000;
  spec.n_classes = 1;
  spec.dim = 32;
  spec.offset_norm = 5.0;
  spec.spike_variances = {50.0, 20.0};
  spec.base_variance = 1.0;
  spec.seed = seed;
  return spec;
}

fpp::SynthSpec classed_family(std::uint64_t seed, std::vector<double> spikes) {
  fpp::SynthSpec spec = spiked_family(seed);
  spec.n_per_class = 500;
  spec.n_classes = 4;
  spec.class_sep = 6.0;
  spec.spike_variances = std::move(spikes);
  return spec;
}

Outcome eigensolver_correctness() {
  Outcome o;
  Stopwatch clock;
  std::mt19937_64 rng(1001);
  double worst_value = 0.0, worst_ortho = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 8);
    const Matrix s = oracle::random_psd(rng, d);
    const auto pairs = fpp::top_eigenpairs(s, d);
    const auto ref = oracle::jacobi(oracle::to_dense(s));
    for (std::size_t k = 0; k < d; ++k) {
      worst_value = std::max(worst_value, std::abs(pairs[k].value - ref.values[k]));
      for (std::size_t j = 0; j < d; ++j) {
        const double want = j == k ? 1.0 : 0.0;
        worst_ortho = std::max(worst_ortho,
                               std::abs(fpp::dot(pairs[k].vector, pairs[j].vector) - want));
      }
    }
  }
  const double secs = clock.seconds();
  o.require(worst_value <= 1e-8, fmt("eigenvalue error %.3g > 1e-8", worst_value));
  o.require(worst_ortho <= 1e-8, fmt("orthonormality error %.3g > 1e-8", worst_ortho));
  o.require(secs < 5.0, fmt("took %.2fs", secs));
  if (o.pass)
    o.detail = fmt("max |dλ| %.2g, max orthonormality error %.2g, %.2fs", worst_value,
                   worst_ortho, secs);
  return o;
}

Outcome postprocess_invariants() {
  Outcome o;
  Stopwatch clock;
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> n_dist(2, 500), d_dist(1, 64), t_dist(0, 5);
  std::uniform_real_distribution<double> scale(0.1, 20.0), shift(-50.0, 50.0);
  double worst_mean = 0.0, worst_proj = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    const std::size_t t = std::min({t_dist(rng), d, n - 1});
    Matrix f = oracle::random_matrix(rng, n, d, scale(rng));
    std::vector<double> offset(d);
    for (double& x : offset) x = shift(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) f(i, j) += offset[j];
    const auto [model, out] = fpp::fit_transform(f, t);

    double mean_row = 0.0, max_row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = row_norm(f.row(i));
      mean_row += r / static_cast<double>(n);
      max_row = std::max(max_row, r);
    }
    worst_mean = std::max(worst_mean, fpp::norm2(fpp::column_mean(out)) / mean_row);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& u : model.directions)
        worst_proj = std::max(worst_proj, std::abs(fpp::dot(u, out.row(i))) / (1.0 + max_row));
  }
  const double secs = clock.seconds();
  o.require(worst_mean <= 1e-8, fmt("mean norm ratio %.3g > 1e-8", worst_mean));
  o.require(worst_proj <= 1e-8, fmt("residual projection ratio %.3g > 1e-8", worst_proj));
  o.require(secs < 5.0, fmt("took %.2fs", secs));
  if (o.pass)
    o.detail = fmt("max mean ratio %.2g, max projection ratio %.2g, %.2fs", worst_mean,
                   worst_proj, secs);
  return o;
}

Outcome isotropy_closed_forms() {
  Outcome o;
  // Zero-mean data: shuffled ± row pairs with dyadic entries, so every
  // partial column sum is exact and the column sums are exactly zero.
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> grid(-512, 512);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t half = 1 + trial, d = 1 + trial % 7;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < half; ++i) {
      std::vector<double> r(d);
      for (double& x : r) x = grid(rng) / 8.0;
      rows.push_back(r);
      for (double& x : r) x = -x;
      rows.push_back(r);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    const Matrix f = Matrix::from_rows(rows);
    o.require(fpp::isotropy_first_order(f) == 1.0, "first-order measure of zero-mean data != 1");
  }
  // Equal singular values, zero mean: ±c·e_i frames.
  double worst = 0.0;
  for (std::size_t d = 1; d <= 8; ++d)
    for (double c : {0.25, 1.0, 3.0}) {
      Matrix f(2 * d, d);
      for (std::size_t i = 0; i < d; ++i) {
        f(i, i) = c;
        f(d + i, i) = -c;
      }
      const auto r = fpp::isotropy_report(f);
      worst = std::max({worst, std::abs(r.m_second_order - 1.0), std::abs(r.m_empirical - 1.0),
                        std::abs(r.m_first_order - 1.0)});
    }
  o.require(worst <= 1e-9, fmt("frame measures deviate from 1 by %.3g", worst));
  if (o.pass) o.detail = fmt("first order exactly 1; frame deviation %.2g", worst);
  return o;
}

Outcome isotropy_improvement() {
  Outcome o;
  Stopwatch clock;
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix f = fpp::generate(spiked_family(seed)).features;
    const Matrix g = fpp::fit_transform(f, 2).second;
    if (fpp::isotropy_empirical(g) > fpp::isotropy_empirical(f)) ++improved;
  }
  const double secs = clock.seconds();
  o.require(improved >= 9, fmt("improved in %.0f/10 seeds", improved));
  o.require(secs < 30.0, fmt("took %.2fs", secs));
  if (o.pass) o.detail = fmt("improved in %.0f/10 seeds, %.2fs", improved, secs);
  return o;
}

Outcome classification_improvement() {
  Outcome o;
  Stopwatch clock;
  std::vector<double> before, after;
  double gain = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = fpp::generate(classed_family(seed, {50.0, 20.0}));
    const auto r = fpp::compare(data.features, data.labels, 2, {}, seed);
    before.push_back(r.accuracy_before);
    after.push_back(r.accuracy_after);
    gain += (r.accuracy_after - r.accuracy_before) / 10.0;
  }
  const double secs = clock.seconds();
  const double mb = median(before), ma = median(after);
  o.require(ma >= mb, fmt("median after %.4f < median before %.4f", ma, mb));
  o.require(gain >= 0.0, fmt("mean improvement %.4f < 0", gain));
  o.require(secs < 60.0, fmt("took %.2fs", secs));
  if (o.pass)
    o.detail = fmt("median %.4f -> %.4f, mean gain %+.4f", mb, ma, gain) +
               fmt(", %.2fs", secs);
  return o;
}

Outcome sweep_shape() {
  Outcome o;
  Stopwatch clock;
  int best_at_one = 0;
  double worst_drift = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = fpp::generate(classed_family(seed, {50.0}));
    const auto rows = fpp::sweep(data.features, data.labels, 10, {}, seed);
    // First t reaching the maximum; a tie with t = 0 does not count for t = 1.
    std::size_t best = 0;
    for (std::size_t t = 1; t < rows.size(); ++t)
      if (rows[t].report.accuracy_after > rows[best].report.accuracy_after) best = t;
    if (best == 1) ++best_at_one;

    for (std::size_t pca_dim : {8u, 16u, 24u, 32u}) {
      fpp::EvalParams params;
      params.pca_dim = pca_dim;
      const auto capped = fpp::sweep(data.features, data.labels, std::min<std::size_t>(10, pca_dim),
                                     params, seed);
      for (std::size_t t = 0; t < capped.size(); ++t) {
        worst_drift = std::max(worst_drift, std::abs(capped[t].report.accuracy_after -
                                                     rows[t].report.accuracy_after));
        worst_drift = std::max(worst_drift, std::abs(capped[t].report.accuracy_before -
                                                     rows[t].report.accuracy_before));
      }
    }
  }
  o.require(best_at_one >= 8, fmt("best accuracy at t=1 in %.0f/10 seeds", best_at_one));
  o.require(worst_drift <= 1e-9, fmt("pca_dim changed an accuracy by %.3g", worst_drift));
  if (o.pass)
    o.detail = fmt("best at t=1 in %.0f/10 seeds, pca_dim drift %.2g, %.2fs", best_at_one,
                   worst_drift, clock.seconds());
  return o;
}

fpp::LabeledSet random_labeled(std::mt19937_64& rng, std::size_t n, std::size_t d, int classes) {
  std::uniform_int_distribution<int> cls(0, classes - 1);
  fpp::LabeledSet s{oracle::random_matrix(rng, n, d), {}};
  for (std::size_t i = 0; i < n; ++i) s.labels.push_back(cls(rng));
  return s;
}

Outcome evaluator_oracles() {
  Outcome o;
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> n_dist(10, 200), d_dist(1, 12), k_dist(1, 9);
  std::uniform_int_distribution<int> c_dist(2, 6);
  int mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = d_dist(rng);
    const auto train = random_labeled(rng, n_dist(rng), d, c_dist(rng));
    const Matrix test = oracle::random_matrix(rng, n_dist(rng), d);
    const auto got = fpp::nearest_centroid(train, test);
    for (std::size_t i = 0; i < test.rows(); ++i)
      if (got[i] != oracle::nearest_centroid_one(train.features, train.labels, test.row(i)))
        ++mismatches;
  }
  o.require(mismatches == 0, fmt("nearest-centroid mismatches: %.0f", mismatches));
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = d_dist(rng);
    const auto train = random_labeled(rng, n_dist(rng), d, c_dist(rng));
    const Matrix test = oracle::random_matrix(rng, n_dist(rng), d);
    const std::size_t k = std::min(k_dist(rng), train.labels.size());
    const bool cos = trial % 2 == 1;
    const auto got = fpp::knn(train, test, k, cos ? fpp::Metric::Cosine : fpp::Metric::Euclidean);
    for (std::size_t i = 0; i < test.rows(); ++i)
      if (got[i] != oracle::knn_one(train.features, train.labels, test.row(i), k, cos))
        ++mismatches;
  }
  o.require(mismatches == 0, fmt("k-NN mismatches: %.0f", mismatches));
  // The threshold search is compared exactly on the library's similarities;
  // the similarity itself is compared against the oracle formula to rounding.
  std::bernoulli_distribution coin(0.5);
  double worst_cos = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    const Matrix a = oracle::random_matrix(rng, n, d), b = oracle::random_matrix(rng, n, d);
    std::vector<bool> same;
    std::vector<double> sims;
    for (std::size_t i = 0; i < n; ++i) {
      same.push_back(coin(rng));
      sims.push_back(fpp::cosine_similarity(a.row(i), b.row(i)));
      worst_cos = std::max(worst_cos, std::abs(sims.back() - oracle::cosine(a.row(i), b.row(i))));
    }
    const auto got = fpp::verify_pairs(a, b, same);
    const auto [thr, acc] = oracle::verify_exhaustive(sims, same);
    if (got.accuracy != acc || got.threshold != thr) ++mismatches;
  }
  o.require(mismatches == 0, fmt("pair-verification mismatches: %.0f", mismatches));
  o.require(worst_cos <= 1e-15, fmt("cosine differs from oracle by %.3g", worst_cos));
  if (o.pass)
    o.detail = fmt("60 instances identical to brute force, cosine agreement %.2g", worst_cos);
  return o;
}

template <typename F>
bool throws_kind(F&& f, fpp::ErrorKind kind) {
  try {
    f();
  } catch (const fpp::Error& e) {
    return e.kind() == kind;
  }
  return false;
}

void put_u32(std::vector<unsigned char>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<unsigned char>(v >> (8 * i));
}

void put_f64(std::vector<unsigned char>& b, std::size_t at, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) b[at + i] = static_cast<unsigned char>(bits >> (8 * i));
}

Outcome format_round_trips() {
  using fpp::ErrorKind;
  Outcome o;
  testing_util::TempDir dir("fpp_accept_io");
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<std::size_t> n_dist(2, 120), d_dist(1, 24);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    const Matrix f = oracle::random_matrix(rng, n, d, std::ldexp(1.0, trial * 7 - 70));
    io::write_features(dir.file("f"), f);
    const Matrix g = io::read_features(dir.file("f"));
    o.require(g.rows() == n && g.cols() == d &&
                  std::memcmp(g.data().data(), f.data().data(), n * d * 8) == 0,
              "feature round trip not bitwise");

    const auto model = fpp::fit(f, std::min<std::size_t>({d, n - 1, 3}));
    io::write_model(dir.file("m"), model);
    const auto back = io::read_model(dir.file("m"));
    o.require(back == model, "model round trip not bitwise");
    o.require(io::read_bytes(dir.file("m")) == io::encode_model(back), "model re-encode differs");

    const auto iso = fpp::isotropy_report(f);
    fpp::EvalReport ev;
    ev.seed = rng();
    ev.accuracy_before = std::uniform_real_distribution<double>(0, 1)(rng);
    ev.accuracy_after = std::nextafter(ev.accuracy_before, 2.0);
    ev.per_class_after[trial] = 1.0 / 3.0;
    for (auto fmt_kind : {io::ReportFormat::Text, io::ReportFormat::Machine}) {
      io::write_text(dir.file("r"), io::render_report(iso, fmt_kind));
      o.require(io::parse_isotropy_report(io::read_text(dir.file("r")), fmt_kind) == iso,
                "isotropy report round trip differs");
      io::write_text(dir.file("e"), io::render_report(ev, fmt_kind));
      const auto er = io::parse_eval_report(io::read_text(dir.file("e")), fmt_kind);
      o.require(er.seed == ev.seed && er.accuracy_before == ev.accuracy_before &&
                    er.accuracy_after == ev.accuracy_after &&
                    er.per_class_after == ev.per_class_after,
                "eval report round trip differs");
    }
  }

  // Malformed inputs and the error each must produce.
  const auto feat = io::encode_features(Matrix{{1, 2}, {3, 4}});
  const auto model = io::encode_model(fpp::fit(Matrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}, {1, 1, 1}}, 2));
  int cases = 0;
  auto expect = [&](const char* what, ErrorKind kind, auto&& f) {
    ++cases;
    o.require(throws_kind(f, kind), std::string("malformed case '") + what + "' not rejected as " +
                                        std::string(fpp::to_string(kind)));
  };
  auto mutated = [](auto bytes, auto&& m) {
    m(bytes);
    return bytes;
  };
  expect("feature magic", ErrorKind::BadMagic, [&] {
    io::decode_features(mutated(feat, [](auto& b) { b[0] = 'X'; }));
  });
  expect("feature truncated", ErrorKind::Truncated, [&] {
    io::decode_features(std::vector<unsigned char>(feat.begin(), feat.end() - 1));
  });
  expect("feature header truncated", ErrorKind::Truncated, [&] {
    io::decode_features(std::vector<unsigned char>(feat.begin(), feat.begin() + 9));
  });
  expect("feature trailing", ErrorKind::TrailingData, [&] {
    io::decode_features(mutated(feat, [](auto& b) { b.push_back(1); }));
  });
  expect("feature version", ErrorKind::UnsupportedVersion, [&] {
    io::decode_features(mutated(feat, [](auto& b) { put_u32(b, 4, 9); }));
  });
  expect("feature dtype", ErrorKind::UnsupportedVersion, [&] {
    io::decode_features(mutated(feat, [](auto& b) { b[16] = 2; }));
  });
  expect("feature NaN", ErrorKind::NonFinite, [&] {
    io::decode_features(mutated(feat, [](auto& b) { put_f64(b, 17, std::nan("")); }));
  });
  expect("feature Inf", ErrorKind::NonFinite, [&] {
    io::decode_features(
        mutated(feat, [](auto& b) { put_f64(b, 25, std::numeric_limits<double>::infinity()); }));
  });
  expect("model magic", ErrorKind::BadMagic, [&] {
    io::decode_model(mutated(model, [](auto& b) { b[0] = 'Q'; }));
  });
  expect("model version", ErrorKind::UnsupportedVersion, [&] {
    io::decode_model(mutated(model, [](auto& b) { put_u32(b, 4, 2); }));
  });
  expect("model truncated", ErrorKind::Truncated, [&] {
    io::decode_model(std::vector<unsigned char>(model.begin(), model.end() - 4));
  });
  expect("model trailing", ErrorKind::TrailingData, [&] {
    io::decode_model(mutated(model, [](auto& b) { b.push_back(0); }));
  });
  expect("model eigenvalue order", ErrorKind::InvariantViolation, [&] {
    io::decode_model(mutated(model, [](auto& b) {
      put_f64(b, 20 + 24, 0.0);
      put_f64(b, 20 + 32, 100.0);
    }));
  });
  expect("model orthonormality", ErrorKind::InvariantViolation, [&] {
    io::decode_model(mutated(model, [](auto& b) { put_f64(b, 20 + 40, 0.5); }));
  });
  expect("labels magic", ErrorKind::BadMagic, [&] {
    io::decode_labels(mutated(io::encode_labels({1, 2}), [](auto& b) { b[1] = '?'; }));
  });
  expect("CSV ragged", ErrorKind::Parse, [&] { io::parse_csv("1,2\n3", false); });
  expect("CSV non-numeric", ErrorKind::Parse, [&] { io::parse_csv("1,b\n", false); });
  expect("CSV non-finite", ErrorKind::NonFinite, [&] { io::parse_csv("inf,1\n", false); });
  expect("report missing field", ErrorKind::Parse, [&] {
    io::parse_isotropy_report("n = 1\n", io::ReportFormat::Text);
  });
  expect("report bad JSON", ErrorKind::Parse, [&] {
    io::parse_eval_report("[1,", io::ReportFormat::Machine);
  });
  expect("missing file", ErrorKind::Io, [&] { io::read_features(dir.file("absent")); });
  if (o.pass)
    o.detail = "20 bitwise round trips of features, models and reports; " +
               std::to_string(cases) + " malformed cases typed";
  return o;
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return fpp::cli::run(args, out, err);
}

Outcome pipeline_determinism() {
  Outcome o;
  testing_util::TempDir a("fpp_accept_a"), b("fpp_accept_b");
  const std::vector<std::string> artifacts{"x.fpf",  "y.fpl",   "m.fppm",  "fit.txt",
                                           "z.fpf",  "iso.txt", "spec.json", "eval.txt",
                                           "ver.txt", "sweep.csv"};
  for (const auto* dir : {&a, &b}) {
    auto f = [&](const char* name) { return dir->file(name); };
    const std::vector<std::vector<std::string>> steps{
        {"synth", "--output", f("x.fpf"), "--labels", f("y.fpl"), "--n-per-class", "300",
         "--classes", "3", "--dim", "24", "--seed", "77"},
        {"fit", "--input", f("x.fpf"), "--model", f("m.fppm"), "--t", "2", "--output",
         f("fit.txt"), "--name", "x"},
        {"transform", "--input", f("x.fpf"), "--model", f("m.fppm"), "--output", f("z.fpf")},
        {"isotropy", "--input", f("z.fpf"), "--output", f("iso.txt")},
        {"spectrum", "--input", f("z.fpf"), "--name", "z", "--format", "machine", "--output",
         f("spec.json")},
        {"eval", "--input", f("x.fpf"), "--labels", f("y.fpl"), "--t", "2", "--evaluator", "knn",
         "--k", "5", "--seed", "3", "--output", f("eval.txt")},
        {"verify", "--input", f("x.fpf"), "--labels", f("y.fpl"), "--t", "1", "--seed", "3",
         "--output", f("ver.txt")},
        {"sweep", "--input", f("x.fpf"), "--labels", f("y.fpl"), "--t-max", "6", "--seed", "3",
         "--output", f("sweep.csv")},
    };
    for (const auto& step : steps) {
      const int code = cli(step);
      o.require(code == 0, "step '" + step[0] + "' exited with " + std::to_string(code));
    }
  }
  if (!o.pass) return o;
  for (const auto& name : artifacts) {
    const auto x = io::read_bytes(a.file(name));
    o.require(!x.empty() && x == io::read_bytes(b.file(name)), "artifact " + name + " differs");
  }
  if (o.pass) o.detail = std::to_string(artifacts.size()) + " artifacts bitwise identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "eigensolver matches Jacobi oracle", eigensolver_correctness},
      {2, "postprocessing invariants", postprocess_invariants},
      {3, "isotropy closed forms", isotropy_closed_forms},
      {4, "isotropy improves on spiked data", isotropy_improvement},
      {5, "classification does not degrade", classification_improvement},
      {6, "t sweep peaks at t=1, pca_dim inert", sweep_shape},
      {7, "evaluators match brute force", evaluator_oracles},
      {8, "format round trips and typed errors", format_round_trips},
      {9, "CLI pipeline determinism", pipeline_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
