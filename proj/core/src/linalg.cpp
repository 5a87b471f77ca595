#include "fpp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fpp/error.hpp"

namespace fpp {

namespace {

void require_finite(const std::vector<double>& data, std::size_t cols) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      fail(ErrorKind::NonFinite, "non-finite matrix entry at row " +
                                     std::to_string(i / cols) + ", col " +
                                     std::to_string(i % cols));
    }
  }
}

void require_square(const Matrix& s, const char* what) {
  if (s.rows() != s.cols()) {
    fail(ErrorKind::DimensionMismatch,
         std::string(what) + ": matrix is " + std::to_string(s.rows()) + "x" +
             std::to_string(s.cols()) + ", expected square");
  }
}

// Removes the components of `x` along each of the (orthonormal) `basis`
// vectors. Two passes of classical Gram-Schmidt are enough to reach working
// precision.
void orthogonalize(std::span<double> x, const std::vector<EigenPair>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : basis) {
      const double c = dot(x, p.vector);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * p.vector[i];
    }
  }
}

// Deterministic starting vector: all ones with a small Weyl-sequence
// perturbation, so it is not an exact eigenvector of structured matrices.
// Each deflation step gets a different perturbation; reusing one start would
// leave it with no component along the rest of a repeated eigenspace.
Vector start_vector(std::size_t n, std::size_t pair) {
  constexpr double kGolden = 0.6180339887498949;
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto step = static_cast<double>(pair * n + i + 1);
    x[i] = 1.0 + 0.1 * std::fmod(step * kGolden, 1.0);
  }
  return x;
}

// A unit vector orthogonal to every vector in `basis`, picked among the
// coordinate axes for determinism.
Vector complement_vector(std::size_t n, const std::vector<EigenPair>& basis) {
  Vector best;
  double best_norm = -1.0;
  for (std::size_t m = 0; m < n; ++m) {
    Vector e(n, 0.0);
    e[m] = 1.0;
    orthogonalize(e, basis);
    const double nrm = norm2(e);
    if (nrm > best_norm + 1e-12) {
      best_norm = nrm;
      best = std::move(e);
    }
    if (best_norm > 0.7) break;
  }
  for (double& v : best) v /= best_norm;
  return best;
}

Vector fresh_start(std::size_t n, const std::vector<EigenPair>& found) {
  Vector x = start_vector(n, found.size());
  const double before = norm2(x);
  orthogonalize(x, found);
  const double after = norm2(x);
  // Stagnation guard: the start lies (almost) in the span already found.
  if (after <= 1e-3 * before) return complement_vector(n, found);
  for (double& v : x) v /= after;
  return x;
}

void clamp_psd(EigenPair& p) {
  if (p.value < 0.0 && p.value >= -1e-10) p.value = 0.0;
}

void sort_descending(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorKind::DimensionMismatch,
         "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
             std::to_string(rows_ * cols_));
  }
  require_finite(data_, cols_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, cols_);
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) fail(ErrorKind::DimensionMismatch, "ragged row list");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation so that huge or tiny entries do not overflow/underflow.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double y = x / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

Vector matvec(const Matrix& m, std::span<const double> v) {
  if (m.cols() != v.size()) fail(ErrorKind::DimensionMismatch, "matvec: length mismatch");
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

void canonicalize_sign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

Vector column_mean(const Matrix& features) {
  if (features.rows() == 0) fail(ErrorKind::EmptyInput, "empty input");
  Vector mean(features.cols(), 0.0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto r = features.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) mean[j] += r[j];
  }
  const double n = static_cast<double>(features.rows());
  for (double& m : mean) m /= n;
  return mean;
}

Matrix subtract_row(const Matrix& features, std::span<const double> v) {
  if (v.size() != features.cols()) {
    fail(ErrorKind::DimensionMismatch,
         "subtract_row: vector has length " + std::to_string(v.size()) +
             ", matrix has " + std::to_string(features.cols()) + " columns");
  }
  Matrix out = features;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= v[j];
  }
  return out;
}

Matrix scatter(const Matrix& centered) {
  const std::size_t n = centered.rows();
  const std::size_t d = centered.cols();
  Matrix s(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = centered.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double ra = r[a];
      if (ra == 0.0) continue;
      for (std::size_t b = a; b < d; ++b) s(a, b) += ra * r[b];
    }
  }
  const double inv = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      s(a, b) *= inv;
      s(b, a) = s(a, b);
    }
  }
  return s;
}

Matrix gram(const Matrix& centered) {
  const std::size_t n = centered.rows();
  Matrix g(n, n);
  const double inv = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = dot(centered.row(i), centered.row(j)) * inv;
      g(j, i) = g(i, j);
    }
  }
  return g;
}

Matrix cross_product(const Matrix& a) {
  const std::size_t d = a.cols();
  Matrix s(d, d);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t p = 0; p < d; ++p) {
      const double rp = r[p];
      if (rp == 0.0) continue;
      for (std::size_t q = p; q < d; ++q) s(p, q) += rp * r[q];
    }
  }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p + 1; q < d; ++q) s(q, p) = s(p, q);
  return s;
}

double asymmetry(const Matrix& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      worst = std::max(worst, std::abs(s(i, j) - s(j, i)));
  return worst;
}

std::vector<EigenPair> top_eigenpairs(const Matrix& s, std::size_t k,
                                      const EigenOptions& options) {
  require_square(s, "top_eigenpairs");
  const std::size_t d = s.rows();
  if (k < 1 || k > d) {
    fail(ErrorKind::InvalidArgument, "top_eigenpairs: k=" + std::to_string(k) +
                                         " outside [1, " + std::to_string(d) + "]");
  }
  if (const double asym = asymmetry(s); asym > 1e-8) {
    fail(ErrorKind::NotSymmetric,
         "top_eigenpairs: input is not symmetric (asymmetry " + std::to_string(asym) + ")");
  }

  // Work on the symmetrized copy; deflation updates it in place.
  Matrix work(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) work(i, j) = 0.5 * (s(i, j) + s(j, i));

  std::vector<EigenPair> found;
  found.reserve(k);
  Vector y(d);
  for (std::size_t pair = 0; pair < k; ++pair) {
    Vector x = fresh_start(d, found);
    double lambda = 0.0;
    double best_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
      for (std::size_t i = 0; i < d; ++i) y[i] = dot(work.row(i), x);
      orthogonalize(y, found);
      lambda = dot(x, y);
      double r2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double e = y[i] - lambda * x[i];
        r2 += e * e;
      }
      const double residual = std::sqrt(r2);
      best_residual = std::min(best_residual, residual);
      if (residual <= options.tol * std::max(1.0, std::abs(lambda))) {
        converged = true;
        break;
      }
      const double ny = norm2(y);
      for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / ny;
    }
    if (!converged) {
      throw ConvergenceError("power iteration did not converge for eigenpair " +
                                 std::to_string(pair + 1) + " after " +
                                 std::to_string(options.max_iter) +
                                 " iterations (residual " + std::to_string(best_residual) + ")",
                             best_residual);
    }
    // Hotelling deflation.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) work(i, j) -= lambda * x[i] * x[j];
    canonicalize_sign(x);
    EigenPair p{lambda, std::move(x)};
    clamp_psd(p);
    found.push_back(std::move(p));
  }
  sort_descending(found);
  return found;
}

std::vector<EigenPair> gram_eigenpairs(const Matrix& centered, std::size_t k,
                                       const EigenOptions& options) {
  const std::size_t n = centered.rows();
  const std::size_t d = centered.cols();
  if (n >= d) {
    fail(ErrorKind::InvalidArgument, "gram_eigenpairs: needs fewer rows than columns");
  }
  if (k < 1 || k > d) {
    fail(ErrorKind::InvalidArgument, "gram_eigenpairs: k=" + std::to_string(k) +
                                         " outside [1, " + std::to_string(d) + "]");
  }
  std::vector<EigenPair> small;
  if (n > 0) small = top_eigenpairs(gram(centered), std::min(k, n), options);

  std::vector<EigenPair> out;
  out.reserve(k);
  const double top = small.empty() ? 0.0 : small.front().value;
  for (const auto& p : small) {
    Vector v(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = p.vector[i];
      const auto r = centered.row(i);
      for (std::size_t j = 0; j < d; ++j) v[j] += w * r[j];
    }
    orthogonalize(v, out);
    const double nrm = norm2(v);
    if (p.value > 1e-14 * std::max(top, 1e-300) && nrm > 0.0) {
      for (double& x : v) x /= nrm;
    } else {
      v = complement_vector(d, out);
    }
    canonicalize_sign(v);
    EigenPair q{p.value, std::move(v)};
    clamp_psd(q);
    out.push_back(std::move(q));
  }
  while (out.size() < k) {
    Vector v = complement_vector(d, out);
    canonicalize_sign(v);
    out.push_back({0.0, std::move(v)});
  }
  return out;
}

std::vector<EigenPair> symmetric_eigen(const Matrix& s) {
  require_square(s, "symmetric_eigen");
  if (const double asym = asymmetry(s); asym > 1e-8) {
    fail(ErrorKind::NotSymmetric,
         "symmetric_eigen: input is not symmetric (asymmetry " + std::to_string(asym) + ")");
  }
  const std::size_t n = s.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
  };
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  total = std::sqrt(total);

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-15 * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - sn * arq;
          a(r, q) = sn * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - sn * aqr;
          a(q, r) = sn * apr + c * aqr;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - sn * vrq;
          v(r, q) = sn * vrp + c * vrq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) {
    throw ConvergenceError("Jacobi eigensolver did not converge", off_norm());
  }

  std::vector<EigenPair> pairs(n);
  for (std::size_t j = 0; j < n; ++j) {
    pairs[j].value = a(j, j);
    pairs[j].vector.resize(n);
    for (std::size_t i = 0; i < n; ++i) pairs[j].vector[i] = v(i, j);
    canonicalize_sign(pairs[j].vector);
    clamp_psd(pairs[j]);
  }
  sort_descending(pairs);
  return pairs;
}

}  // namespace fpp
