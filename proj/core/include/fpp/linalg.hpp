#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fpp {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Each row is one feature vector when the
/// matrix holds a feature set.
///
/// Constructors that take data reject NaN/Inf entries. Element access through
/// operator() is unchecked, so code that writes entries directly is responsible
/// for keeping them finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix from_rows(const std::vector<Vector>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One eigenvalue/eigenvector pair of a symmetric positive semidefinite matrix.
/// The vector has unit norm and its sign is canonical: the first entry whose
/// magnitude exceeds 1e-12 is positive.
struct EigenPair {
  double value = 0.0;
  Vector vector;
};

/// Solver controls for the iterative eigensolvers.
struct EigenOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

// Small vector helpers used across the library.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
Vector matvec(const Matrix& m, std::span<const double> v);

/// Flips the sign of `v` so that its first entry with |x| > 1e-12 is positive.
void canonicalize_sign(std::span<double> v);

Vector column_mean(const Matrix& features);
Matrix subtract_row(const Matrix& features, std::span<const double> v);

/// (1/N) * Fcᵀ Fc for an N×D matrix Fc. The result is exactly symmetric.
Matrix scatter(const Matrix& centered);

/// (1/N) * Fc Fcᵀ, the N×N Gram form of scatter().
Matrix gram(const Matrix& centered);

/// Unnormalized Aᵀ A.
Matrix cross_product(const Matrix& a);

/// Largest absolute difference between S(i,j) and S(j,i).
double asymmetry(const Matrix& s);

/// Top-k eigenpairs of a symmetric PSD matrix by power iteration with
/// Hotelling deflation, sorted by descending eigenvalue.
///
/// Every returned pair satisfies ‖S v − λ v‖₂ ≤ tol · max(1, λ). The iterate
/// is re-orthogonalized against already accepted vectors on every step, which
/// keeps the returned set orthonormal and lets the solver walk into the null
/// space once the positive spectrum is exhausted.
///
/// Throws Error(NotSymmetric) when the input asymmetry exceeds 1e-8 and
/// ConvergenceError when some pair misses the residual target after max_iter
/// iterations.
std::vector<EigenPair> top_eigenpairs(const Matrix& s, std::size_t k,
                                      const EigenOptions& options = {});

/// Same pairs as top_eigenpairs(scatter(centered), k) but computed from the
/// N×N Gram matrix and back-projected. Requires centered.rows() < centered.cols().
std::vector<EigenPair> gram_eigenpairs(const Matrix& centered, std::size_t k,
                                       const EigenOptions& options = {});

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
/// sorted by descending eigenvalue. Used where the whole spectrum is needed;
/// unlike power iteration it is insensitive to clustered eigenvalues.
std::vector<EigenPair> symmetric_eigen(const Matrix& s);

}  // namespace fpp
