#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace upb {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical thresholds shared by every verdict in the library.
///
/// zero_tol is used for inner products and matrix entries (relative to the
/// operand norms wherever a scale is available), rank_tol is a singular-value
/// cutoff relative to the largest singular value, and eig_tol bounds how
/// negative an eigenvalue may be before a matrix is considered indefinite.
struct ToleranceConfig {
  double zero_tol = 1e-9;
  double rank_tol = 1e-9;
  double eig_tol = 1e-9;

  void validate() const;
};

/// Local dimensions of a multipartite system, in party order.
class SystemDims {
 public:
  SystemDims() = default;
  SystemDims(std::vector<std::size_t> dims, std::vector<std::string> labels = {});
  SystemDims(std::initializer_list<std::size_t> dims) : SystemDims(std::vector<std::size_t>(dims)) {}

  std::size_t parties() const { return dims_.size(); }
  std::size_t operator[](std::size_t party) const { return dims_.at(party); }
  std::size_t total() const;
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t party) const { return labels_.at(party); }

  /// Row-major composite index of a tuple of local indices.
  std::size_t composite(std::span<const std::size_t> local) const;
  /// Inverse of composite().
  std::vector<std::size_t> split(std::size_t index) const;

  bool operator==(const SystemDims& other) const { return dims_ == other.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
};

/// A split of the parties into two non-empty complementary groups.
class Bipartition {
 public:
  Bipartition(std::vector<std::size_t> left, std::vector<std::size_t> right);

  /// {party} versus every other party.
  static Bipartition solo_vs_rest(std::size_t party, std::size_t parties);
  /// Parses "A|BC" style cuts against the party labels of dims.
  static Bipartition parse(const std::string& text, const SystemDims& dims);

  const std::vector<std::size_t>& left() const { return left_; }
  const std::vector<std::size_t>& right() const { return right_; }

  void validate_for(const SystemDims& dims) const;
  std::string to_string(const SystemDims& dims) const;

 private:
  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
};

/// Kronecker product with row-major composite indexing: result[i*dim(v)+j] = u[i]*v[j].
ComplexVector kron(const ComplexVector& u, const ComplexVector& v);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron_all(std::span<const ComplexVector> factors);

/// Reshapes a composite vector into a (left dims) x (right dims) matrix.
ComplexMatrix matricize(const ComplexVector& v, const SystemDims& dims, const Bipartition& cut);

/// Number of singular values above rank_tol * sigma_max. The zero matrix has rank 0.
std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol = {});
std::size_t rank(const RealMatrix& m, const ToleranceConfig& tol = {});

/// <u|v>, conjugate-linear in u.
Complex inner(const ComplexVector& u, const ComplexVector& v);

/// |<u|v>| / (|u| |v|); zero when either vector vanishes.
double relative_overlap(const ComplexVector& u, const ComplexVector& v);

/// Orthonormal basis of the (numerical) kernel, one vector per column.
std::vector<ComplexVector> nullspace(const ComplexMatrix& m, const ToleranceConfig& tol = {});
/// Real variant; the kernel basis is returned as the columns of a matrix.
RealMatrix nullspace(const RealMatrix& m, const ToleranceConfig& tol = {});

struct EigenDecomposition {
  RealVector values;     ///< descending
  ComplexMatrix vectors; ///< column k belongs to values[k]
};

/// Spectral decomposition of a Hermitian matrix. Throws std::invalid_argument
/// when the input deviates from Hermitian by more than zero_tol.
EigenDecomposition eigh(const ComplexMatrix& m, const ToleranceConfig& tol = {});

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Transposes the index pair of one party.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SystemDims& dims, std::size_t party);

/// Rows S, columns T, in the given orders.
ComplexMatrix submatrix(const ComplexMatrix& e, std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols);

/// Computational-basis vector of dimension dim.
ComplexVector basis_vector(std::size_t dim, std::size_t index);

/// exp(2 pi i k / n), with k reduced modulo n first.
Complex root_of_unity(std::size_t n, long long k);

double max_abs(const ComplexMatrix& m);

}  // namespace upb
