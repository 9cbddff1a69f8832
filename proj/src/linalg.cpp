#include "upb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace upb {

void ToleranceConfig::validate() const {
  if (!(zero_tol > 0.0) || !(rank_tol > 0.0) || !(eig_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

SystemDims::SystemDims(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.size() < 2) throw std::invalid_argument("a system needs at least two parties");
  for (auto d : dims_) {
    if (d < 2) throw std::invalid_argument("every local dimension must be at least 2");
  }
  if (labels_.empty()) {
    for (std::size_t p = 0; p < dims_.size(); ++p) labels_.push_back(std::string(1, static_cast<char>('A' + p)));
  }
  if (labels_.size() != dims_.size()) throw std::invalid_argument("one label per party required");
}

std::size_t SystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SystemDims::composite(std::span<const std::size_t> local) const {
  if (local.size() != dims_.size()) throw DimensionError("local index tuple has wrong length");
  std::size_t index = 0;
  for (std::size_t p = 0; p < dims_.size(); ++p) {
    if (local[p] >= dims_[p]) throw std::out_of_range("local index out of range");
    index = index * dims_[p] + local[p];
  }
  return index;
}

std::vector<std::size_t> SystemDims::split(std::size_t index) const {
  std::vector<std::size_t> local(dims_.size());
  for (std::size_t p = dims_.size(); p-- > 0;) {
    local[p] = index % dims_[p];
    index /= dims_[p];
  }
  return local;
}

Bipartition::Bipartition(std::vector<std::size_t> left, std::vector<std::size_t> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.empty() || right_.empty()) throw std::invalid_argument("both sides of a cut must be non-empty");
}

Bipartition Bipartition::solo_vs_rest(std::size_t party, std::size_t parties) {
  if (party >= parties) throw std::out_of_range("party index out of range");
  std::vector<std::size_t> rest;
  for (std::size_t p = 0; p < parties; ++p) {
    if (p != party) rest.push_back(p);
  }
  return Bipartition({party}, std::move(rest));
}

Bipartition Bipartition::parse(const std::string& text, const SystemDims& dims) {
  const auto bar = text.find('|');
  if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos) {
    throw std::invalid_argument("cut must look like X|YZ: " + text);
  }
  auto side = [&](const std::string& part) {
    std::vector<std::size_t> parties;
    for (char ch : part) {
      const auto& labels = dims.labels();
      auto it = std::find(labels.begin(), labels.end(), std::string(1, ch));
      if (it == labels.end()) throw std::invalid_argument("unknown party '" + std::string(1, ch) + "' in cut " + text);
      parties.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    return parties;
  };
  Bipartition cut(side(text.substr(0, bar)), side(text.substr(bar + 1)));
  cut.validate_for(dims);
  return cut;
}

void Bipartition::validate_for(const SystemDims& dims) const {
  std::vector<int> seen(dims.parties(), 0);
  for (auto p : left_) {
    if (p >= dims.parties()) throw std::invalid_argument("cut references a missing party");
    ++seen[p];
  }
  for (auto p : right_) {
    if (p >= dims.parties()) throw std::invalid_argument("cut references a missing party");
    ++seen[p];
  }
  for (int s : seen) {
    if (s != 1) throw std::invalid_argument("cut sides must partition the parties");
  }
}

std::string Bipartition::to_string(const SystemDims& dims) const {
  std::string out;
  for (auto p : left_) out += dims.label(p);
  out += '|';
  for (auto p : right_) out += dims.label(p);
  return out;
}

ComplexVector kron(const ComplexVector& u, const ComplexVector& v) {
  ComplexVector out(u.size() * v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out.segment(i * v.size(), v.size()) = u[i] * v;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron_all(std::span<const ComplexVector> factors) {
  if (factors.empty()) throw std::invalid_argument("kron_all needs at least one factor");
  ComplexVector out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

ComplexMatrix matricize(const ComplexVector& v, const SystemDims& dims, const Bipartition& cut) {
  cut.validate_for(dims);
  if (static_cast<std::size_t>(v.size()) != dims.total()) {
    throw DimensionError("vector dimension does not match the system");
  }
  std::size_t rows = 1;
  std::size_t cols = 1;
  for (auto p : cut.left()) rows *= dims[p];
  for (auto p : cut.right()) cols *= dims[p];

  ComplexMatrix m(rows, cols);
  for (std::size_t index = 0; index < dims.total(); ++index) {
    const auto local = dims.split(index);
    std::size_t r = 0;
    std::size_t c = 0;
    for (auto p : cut.left()) r = r * dims[p] + local[p];
    for (auto p : cut.right()) c = c * dims[p] + local[p];
    m(r, c) = v[index];
  }
  return m;
}

namespace {

template <typename Matrix>
RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

template <typename Matrix>
std::size_t rank_impl(const Matrix& m, const ToleranceConfig& tol) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cutoff = tol.rank_tol * s[0];
  return static_cast<std::size_t>((s.array() > cutoff).count());
}

template <typename Matrix>
Matrix nullspace_impl(const Matrix& m, const ToleranceConfig& tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol.rank_tol * s[0] : 0.0;
  Eigen::Index kept = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] > cutoff) ++kept;
  }
  return svd.matrixV().rightCols(n - kept);
}

}  // namespace

std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol) { return rank_impl(m, tol); }
std::size_t rank(const RealMatrix& m, const ToleranceConfig& tol) { return rank_impl(m, tol); }

Complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw DimensionError("inner product of vectors with different dimensions");
  return u.dot(v);
}

double relative_overlap(const ComplexVector& u, const ComplexVector& v) {
  const double scale = u.norm() * v.norm();
  if (scale == 0.0) return 0.0;
  return std::abs(inner(u, v)) / scale;
}

std::vector<ComplexVector> nullspace(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const ComplexMatrix basis = nullspace_impl(m, tol);
  std::vector<ComplexVector> out;
  out.reserve(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) out.emplace_back(basis.col(k));
  return out;
}

RealMatrix nullspace(const RealMatrix& m, const ToleranceConfig& tol) { return nullspace_impl(m, tol); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

EigenDecomposition eigh(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) throw DimensionError("eigh needs a square matrix");
  if (!is_hermitian(m, tol.zero_tol)) throw std::invalid_argument("eigh: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver did not converge");
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SystemDims& dims, std::size_t party) {
  if (party >= dims.parties()) throw std::out_of_range("partial_transpose: bad party index");
  const auto n = static_cast<Eigen::Index>(dims.total());
  if (rho.rows() != n || rho.cols() != n) throw DimensionError("partial_transpose: matrix does not match dims");

  std::size_t stride = 1;
  for (std::size_t p = party + 1; p < dims.parties(); ++p) stride *= dims[p];
  const std::size_t d = dims[party];

  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t ri = (static_cast<std::size_t>(r) / stride) % d;
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::size_t ci = (static_cast<std::size_t>(c) / stride) % d;
      // swap the party's row and column digits
      const auto r2 = static_cast<Eigen::Index>(r + (static_cast<long long>(ci) - static_cast<long long>(ri)) * static_cast<long long>(stride));
      const auto c2 = static_cast<Eigen::Index>(c + (static_cast<long long>(ri) - static_cast<long long>(ci)) * static_cast<long long>(stride));
      out(r2, c2) = rho(r, c);
    }
  }
  return out;
}

ComplexMatrix submatrix(const ComplexMatrix& e, std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols) {
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(e.rows())) throw std::out_of_range("submatrix: row index out of range");
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] >= static_cast<std::size_t>(e.cols())) throw std::out_of_range("submatrix: column index out of range");
      out(i, j) = e(rows[i], cols[j]);
    }
  }
  return out;
}

ComplexVector basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("basis_vector: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return v;
}

Complex root_of_unity(std::size_t n, long long k) {
  const auto nn = static_cast<long long>(n);
  const long long r = ((k % nn) + nn) % nn;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace upb
