#include "upb/verify.hpp"

namespace upb {

namespace {

/// Columns are the normalized vectors.
ComplexMatrix normalized_columns(const std::vector<ComplexVector>& vectors) {
  if (vectors.empty()) return ComplexMatrix();
  ComplexMatrix m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != m.rows()) throw DimensionError("vectors of different dimensions");
    const double n = vectors[k].norm();
    if (n == 0.0) throw std::invalid_argument("zero vector in state set");
    m.col(static_cast<Eigen::Index>(k)) = vectors[k] / n;
  }
  return m;
}

}  // namespace

OrthogonalityReport check_orthogonality(const std::vector<ComplexVector>& vectors, const ToleranceConfig& tol) {
  OrthogonalityReport report;
  if (vectors.size() < 2) return report;
  const ComplexMatrix q = normalized_columns(vectors);
  const ComplexMatrix gram = q.adjoint() * q;
  report.max_overlap = -1.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
      const double o = std::abs(gram(i, j));
      if (o > report.max_overlap) {
        report.max_overlap = o;
        report.worst_pair = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  report.passed = report.max_overlap <= tol.zero_tol;
  return report;
}

OrthogonalityReport check_orthogonality(const StateSet& set, const ToleranceConfig& tol) {
  return check_orthogonality(set.vectors(), tol);
}

CompletenessReport check_completeness(const StateSet& set, const RemovedStates& removed, const SystemDims& dims,
                                      const ToleranceConfig& tol) {
  CompletenessReport report;
  report.expected = dims.total();
  std::vector<ComplexVector> all;
  for (const auto& s : set.states) {
    if (s.label.tile != Tile::Stopper) all.push_back(s.vector());
  }
  for (const auto& s : removed.tiles.states) all.push_back(s.vector());
  if (!removed.stopper_replaced.locals.empty()) all.push_back(removed.stopper_replaced.vector());
  report.count = all.size();
  for (const auto& v : all) {
    if (static_cast<std::size_t>(v.size()) != dims.total()) {
      report.complete = false;
      return report;
    }
  }
  const auto ortho = check_orthogonality(all, tol);
  report.max_overlap = ortho.max_overlap;
  report.complete = ortho.passed && report.count == report.expected;
  return report;
}

ComplexMatrix complement_projector(const StateSet& set, const SystemDims& dims, const ToleranceConfig& tol) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  ComplexMatrix p = ComplexMatrix::Identity(n, n);
  if (set.states.empty()) return p;
  const auto vectors = set.vectors();
  for (const auto& v : vectors) {
    if (v.size() != n) throw DimensionError("state dimension does not match the system");
  }
  const auto ortho = check_orthogonality(vectors, tol);
  if (!ortho.passed) throw std::invalid_argument("complement_projector: states are not mutually orthogonal");
  const ComplexMatrix q = normalized_columns(vectors);
  p -= q * q.adjoint();
  return p;
}

}  // namespace upb
