#include "upb/entanglement.hpp"

namespace upb {

void DensityMatrix::validate(const ToleranceConfig& tol) const {
  if (static_cast<std::size_t>(matrix.rows()) != dims.total() || matrix.rows() != matrix.cols()) {
    throw DimensionError("density matrix does not match dims");
  }
  if (!is_hermitian(matrix, tol.zero_tol)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > 1e-10) throw std::invalid_argument("density matrix trace is not 1");
  const auto eig = eigh(matrix, tol);
  if (eig.values.minCoeff() < -tol.eig_tol) throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityMatrix upb_to_state(const StateSet& set, const SystemDims& dims, const ToleranceConfig& tol) {
  if (set.size() >= dims.total()) throw std::invalid_argument("upb_to_state: the set spans the whole space");
  const ComplexMatrix complement = complement_projector(set, dims, tol);
  const double k = static_cast<double>(dims.total() - set.size());
  return {complement / k, dims};
}

PPTReport check_ppt(const DensityMatrix& rho, const SeesawConfig& cfg, const ToleranceConfig& tol) {
  rho.validate(tol);
  PPTReport report;
  report.ppt = true;
  for (std::size_t p = 0; p < rho.dims.parties(); ++p) {
    const ComplexMatrix pt = partial_transpose(rho.matrix, rho.dims, p);
    const auto eig = eigh(pt, tol);
    report.min_pt_eigenvalue.push_back(eig.values.minCoeff());
    report.pt_trace.push_back(pt.trace().real());
    if (eig.values.minCoeff() < -tol.eig_tol) report.ppt = false;
  }

  const auto eig = eigh(rho.matrix, tol);
  const double cutoff = tol.rank_tol * std::max(eig.values.maxCoeff(), 0.0);
  Eigen::Index r = 0;
  while (r < eig.values.size() && eig.values[r] > cutoff) ++r;
  report.rank = static_cast<std::size_t>(r);

  const ComplexMatrix q = eig.vectors.leftCols(r);
  report.range_evidence = seesaw_product_overlap(q * q.adjoint(), rho.dims, cfg, tol);
  report.range_has_product = report.range_evidence.best_overlap >= 1.0 - 1e-6;
  return report;
}

}  // namespace upb
