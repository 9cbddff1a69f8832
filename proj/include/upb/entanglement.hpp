#pragma once

#include <vector>

#include "upb/constructions.hpp"
#include "upb/linalg.hpp"
#include "upb/verify.hpp"

namespace upb {

struct DensityMatrix {
  ComplexMatrix matrix;
  SystemDims dims;

  /// Throws unless Hermitian, unit trace and positive semidefinite.
  void validate(const ToleranceConfig& tol = {}) const;
};

struct PPTReport {
  std::vector<double> min_pt_eigenvalue;  ///< one per party
  std::vector<double> pt_trace;           ///< trace of each partial transpose
  std::size_t rank = 0;
  bool ppt = false;
  SeesawResult range_evidence;  ///< best product overlap with the range projector
  bool range_has_product = false;  ///< evidence only: best_overlap >= 1 - 1e-6
};

/// (I - projector onto the set) / k with k = dim - |set|.
DensityMatrix upb_to_state(const StateSet& set, const SystemDims& dims, const ToleranceConfig& tol = {});

PPTReport check_ppt(const DensityMatrix& rho, const SeesawConfig& cfg = {}, const ToleranceConfig& tol = {});

}  // namespace upb
