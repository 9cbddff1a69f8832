#include <algorithm>
#include <random>

#include "upb/verify.hpp"

namespace upb {

namespace {

/// P = W W^dagger with W having one column per non-zero eigenvalue.
ComplexMatrix psd_factor(const ComplexMatrix& projector, const ToleranceConfig& tol) {
  const double scale = std::max(1.0, max_abs(projector));
  ToleranceConfig herm = tol;
  herm.zero_tol = tol.zero_tol * scale;
  const auto eig = eigh(projector, herm);
  if (eig.values.size() > 0) {
    if (eig.values.minCoeff() < -tol.eig_tol) throw std::invalid_argument("seesaw: operator is not positive semidefinite");
    if (eig.values.maxCoeff() > 1.0 + tol.eig_tol) throw std::invalid_argument("seesaw: operator eigenvalues exceed 1");
  }
  Eigen::Index kept = 0;
  while (kept < eig.values.size() && eig.values[kept] > tol.eig_tol) ++kept;
  ComplexMatrix w(projector.rows(), kept);
  for (Eigen::Index k = 0; k < kept; ++k) w.col(k) = std::sqrt(eig.values[k]) * eig.vectors.col(k);
  return w;
}

/// Contracts every column of w with the conjugated locals of all parties but one.
ComplexMatrix contract_except(const ComplexMatrix& w, const SystemDims& dims, const std::vector<ComplexVector>& locals,
                              std::size_t party) {
  ComplexMatrix out = ComplexMatrix::Zero(dims[party], w.cols());
  std::vector<std::size_t> digits(dims.parties(), 0);
  for (Eigen::Index index = 0; index < w.rows(); ++index) {
    Complex weight{1.0, 0.0};
    for (std::size_t q = 0; q < dims.parties(); ++q) {
      if (q != party) weight *= std::conj(locals[q][digits[q]]);
    }
    out.row(digits[party]) += weight * w.row(index);
    // advance the row-major digit counter
    for (std::size_t q = dims.parties(); q-- > 0;) {
      if (++digits[q] < dims[q]) break;
      digits[q] = 0;
    }
  }
  return out;
}

struct Sweeper {
  const ComplexMatrix& factor;
  const SystemDims& dims;
  const SeesawConfig& cfg;

  SeesawRun run(std::vector<ComplexVector> locals) const {
    SeesawRun result;
    for (auto& v : locals) v.normalize();
    double previous = -1.0;
    for (std::size_t sweep = 0; sweep < cfg.max_iters; ++sweep) {
      double value = 0.0;
      for (std::size_t p = 0; p < dims.parties(); ++p) {
        if (factor.cols() == 0) break;
        const ComplexMatrix w = contract_except(factor, dims, locals, p);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(w * w.adjoint());
        const Eigen::Index top = solver.eigenvalues().size() - 1;
        locals[p] = solver.eigenvectors().col(top);
        value = std::max(0.0, solver.eigenvalues()[top]);
      }
      result.objective.push_back(value);
      if (previous >= 0.0) {
        const double improvement = value - previous;
        if (improvement <= cfg.rel_improvement * std::max(value, 1e-300)) {
          result.converged = true;
          break;
        }
      }
      previous = value;
    }
    result.locals = std::move(locals);
    return result;
  }
};

}  // namespace

std::vector<ComplexVector> seesaw_initial_locals(const SystemDims& dims, std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexVector> locals;
  for (std::size_t p = 0; p < dims.parties(); ++p) {
    ComplexVector v(dims[p]);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[k] = Complex(re, im);
    }
    locals.push_back(v.normalized());
  }
  return locals;
}

SeesawRun seesaw_run(const ComplexMatrix& projector, const SystemDims& dims, std::vector<ComplexVector> initial,
                     const SeesawConfig& cfg, const ToleranceConfig& tol) {
  if (static_cast<std::size_t>(projector.rows()) != dims.total()) throw DimensionError("seesaw: operator does not match dims");
  if (initial.size() != dims.parties()) throw DimensionError("seesaw: one initial vector per party required");
  const ComplexMatrix factor = psd_factor(projector, tol);
  return Sweeper{factor, dims, cfg}.run(std::move(initial));
}

SeesawResult seesaw_product_overlap(const ComplexMatrix& projector, const SystemDims& dims, const SeesawConfig& cfg,
                                    const ToleranceConfig& tol) {
  if (static_cast<std::size_t>(projector.rows()) != dims.total() || projector.rows() != projector.cols()) {
    throw DimensionError("seesaw: operator does not match dims");
  }
  const ComplexMatrix factor = psd_factor(projector, tol);
  const Sweeper sweeper{factor, dims, cfg};

  SeesawResult best;
  double best_value = -1.0;
  for (std::size_t r = 0; r < std::max<std::size_t>(cfg.restarts, 1); ++r) {
    SeesawRun run = sweeper.run(seesaw_initial_locals(dims, cfg.seed, r));
    for (std::size_t k = 1; k < run.objective.size(); ++k) {
      if (run.objective[k] < run.objective[k - 1] - 1e-12) best.monotone = false;
    }
    const double value = run.objective.empty() ? 0.0 : run.objective.back();
    ++best.restarts_used;
    if (value > best_value) {
      best_value = value;
      best.witness.locals = std::move(run.locals);
      best.iterations = run.objective.size();
      best.converged = run.converged;
    }
  }

  // recompute the overlap directly from the dense operator
  const ComplexVector w = best.witness.vector().normalized();
  best.best_overlap = std::clamp(inner(w, projector * w).real(), 0.0, 1.0);
  best.witness.label.name = "witness";
  return best;
}

}  // namespace upb
