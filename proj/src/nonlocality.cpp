#include <cmath>

#include "upb/verify.hpp"

namespace upb {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

ComplexVector restrict_product(const ProductState& s, const std::vector<std::size_t>& parties) {
  ComplexVector out = s.locals.at(parties.front());
  for (std::size_t k = 1; k < parties.size(); ++k) out = kron(out, s.locals.at(parties[k]));
  return out;
}

}  // namespace

ConstraintSystem op_constraints(const StateSet& set, const Bipartition& cut, const ToleranceConfig& tol) {
  cut.validate_for(set.dims);
  ConstraintSystem cs;
  cs.measuring = cut.right();
  cs.joint_dim = 1;
  for (auto p : cut.right()) cs.joint_dim *= set.dims[p];

  std::vector<ComplexVector> measured;
  measured.reserve(set.size());
  for (const auto& s : set.states) measured.push_back(restrict_product(s, cut.right()));

  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      double rel = 1.0;
      for (auto p : cut.left()) rel *= relative_overlap(set.states[i].locals[p], set.states[j].locals[p]);
      if (rel <= tol.zero_tol) continue;
      cs.rows.push_back({measured[i], measured[j], i, j});
    }
  }
  return cs;
}

RealVector hermitian_to_real(const ComplexMatrix& e) {
  const auto n = e.rows();
  RealVector x(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < n; ++a) x[k++] = e(a, a).real();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const Complex z = 0.5 * (e(a, b) + std::conj(e(b, a)));
      x[k++] = std::sqrt(2.0) * z.real();
      x[k++] = std::sqrt(2.0) * z.imag();
    }
  }
  return x;
}

ComplexMatrix real_to_hermitian(const RealVector& x, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (x.size() != n * n) throw DimensionError("real_to_hermitian: coordinate vector has the wrong length");
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < n; ++a) e(a, a) = x[k++];
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const Complex z(x[k] * kInvSqrt2, x[k + 1] * kInvSqrt2);
      k += 2;
      e(a, b) = z;
      e(b, a) = std::conj(z);
    }
  }
  return e;
}

RealMatrix constraint_matrix(const ConstraintSystem& cs) {
  const auto n = static_cast<Eigen::Index>(cs.joint_dim);
  RealMatrix m(2 * static_cast<Eigen::Index>(cs.rows.size()), n * n);
  for (std::size_t r = 0; r < cs.rows.size(); ++r) {
    const ComplexVector bra = cs.rows[r].bra.normalized();
    const ComplexVector ket = cs.rows[r].ket.normalized();
    if (bra.size() != n || ket.size() != n) throw DimensionError("constraint row does not match joint_dim");
    // coefficient of each Hermitian coordinate in <bra|E|ket>
    Eigen::RowVectorXcd coeff(n * n);
    Eigen::Index k = 0;
    for (Eigen::Index a = 0; a < n; ++a) coeff[k++] = std::conj(bra[a]) * ket[a];
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const Complex cab = std::conj(bra[a]) * ket[b];
        const Complex cba = std::conj(bra[b]) * ket[a];
        coeff[k++] = (cab + cba) * kInvSqrt2;
        coeff[k++] = Complex(0.0, 1.0) * (cab - cba) * kInvSqrt2;
      }
    }
    m.row(2 * static_cast<Eigen::Index>(r)) = coeff.real();
    m.row(2 * static_cast<Eigen::Index>(r) + 1) = coeff.imag();
  }
  return m;
}

NonlocalityReport solve_triviality(const ConstraintSystem& cs, const ToleranceConfig& tol) {
  NonlocalityReport report;
  report.joint_dim = cs.joint_dim;
  report.rows = cs.rows.size();
  for (const auto& row : cs.rows) report.provenance.emplace_back(row.first, row.second);

  const auto n = static_cast<Eigen::Index>(cs.joint_dim);
  const RealMatrix kernel = nullspace(constraint_matrix(cs), tol);
  report.solution_dim = static_cast<std::size_t>(kernel.cols());

  const RealVector identity = hermitian_to_real(ComplexMatrix::Identity(n, n)).normalized();
  const RealVector projected = kernel * (kernel.transpose() * identity);
  report.identity_residual = (identity - projected).norm();
  report.contains_identity = report.identity_residual <= 1e-8;
  report.certified_trivial = report.solution_dim == 1 && report.contains_identity;
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) report.basis.push_back(real_to_hermitian(kernel.col(k), cs.joint_dim));
  return report;
}

std::vector<NonlocalityReport> check_strong_nonlocality(const StateSet& set, const SystemDims& dims,
                                                        const ToleranceConfig& tol) {
  if (!(set.dims == dims)) throw DimensionError("state set does not match dims");
  std::vector<NonlocalityReport> reports;
  for (std::size_t p = 0; p < dims.parties(); ++p) {
    const Bipartition cut = Bipartition::solo_vs_rest(p, dims.parties());
    NonlocalityReport r = solve_triviality(op_constraints(set, cut, tol), tol);
    r.cut = cut.to_string(dims);
    reports.push_back(std::move(r));
  }
  return reports;
}

bool certified_strongly_nonlocal(const std::vector<NonlocalityReport>& reports) {
  if (reports.empty()) return false;
  for (const auto& r : reports) {
    if (!r.certified_trivial) return false;
  }
  return true;
}

}  // namespace upb
