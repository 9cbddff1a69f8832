#include <set>
#include <sstream>

#include "upb/verify.hpp"

namespace upb {

std::string to_string(LemmaOutcome outcome) {
  switch (outcome) {
    case LemmaOutcome::Holds: return "holds";
    case LemmaOutcome::HypothesisViolated: return "hypothesis violated";
    case LemmaOutcome::ConclusionFails: return "conclusion fails";
  }
  return "unknown";
}

namespace {

LemmaVerdict violated(const std::string& detail) {
  return {LemmaOutcome::HypothesisViolated, detail, 0.0};
}

double threshold(const ComplexMatrix& e, const ToleranceConfig& tol) { return tol.zero_tol * std::max(1.0, max_abs(e)); }

/// Empty string when E is Hermitian PSD, otherwise the reason.
std::string check_operator(const ComplexMatrix& e, const ToleranceConfig& tol) {
  if (e.rows() != e.cols()) return "E is not square";
  if (!is_hermitian(e, threshold(e, tol))) return "E is not Hermitian";
  ToleranceConfig loose = tol;
  loose.zero_tol = threshold(e, tol);
  const auto eig = eigh(e, loose);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -tol.eig_tol * std::max(1.0, max_abs(e))) {
    return "E is not positive semidefinite";
  }
  return {};
}

/// Empty string when the vectors are mutually orthogonal, one per index, and supported on idx.
std::string check_family(const std::vector<ComplexVector>& vs, const std::vector<std::size_t>& idx, Eigen::Index dim,
                         const std::string& name, const ToleranceConfig& tol) {
  if (idx.empty()) return name + " index set is empty";
  if (vs.size() != idx.size()) return name + " family size differs from its index set";
  const std::set<std::size_t> support(idx.begin(), idx.end());
  if (support.size() != idx.size()) return name + " index set repeats an index";
  for (auto k : idx) {
    if (static_cast<Eigen::Index>(k) >= dim) return name + " index out of range";
  }
  for (std::size_t a = 0; a < vs.size(); ++a) {
    if (vs[a].size() != dim) return name + " vector has the wrong dimension";
    const double n = vs[a].norm();
    if (n == 0.0) return name + " contains a zero vector";
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (!support.count(static_cast<std::size_t>(k)) && std::abs(vs[a][k]) > tol.zero_tol * n) {
        return name + " vector leaves its index set";
      }
    }
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (relative_overlap(vs[a], vs[b]) > tol.zero_tol) return name + " vectors are not orthogonal";
    }
  }
  return {};
}

/// |<u|E|v>| for normalized u, v.
double sandwich(const ComplexVector& u, const ComplexMatrix& e, const ComplexVector& v) {
  return std::abs(inner(u.normalized(), e * v.normalized()));
}

}  // namespace

LemmaVerdict block_zeros_verify(const ComplexMatrix& e, const std::vector<std::size_t>& s,
                                const std::vector<std::size_t>& t, const std::vector<ComplexVector>& psis,
                                const std::vector<ComplexVector>& phis, const ToleranceConfig& tol) {
  if (auto why = check_operator(e, tol); !why.empty()) return violated(why);
  for (auto a : s) {
    for (auto b : t) {
      if (a == b) return violated("S and T intersect");
    }
  }
  if (auto why = check_family(psis, s, e.rows(), "psi", tol); !why.empty()) return violated(why);
  if (auto why = check_family(phis, t, e.rows(), "phi", tol); !why.empty()) return violated(why);

  const double thr = threshold(e, tol);
  for (std::size_t i = 0; i < psis.size(); ++i) {
    for (std::size_t j = 0; j < phis.size(); ++j) {
      if (sandwich(psis[i], e, phis[j]) > thr) {
        std::ostringstream msg;
        msg << "<psi_" << i << "|E|phi_" << j << "> is non-zero";
        return violated(msg.str());
      }
    }
  }

  LemmaVerdict verdict;
  verdict.conclusion_residual = std::max(max_abs(submatrix(e, s, t)), max_abs(submatrix(e, t, s)));
  if (verdict.conclusion_residual > thr) {
    verdict.outcome = LemmaOutcome::ConclusionFails;
    verdict.detail = "off-diagonal block S x T does not vanish";
  } else {
    verdict.detail = "E_ST = 0";
  }
  return verdict;
}

LemmaVerdict block_trivial_verify(const ComplexMatrix& e, const std::vector<std::size_t>& s,
                                  const std::vector<ComplexVector>& psis, std::size_t u_t,
                                  const ToleranceConfig& tol) {
  if (auto why = check_operator(e, tol); !why.empty()) return violated(why);
  if (auto why = check_family(psis, s, e.rows(), "psi", tol); !why.empty()) return violated(why);
  if (std::find(s.begin(), s.end(), u_t) == s.end()) return violated("u_t is not in S");

  const double thr = threshold(e, tol);
  for (std::size_t i = 0; i < psis.size(); ++i) {
    for (std::size_t j = i + 1; j < psis.size(); ++j) {
      if (sandwich(psis[i], e, psis[j]) > thr) return violated("E is not diagonal in the psi family");
    }
  }
  for (auto k : s) {
    if (k != u_t && std::abs(e(static_cast<Eigen::Index>(u_t), static_cast<Eigen::Index>(k))) > thr) {
      return violated("row u_t of E does not vanish on S \\ {u_t}");
    }
  }
  for (std::size_t j = 0; j < psis.size(); ++j) {
    const double overlap = std::abs(psis[j][static_cast<Eigen::Index>(u_t)]) / psis[j].norm();
    if (overlap <= tol.zero_tol) return violated("u_t is orthogonal to some psi");
  }

  const ComplexMatrix block = submatrix(e, s, s);
  const Complex mean = block.trace() / static_cast<double>(block.rows());
  const ComplexMatrix scaled = mean * ComplexMatrix::Identity(block.rows(), block.cols());
  LemmaVerdict verdict;
  verdict.conclusion_residual = max_abs(block - scaled);
  if (verdict.conclusion_residual > thr) {
    verdict.outcome = LemmaOutcome::ConclusionFails;
    verdict.detail = "E_S is not proportional to the identity";
  } else {
    verdict.detail = "E_S = c I";
  }
  return verdict;
}

}  // namespace upb
