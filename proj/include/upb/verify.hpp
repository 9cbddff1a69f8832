#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upb/constructions.hpp"
#include "upb/linalg.hpp"

namespace upb {

// ---------------------------------------------------------------------------
// Orthogonality and completeness

struct OrthogonalityReport {
  bool passed = true;
  double max_overlap = 0.0;  ///< largest relative |<u|v>| over distinct pairs
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
};

/// Passes iff every distinct pair has relative overlap <= zero_tol. worst_pair
/// is the pair attaining max_overlap (set whenever the set has two states).
OrthogonalityReport check_orthogonality(const StateSet& set, const ToleranceConfig& tol = {});
OrthogonalityReport check_orthogonality(const std::vector<ComplexVector>& vectors, const ToleranceConfig& tol = {});

struct CompletenessReport {
  bool complete = false;
  std::size_t count = 0;     ///< states in (set minus stopper) + removed + replaced
  std::size_t expected = 0;  ///< product of the local dimensions
  double max_overlap = 0.0;
};

CompletenessReport check_completeness(const StateSet& set, const RemovedStates& removed, const SystemDims& dims,
                                      const ToleranceConfig& tol = {});

/// I minus the projector onto the span of the (normalized) states. Rejects
/// non-orthogonal input with std::invalid_argument.
ComplexMatrix complement_projector(const StateSet& set, const SystemDims& dims, const ToleranceConfig& tol = {});

// ---------------------------------------------------------------------------
// Seesaw search for product vectors in a subspace

struct SeesawConfig {
  std::size_t restarts = 200;
  std::size_t max_iters = 1000;
  double rel_improvement = 1e-12;
  std::uint64_t seed = 42;
};

struct SeesawResult {
  double best_overlap = 0.0;
  ProductState witness;  ///< normalized locals
  std::size_t restarts_used = 0;
  std::size_t iterations = 0;  ///< sweeps spent by the best restart
  bool converged = false;      ///< the best restart stopped on the improvement criterion
  bool monotone = true;        ///< no restart ever decreased its objective
};

/// Trajectory of one restart; objective[k] is the value after sweep k.
struct SeesawRun {
  std::vector<ComplexVector> locals;
  std::vector<double> objective;
  bool converged = false;
};

/// Best <a x b x ...|P|a x b x ...> over normalized product vectors, by
/// alternating top-eigenvector updates. P must be Hermitian PSD with spectrum
/// in [0, 1 + eig_tol].
SeesawResult seesaw_product_overlap(const ComplexMatrix& projector, const SystemDims& dims,
                                    const SeesawConfig& cfg = {}, const ToleranceConfig& tol = {});

/// A single restart from explicit initial locals.
SeesawRun seesaw_run(const ComplexMatrix& projector, const SystemDims& dims, std::vector<ComplexVector> initial,
                     const SeesawConfig& cfg = {}, const ToleranceConfig& tol = {});

/// Seeded initial locals for restart k (complex Gaussian, normalized).
std::vector<ComplexVector> seesaw_initial_locals(const SystemDims& dims, std::uint64_t seed, std::size_t restart);

// ---------------------------------------------------------------------------
// Orthogonality-preserving measurements

/// One linear condition <bra|E|ket> = 0 on a Hermitian operator E.
struct ConstraintRow {
  ComplexVector bra;
  ComplexVector ket;
  std::size_t first = 0;   ///< index of the state supplying bra
  std::size_t second = 0;  ///< index of the state supplying ket
};

struct ConstraintSystem {
  std::size_t joint_dim = 0;
  std::vector<std::size_t> measuring;  ///< parties that perform the measurement
  std::vector<ConstraintRow> rows;
};

/// Conditions on a measurement performed jointly by the parties on the right
/// of the cut; the left side is the spectator. A pair contributes a row only
/// when its spectator overlap is non-zero.
ConstraintSystem op_constraints(const StateSet& set, const Bipartition& cut, const ToleranceConfig& tol = {});

/// Real coordinates of Hermitian operators: diagonal entries, then for a < b
/// the pairs (Re, Im) of entry (a, b).
RealVector hermitian_to_real(const ComplexMatrix& e);
ComplexMatrix real_to_hermitian(const RealVector& x, std::size_t dim);

/// Two real rows per constraint (real and imaginary part of <bra|E|ket>).
RealMatrix constraint_matrix(const ConstraintSystem& cs);

struct NonlocalityReport {
  std::string cut;  ///< e.g. "A|BC"; the right side measures
  std::size_t joint_dim = 0;
  std::size_t rows = 0;
  std::size_t solution_dim = 0;
  bool contains_identity = false;
  double identity_residual = 0.0;
  bool certified_trivial = false;
  std::vector<ComplexMatrix> basis;
  std::vector<std::pair<std::size_t, std::size_t>> provenance;
};

NonlocalityReport solve_triviality(const ConstraintSystem& cs, const ToleranceConfig& tol = {});

/// One report per joint party BC, CA, AB. The set is certified strongly
/// nonlocal when every report is certified_trivial; anything else is
/// inconclusive.
std::vector<NonlocalityReport> check_strong_nonlocality(const StateSet& set, const SystemDims& dims,
                                                        const ToleranceConfig& tol = {});

bool certified_strongly_nonlocal(const std::vector<NonlocalityReport>& reports);

// ---------------------------------------------------------------------------
// Block Zeros / Block Trivial lemmas as checkable utilities

enum class LemmaOutcome { Holds, HypothesisViolated, ConclusionFails };

struct LemmaVerdict {
  LemmaOutcome outcome = LemmaOutcome::Holds;
  std::string detail;
  double conclusion_residual = 0.0;

  bool holds() const { return outcome == LemmaOutcome::Holds; }
};

std::string to_string(LemmaOutcome outcome);

/// If <psi_i|E|phi_j> = 0 for orthogonal families spanning S and T, then
/// E restricted to S x T and T x S vanishes.
LemmaVerdict block_zeros_verify(const ComplexMatrix& e, const std::vector<std::size_t>& s,
                                const std::vector<std::size_t>& t, const std::vector<ComplexVector>& psis,
                                const std::vector<ComplexVector>& phis, const ToleranceConfig& tol = {});

/// If E is diagonal in an orthogonal family spanning S and the row of a
/// basis vector u_t that overlaps every member vanishes on S \ {u_t}, then
/// E_S is proportional to the identity.
LemmaVerdict block_trivial_verify(const ComplexMatrix& e, const std::vector<std::size_t>& s,
                                  const std::vector<ComplexVector>& psis, std::size_t u_t,
                                  const ToleranceConfig& tol = {});

// ---------------------------------------------------------------------------
// Greedy LOCC distinguishability

/// Registers of a composite space and the party that owns each of them.
struct RegisterSpace {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> owner;
  std::vector<std::string> names;
  std::vector<std::string> party_names;

  std::size_t total() const;
};

/// A node of a local discrimination plan. A split node projects one party
/// onto mutually orthogonal local supports; a measure node measures one
/// register in the computational or Fourier basis.
struct LoccPlan {
  enum class Kind { Identified, Split, Measure };
  Kind kind = Kind::Identified;
  std::size_t party = 0;
  std::size_t reg = 0;
  bool fourier = false;
  std::string label;  ///< the identified candidate (Identified nodes)
  /// Split nodes: local projectors on the party's registers, one per group.
  std::vector<ComplexMatrix> projectors;
  std::vector<std::unique_ptr<LoccPlan>> children;
};

struct LoccResult {
  bool distinguishable = false;  ///< false means unknown, never "indistinguishable"
  std::vector<std::string> sketch;
  std::shared_ptr<const LoccPlan> plan;
};

LoccResult greedy_locc_distinguishable(const std::vector<ProductState>& states, const ToleranceConfig& tol = {});
LoccResult greedy_locc_distinguishable(const std::vector<ComplexVector>& states, const std::vector<std::string>& labels,
                                       const RegisterSpace& space, const ToleranceConfig& tol = {});

/// Runs a plan on a state and returns every label reached with non-zero weight.
std::vector<std::string> execute_plan(const LoccPlan& plan, const ComplexVector& state, const RegisterSpace& space,
                                      const ToleranceConfig& tol = {});

}  // namespace upb
