#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "upb/constructions.hpp"
#include "upb/linalg.hpp"
#include "upb/verify.hpp"

namespace upb {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

struct Register {
  std::string name;
  std::size_t dim = 0;
  std::size_t owner = 0;
};

/// Ordered registers of the system plus ancillas, each owned by one party.
struct RegisterLayout {
  std::vector<Register> registers;
  std::vector<std::string> party_names;

  /// A:3 B:3 C:4 a:2 b1:2 b2:2 c:2 owned by Alice, Bob, Charlie.
  static RegisterLayout assisted_334();

  std::size_t total() const;
  std::size_t index_of(const std::string& name) const;
  std::vector<std::size_t> dims() const;
  RegisterSpace space() const;
};

// ---------------------------------------------------------------------------
// P[...] notation

/// One register factor: the sum of projectors onto the (normalized) kets.
struct PFactor {
  std::size_t reg = 0;
  std::vector<ComplexVector> kets;

  ComplexMatrix projector() const;
};

/// A tensor product of register factors, identity elsewhere.
struct PTerm {
  std::vector<PFactor> factors;
  std::string text;
};

/// Parses "P[(|0>,|1>)_A; |0>_a]" or "P[(|0>-|1>)_B]". Throws
/// std::invalid_argument on malformed input or non-orthogonal kets in a group.
PTerm parse_pterm(const std::string& text, const RegisterLayout& layout);

ComplexMatrix projector_from_spec(const PTerm& term, const RegisterLayout& layout);
ComplexMatrix projector_from_spec(const std::string& text, const RegisterLayout& layout);

/// identity_weight * I + sum of coef * term.
struct LocalOperator {
  double identity_weight = 0.0;
  std::vector<std::pair<double, PTerm>> terms;

  /// Sum of P terms, e.g. "P[..] + P[..]".
  static LocalOperator parse(const std::string& text, const RegisterLayout& layout);
  /// I minus the sum of the given operators.
  static LocalOperator complement(const std::vector<const LocalOperator*>& ops);

  ComplexVector apply(const ComplexVector& v, const RegisterLayout& layout) const;
  SparseComplexMatrix sparse(const RegisterLayout& layout) const;
  std::vector<std::size_t> registers() const;
};

/// Conjugation by Pauli X on the listed qubit registers.
LocalOperator flip_frame(const LocalOperator& op, const std::vector<std::size_t>& regs);

// ---------------------------------------------------------------------------
// Protocol tree

struct ProtocolNode;

struct Outcome {
  std::string name;  ///< e.g. "M2,1" or "~M2"
  LocalOperator op;
  std::unique_ptr<ProtocolNode> child;
};

struct LeafInfo {
  std::vector<std::string> candidates;  ///< labels with non-zero weight at the leaf
  bool resolved = false;                ///< unique candidate or greedy plan found
  std::vector<std::string> sketch;
  std::shared_ptr<const LoccPlan> plan;
};

struct ProtocolNode {
  bool leaf = false;
  std::size_t party = 0;
  std::string name;  ///< measurement name, e.g. "Step 2 (Bob)"
  std::vector<Outcome> outcomes;
  LeafInfo info;
};

struct NodeCheck {
  std::string path;
  double completeness_residual = 0.0;
  bool local = true;                  ///< every operator acts only on the party's registers
  bool orthogonality_preserved = true;
};

struct ProtocolTree {
  RegisterLayout layout;
  std::unique_ptr<ProtocolNode> root;
  std::vector<ProductState> inputs;  ///< the 28 states
  std::vector<NodeCheck> checks;
  bool generated_branches_valid = true;
  bool detailed_only = false;  ///< set when generated branches failed validation
  std::vector<std::string> issues;
};

/// psi (x) (|00>+|11>)_{a,b1} (x) (|00>+|11>)_{b2,c} in layout order.
ComplexVector initial_state(const ProductState& psi, const RegisterLayout& layout = RegisterLayout::assisted_334());

ProtocolTree build_protocol_tree();

/// Follows outcome names from the root; nullptr if the path does not exist.
const ProtocolNode* find_node(const ProtocolTree& tree, const std::vector<std::string>& path);

struct TraceStep {
  std::string node;
  std::string outcome;
  double probability = 0.0;  ///< conditional on the previous step
};

struct TraceBranch {
  std::vector<TraceStep> path;
  double probability = 0.0;  ///< norm^2 of the post-state relative to the input
  std::vector<std::string> verdict;
};

struct RunTrace {
  std::string input;
  std::vector<TraceBranch> branches;
  double total_probability = 0.0;
  std::string verdict;  ///< identified label, "ambiguous" or "unknown input"
  bool success = false;
};

RunTrace run_discrimination(const ProtocolTree& tree, const ProductState& psi, const ToleranceConfig& tol = {});

struct EntanglementLink {
  std::size_t count = 0;  ///< number of maximally entangled pairs
  std::size_t dim = 2;    ///< local dimension of each pair
};

struct ResourceLedger {
  EntanglementLink ab, ac, bc;
};

/// p log2 d1 + q log2 d2 + r log2 d3.
double resource_cost(const ResourceLedger& ledger);

ResourceLedger protocol_ledger();
ResourceLedger teleportation_baseline();

std::string transcript_line(const RunTrace& trace);

}  // namespace upb
