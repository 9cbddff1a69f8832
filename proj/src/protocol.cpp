#include <cmath>
#include <sstream>

#include "upb/protocol.hpp"

namespace upb {

ComplexVector initial_state(const ProductState& psi, const RegisterLayout& layout) {
  if (psi.locals.size() != 3) throw DimensionError("initial_state: a tripartite state is required");
  for (std::size_t p = 0; p < 3; ++p) {
    if (static_cast<std::size_t>(psi.locals[p].size()) != layout.registers.at(p).dim) {
      throw DimensionError("initial_state: state dimensions do not match the system registers");
    }
  }
  ComplexVector bell(4);
  bell << 1.0, 0.0, 0.0, 1.0;
  return kron(kron(psi.vector(), bell), bell);
}

namespace {

struct Frame {
  std::vector<std::size_t> flips;
  std::string tag;
};

struct Builder {
  const RegisterLayout& layout;
  Frame frame;

  LocalOperator op(const std::string& text) const {
    return flip_frame(LocalOperator::parse(text, layout), frame.flips);
  }

  std::unique_ptr<ProtocolNode> node(std::size_t party, const std::string& name) const {
    auto n = std::make_unique<ProtocolNode>();
    n->party = party;
    n->name = name + frame.tag;
    return n;
  }

  static std::unique_ptr<ProtocolNode> leaf() {
    auto n = std::make_unique<ProtocolNode>();
    n->leaf = true;
    return n;
  }

  /// {M, I - M}.
  std::unique_ptr<ProtocolNode> binary(std::size_t party, const std::string& name, const std::string& text,
                                       std::unique_ptr<ProtocolNode> yes, std::unique_ptr<ProtocolNode> no) const {
    auto n = node(party, name);
    LocalOperator m = op(text);
    LocalOperator bar = LocalOperator::complement({&m});
    n->outcomes.push_back({name, std::move(m), std::move(yes)});
    n->outcomes.push_back({"~" + name, std::move(bar), std::move(no)});
    return n;
  }

  std::unique_ptr<ProtocolNode> step5_sub() const {
    auto bob = [&] { return binary(1, "M5,2", "P[(|0>+|1>)_b1]", leaf(), leaf()); };
    return binary(0, "M5,1", "P[(|0>+|1>)_a]", bob(), bob());
  }

  std::unique_ptr<ProtocolNode> after_step1() const {
    auto step6 = binary(0, "M6", "P[|2>_A]", leaf(), leaf());
    auto step5 = binary(1, "M5", "P[|0>_B]", step5_sub(), std::move(step6));
    auto step4 = binary(2, "M4", "P[|3>_C]", leaf(), std::move(step5));
    auto step3 = binary(0, "M3", "P[|0>_A]", leaf(), std::move(step4));

    auto step2 = node(1, "M2");
    LocalOperator m21 = op("P[|2>_B; |0>_b1; |0>_b2]");
    LocalOperator m22 = op("P[(|1>-|2>)_B; |0>_b1; |1>_b2]");
    LocalOperator m23 = op("P[(|1>+|2>)_B; |0>_b1; |1>_b2]");
    LocalOperator bar = LocalOperator::complement({&m21, &m22, &m23});
    step2->outcomes.push_back({"M2,1", std::move(m21), binary(0, "M2,1,1", "P[(|0>-|1>)_A]", leaf(), leaf())});
    step2->outcomes.push_back({"M2,2", std::move(m22), leaf()});
    step2->outcomes.push_back({"M2,3", std::move(m23), leaf()});
    step2->outcomes.push_back({"~M2", std::move(bar), std::move(step3)});
    return step2;
  }
};

struct Image {
  std::string label;
  ComplexVector v;
  double input_norm = 1.0;
};

bool is_detailed(const std::vector<std::string>& path) {
  return path.size() >= 2 && path[0] == "M1" && path[1] == "L1";
}

std::string join(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) out += (out.empty() ? "" : " > ") + p;
  return out.empty() ? "root" : out;
}

void propagate(ProtocolTree& tree, ProtocolNode& node, const std::vector<Image>& images, std::vector<std::string>& path,
               const ToleranceConfig& tol) {
  const auto& layout = tree.layout;
  if (node.leaf) {
    std::vector<ComplexVector> vs;
    for (const auto& im : images) {
      node.info.candidates.push_back(im.label);
      vs.push_back(im.v);
    }
    if (images.size() <= 1) {
      node.info.resolved = true;
      if (images.size() == 1) node.info.sketch.push_back("identified " + images.front().label);
    } else {
      auto res = greedy_locc_distinguishable(vs, node.info.candidates, layout.space(), tol);
      node.info.resolved = res.distinguishable;
      node.info.sketch = res.sketch;
      node.info.plan = res.plan;
    }
    if (!node.info.resolved) {
      tree.issues.push_back("leaf " + join(path) + " not resolved by the greedy checker");
      if (!is_detailed(path)) tree.generated_branches_valid = false;
    }
    return;
  }

  NodeCheck check;
  check.path = join(path);
  const auto n = static_cast<Eigen::Index>(layout.total());
  SparseComplexMatrix sum(n, n);
  for (const auto& out : node.outcomes) {
    const SparseComplexMatrix k = out.op.sparse(layout);
    sum += SparseComplexMatrix(k.adjoint()) * k;
    for (auto r : out.op.registers()) {
      if (layout.registers[r].owner != node.party) check.local = false;
    }
  }
  SparseComplexMatrix id(n, n);
  id.setIdentity();
  const ComplexMatrix residual = ComplexMatrix(sum - id);
  check.completeness_residual = max_abs(residual);

  for (auto& out : node.outcomes) {
    std::vector<Image> next;
    for (const auto& im : images) {
      ComplexVector w = out.op.apply(im.v, layout);
      if (w.norm() > tol.zero_tol * im.input_norm) next.push_back({im.label, std::move(w), im.input_norm});
    }
    for (std::size_t a = 0; a < next.size(); ++a) {
      for (std::size_t b = a + 1; b < next.size(); ++b) {
        if (relative_overlap(next[a].v, next[b].v) > 1e-9) check.orthogonality_preserved = false;
      }
    }
    path.push_back(out.name);
    propagate(tree, *out.child, next, path, tol);
    path.pop_back();
  }

  const bool ok = check.local && check.orthogonality_preserved && check.completeness_residual <= 1e-9;
  if (!ok) {
    tree.issues.push_back("node " + check.path + " failed validation");
    if (!is_detailed(path) && path.size() >= 1) tree.generated_branches_valid = false;
  }
  tree.checks.push_back(std::move(check));
}

}  // namespace

ProtocolTree build_protocol_tree() {
  ProtocolTree tree;
  tree.layout = RegisterLayout::assisted_334();
  const auto& layout = tree.layout;
  const std::size_t a = layout.index_of("a"), b1 = layout.index_of("b1"), b2 = layout.index_of("b2"),
                    c = layout.index_of("c");

  const Builder plain{layout, {{}, ""}};
  auto charlie = [&](const std::vector<std::size_t>& base, const std::string& tag) {
    std::vector<std::size_t> with_c = base;
    with_c.push_back(c);
    with_c.push_back(b2);
    const Builder same{layout, {base, tag.empty() ? "" : " [X:" + tag + "]"}};
    const Builder flipped{layout, {with_c, " [X:" + (tag.empty() ? "" : tag + ",") + "c,b2]"}};
    return plain.binary(2, "L1", "P[(|1>,|2>,|3>)_C; |0>_c] + P[|0>_C; |1>_c]", same.after_step1(),
                        flipped.after_step1());
  };
  tree.root = plain.binary(0, "M1", "P[(|0>,|1>)_A; |0>_a] + P[|2>_A; |1>_a]", charlie({}, ""), charlie({a, b1}, "a,b1"));

  const StateSet set = build_334();
  tree.inputs = set.states;
  std::vector<Image> images;
  for (const auto& s : set.states) {
    ComplexVector v = initial_state(s, layout);
    const double norm = v.norm();
    images.push_back({s.label.name, std::move(v), norm});
  }
  std::vector<std::string> path;
  propagate(tree, *tree.root, images, path, {});
  tree.detailed_only = !tree.generated_branches_valid;
  return tree;
}

const ProtocolNode* find_node(const ProtocolTree& tree, const std::vector<std::string>& path) {
  const ProtocolNode* node = tree.root.get();
  for (const auto& name : path) {
    if (!node || node->leaf) return nullptr;
    const ProtocolNode* next = nullptr;
    for (const auto& out : node->outcomes) {
      if (out.name == name) next = out.child.get();
    }
    node = next;
  }
  return node;
}

namespace {

void expand(const ProtocolTree& tree, const ProtocolNode& node, const ComplexVector& v, double input_norm2,
            std::vector<TraceStep>& path, std::vector<std::string>& names, RunTrace& trace, const ToleranceConfig& tol) {
  const double prob = v.squaredNorm() / input_norm2;
  if (node.leaf) {
    TraceBranch branch;
    branch.path = path;
    branch.probability = prob;
    if (node.info.candidates.size() == 1) {
      branch.verdict = node.info.candidates;
    } else if (node.info.plan) {
      branch.verdict = execute_plan(*node.info.plan, v, tree.layout.space(), tol);
    } else {
      branch.verdict = {"unresolved"};
    }
    trace.branches.push_back(std::move(branch));
    return;
  }
  for (const auto& out : node.outcomes) {
    if (tree.detailed_only) {
      if (names.empty() && out.name != "M1") continue;
      if (names.size() == 1 && out.name != "L1") continue;
    }
    ComplexVector w = out.op.apply(v, tree.layout);
    const double next = w.squaredNorm() / input_norm2;
    if (next <= tol.zero_tol * tol.zero_tol) continue;
    path.push_back({node.name, out.name, next / prob});
    names.push_back(out.name);
    expand(tree, *out.child, w, input_norm2, path, names, trace, tol);
    names.pop_back();
    path.pop_back();
  }
}

}  // namespace

RunTrace run_discrimination(const ProtocolTree& tree, const ProductState& psi, const ToleranceConfig& tol) {
  RunTrace trace;
  trace.input = psi.label.name;
  const ProductState* match = nullptr;
  if (psi.locals.size() == 3) {
    bool dims_ok = true;
    for (std::size_t p = 0; p < 3; ++p) dims_ok = dims_ok && psi.locals[p].size() == tree.inputs.front().locals[p].size();
    if (dims_ok) {
      const ComplexVector v = psi.vector();
      for (const auto& s : tree.inputs) {
        if (relative_overlap(v, s.vector()) >= 1.0 - 1e-9) match = &s;
      }
    }
  }
  if (!match) {
    trace.verdict = "unknown input";
    return trace;
  }
  trace.input = match->label.name;

  const ComplexVector v0 = initial_state(psi, tree.layout);
  std::vector<TraceStep> path;
  std::vector<std::string> names;
  expand(tree, *tree.root, v0, v0.squaredNorm(), path, names, trace, tol);

  bool all_correct = !trace.branches.empty();
  for (const auto& b : trace.branches) {
    trace.total_probability += b.probability;
    if (b.verdict.size() != 1 || b.verdict.front() != trace.input) all_correct = false;
  }
  const bool mass_ok = tree.detailed_only || std::abs(trace.total_probability - 1.0) <= 1e-9;
  trace.success = all_correct && mass_ok;
  trace.verdict = all_correct ? trace.input : "ambiguous";
  return trace;
}

double resource_cost(const ResourceLedger& ledger) {
  auto term = [](const EntanglementLink& l) {
    if (l.count == 0) return 0.0;
    if (l.dim < 1) throw std::invalid_argument("entanglement link dimension must be positive");
    return static_cast<double>(l.count) * std::log2(static_cast<double>(l.dim));
  };
  return term(ledger.ab) + term(ledger.ac) + term(ledger.bc);
}

ResourceLedger protocol_ledger() { return {{1, 2}, {0, 2}, {1, 2}}; }

ResourceLedger teleportation_baseline() { return {{1, 3}, {0, 3}, {1, 3}}; }

std::string transcript_line(const RunTrace& trace) {
  std::ostringstream out;
  out << trace.input << ": " << (trace.success ? "identified" : "FAILED") << " (" << trace.branches.size()
      << " branches)\n";
  for (const auto& b : trace.branches) {
    out << "  ";
    for (std::size_t k = 0; k < b.path.size(); ++k) out << (k ? " > " : "") << b.path[k].outcome;
    out << "  p=" << b.probability << "  =>";
    for (const auto& v : b.verdict) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace upb
