#include <algorithm>
#include <numeric>
#include <sstream>

#include "upb/verify.hpp"

namespace upb {

std::size_t RegisterSpace::total() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

namespace {

constexpr std::size_t kNodeBudget = 20000;

std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

/// Row-major index over a subset of registers.
std::size_t sub_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& regs,
                      const std::vector<std::size_t>& dims) {
  std::size_t out = 0;
  for (auto r : regs) out = out * dims[r] + digits[r];
  return out;
}

std::vector<std::size_t> party_registers(const RegisterSpace& space, std::size_t party) {
  std::vector<std::size_t> regs;
  for (std::size_t r = 0; r < space.dims.size(); ++r) {
    if (space.owner[r] == party) regs.push_back(r);
  }
  return regs;
}

/// Index maps that reshape a composite vector into (party registers) x (other registers).
struct PartyView {
  std::vector<std::size_t> row, col;
  std::size_t rows = 1, cols = 1;

  PartyView(const RegisterSpace& space, const std::vector<std::size_t>& regs) {
    std::vector<std::size_t> rest;
    for (std::size_t r = 0; r < space.dims.size(); ++r) {
      if (std::find(regs.begin(), regs.end(), r) == regs.end()) rest.push_back(r);
    }
    for (auto r : regs) rows *= space.dims[r];
    for (auto r : rest) cols *= space.dims[r];
    const std::size_t n = space.total();
    row.resize(n);
    col.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto digits = digits_of(i, space.dims);
      row[i] = sub_index(digits, regs, space.dims);
      col[i] = sub_index(digits, rest, space.dims);
    }
  }

  ComplexMatrix reshape(const ComplexVector& v) const {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < row.size(); ++i) m(row[i], col[i]) = v[static_cast<Eigen::Index>(i)];
    return m;
  }

  ComplexVector flatten(const ComplexMatrix& m) const {
    ComplexVector v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<Eigen::Index>(i)] = m(row[i], col[i]);
    return v;
  }
};

ComplexVector measurement_vector(std::size_t dim, std::size_t outcome, bool fourier) {
  if (!fourier) return basis_vector(dim, outcome);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    v[static_cast<Eigen::Index>(j)] = root_of_unity(dim, static_cast<long long>(outcome * j)) / std::sqrt(double(dim));
  }
  return v;
}

/// <b|_reg applied to v; the register disappears from the space.
ComplexVector contract_register(const ComplexVector& v, const RegisterSpace& space, std::size_t reg,
                                const ComplexVector& b) {
  std::size_t inner_size = 1;
  for (std::size_t r = reg + 1; r < space.dims.size(); ++r) inner_size *= space.dims[r];
  const std::size_t d = space.dims[reg];
  const std::size_t outer = space.total() / (inner_size * d);
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(outer * inner_size));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t m = 0; m < d; ++m) {
      const Complex w = std::conj(b[static_cast<Eigen::Index>(m)]);
      if (w == Complex(0.0, 0.0)) continue;
      for (std::size_t i = 0; i < inner_size; ++i) {
        out[static_cast<Eigen::Index>(o * inner_size + i)] += w * v[static_cast<Eigen::Index>((o * d + m) * inner_size + i)];
      }
    }
  }
  return out;
}

RegisterSpace drop_register(const RegisterSpace& space, std::size_t reg) {
  RegisterSpace out = space;
  out.dims.erase(out.dims.begin() + static_cast<std::ptrdiff_t>(reg));
  out.owner.erase(out.owner.begin() + static_cast<std::ptrdiff_t>(reg));
  out.names.erase(out.names.begin() + static_cast<std::ptrdiff_t>(reg));
  return out;
}

/// Orthonormal basis for the span of the columns.
ComplexMatrix range_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s[0] > 0.0) {
    while (r < s.size() && s[r] > tol.rank_tol * s[0]) ++r;
  }
  return svd.matrixU().leftCols(r);
}

struct Candidate {
  ComplexVector v;
  std::string label;
};

struct Search {
  const ToleranceConfig& tol;
  std::size_t nodes = 0;

  std::unique_ptr<LoccPlan> solve(const std::vector<Candidate>& cands, const RegisterSpace& space) {
    if (++nodes > kNodeBudget) return nullptr;
    if (cands.size() == 1) {
      auto leaf = std::make_unique<LoccPlan>();
      leaf->kind = LoccPlan::Kind::Identified;
      leaf->label = cands.front().label;
      return leaf;
    }
    if (cands.empty()) return nullptr;
    if (auto plan = try_split(cands, space)) return plan;
    return try_measure(cands, space);
  }

  std::unique_ptr<LoccPlan> try_split(const std::vector<Candidate>& cands, const RegisterSpace& space) {
    for (std::size_t party = 0; party < space.party_names.size(); ++party) {
      const auto regs = party_registers(space, party);
      if (regs.empty()) continue;
      const PartyView view(space, regs);
      std::vector<ComplexMatrix> ms;
      for (const auto& c : cands) ms.push_back(view.reshape(c.v));

      // connected components of "local supports overlap"
      std::vector<std::size_t> comp(cands.size());
      std::iota(comp.begin(), comp.end(), 0);
      auto find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
      };
      for (std::size_t k = 0; k < ms.size(); ++k) {
        for (std::size_t l = k + 1; l < ms.size(); ++l) {
          const double scale = ms[k].norm() * ms[l].norm();
          if ((ms[k].adjoint() * ms[l]).norm() > tol.zero_tol * scale) comp[find(k)] = find(l);
        }
      }
      std::vector<std::vector<std::size_t>> groups;
      std::vector<std::size_t> root_group(cands.size(), SIZE_MAX);
      for (std::size_t k = 0; k < cands.size(); ++k) {
        const auto r = find(k);
        if (root_group[r] == SIZE_MAX) {
          root_group[r] = groups.size();
          groups.emplace_back();
        }
        groups[root_group[r]].push_back(k);
      }
      if (groups.size() < 2) continue;

      auto node = std::make_unique<LoccPlan>();
      node->kind = LoccPlan::Kind::Split;
      node->party = party;
      const auto dim = static_cast<Eigen::Index>(view.rows);
      ComplexMatrix covered = ComplexMatrix::Zero(dim, dim);
      for (const auto& g : groups) {
        Eigen::Index width = 0;
        for (auto k : g) width += ms[k].cols();
        ComplexMatrix stack(dim, width);
        Eigen::Index at = 0;
        for (auto k : g) {
          stack.middleCols(at, ms[k].cols()) = ms[k];
          at += ms[k].cols();
        }
        const ComplexMatrix q = range_basis(stack, tol);
        node->projectors.push_back(q * q.adjoint());
        covered += node->projectors.back();

        std::vector<Candidate> sub;
        for (auto k : g) sub.push_back(cands[k]);
        auto child = solve(sub, space);
        if (!child) return nullptr;
        node->children.push_back(std::move(child));
      }
      node->projectors.back() += ComplexMatrix::Identity(dim, dim) - covered;
      return node;
    }
    return nullptr;
  }

  struct Option {
    std::size_t reg;
    bool fourier;
    std::size_t worst;
    std::vector<std::vector<Candidate>> outcomes;
  };

  std::unique_ptr<LoccPlan> try_measure(const std::vector<Candidate>& cands, const RegisterSpace& space) {
    std::vector<Option> options;
    for (std::size_t reg = 0; reg < space.dims.size(); ++reg) {
      for (bool fourier : {false, true}) {
        Option opt{reg, fourier, 0, {}};
        bool preserving = true;
        for (std::size_t m = 0; m < space.dims[reg] && preserving; ++m) {
          const ComplexVector b = measurement_vector(space.dims[reg], m, fourier);
          std::vector<Candidate> images;
          for (const auto& c : cands) {
            ComplexVector img = contract_register(c.v, space, reg, b);
            if (img.norm() > tol.zero_tol * c.v.norm()) images.push_back({std::move(img), c.label});
          }
          for (std::size_t k = 0; k < images.size() && preserving; ++k) {
            for (std::size_t l = k + 1; l < images.size(); ++l) {
              if (relative_overlap(images[k].v, images[l].v) > tol.zero_tol) {
                preserving = false;
                break;
              }
            }
          }
          opt.worst = std::max(opt.worst, images.size());
          opt.outcomes.push_back(std::move(images));
        }
        if (preserving) options.push_back(std::move(opt));
      }
    }
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& x, const Option& y) { return x.worst < y.worst; });

    for (auto& opt : options) {
      const RegisterSpace reduced = drop_register(space, opt.reg);
      auto node = std::make_unique<LoccPlan>();
      node->kind = LoccPlan::Kind::Measure;
      node->party = space.owner[opt.reg];
      node->reg = opt.reg;
      node->fourier = opt.fourier;
      bool ok = true;
      for (auto& images : opt.outcomes) {
        if (images.empty()) {
          node->children.push_back(nullptr);
          continue;
        }
        auto child = solve(images, reduced);
        if (!child) {
          ok = false;
          break;
        }
        node->children.push_back(std::move(child));
      }
      if (ok) {
        node->label = space.names[opt.reg];
        return node;
      }
      if (nodes > kNodeBudget) return nullptr;
    }
    return nullptr;
  }
};

void describe(const LoccPlan& plan, const RegisterSpace& space, int depth, std::vector<std::string>& out) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (plan.kind) {
    case LoccPlan::Kind::Identified:
      out.push_back(pad + "identified " + plan.label);
      return;
    case LoccPlan::Kind::Split: {
      std::string regs;
      for (auto r : party_registers(space, plan.party)) regs += (regs.empty() ? "" : ",") + space.names[r];
      out.push_back(pad + space.party_names[plan.party] + " projects {" + regs + "} onto " +
                    std::to_string(plan.projectors.size()) + " orthogonal supports");
      for (const auto& child : plan.children) describe(*child, space, depth + 1, out);
      return;
    }
    case LoccPlan::Kind::Measure: {
      out.push_back(pad + space.party_names[plan.party] + " measures " + space.names[plan.reg] +
                    (plan.fourier ? " in the Fourier basis" : " in the computational basis"));
      const RegisterSpace reduced = drop_register(space, plan.reg);
      for (std::size_t m = 0; m < plan.children.size(); ++m) {
        if (!plan.children[m]) continue;
        out.push_back(pad + "  outcome " + std::to_string(m) + ":");
        describe(*plan.children[m], reduced, depth + 2, out);
      }
      return;
    }
  }
}

void run_plan(const LoccPlan& plan, const ComplexVector& state, const RegisterSpace& space, double floor,
              std::vector<std::string>& reached) {
  if (state.norm() <= floor) return;
  switch (plan.kind) {
    case LoccPlan::Kind::Identified:
      if (std::find(reached.begin(), reached.end(), plan.label) == reached.end()) reached.push_back(plan.label);
      return;
    case LoccPlan::Kind::Split: {
      const PartyView view(space, party_registers(space, plan.party));
      const ComplexMatrix m = view.reshape(state);
      for (std::size_t g = 0; g < plan.projectors.size(); ++g) {
        run_plan(*plan.children[g], view.flatten(plan.projectors[g] * m), space, floor, reached);
      }
      return;
    }
    case LoccPlan::Kind::Measure: {
      const RegisterSpace reduced = drop_register(space, plan.reg);
      for (std::size_t m = 0; m < plan.children.size(); ++m) {
        const ComplexVector img =
            contract_register(state, space, plan.reg, measurement_vector(space.dims[plan.reg], m, plan.fourier));
        if (!plan.children[m]) {
          if (img.norm() > floor) reached.push_back("?");
          continue;
        }
        run_plan(*plan.children[m], img, reduced, floor, reached);
      }
      return;
    }
  }
}

void check_space(const RegisterSpace& space) {
  if (space.owner.size() != space.dims.size() || space.names.size() != space.dims.size()) {
    throw DimensionError("register space: dims, owners and names must have equal length");
  }
  for (auto o : space.owner) {
    if (o >= space.party_names.size()) throw std::invalid_argument("register owner out of range");
  }
}

}  // namespace

LoccResult greedy_locc_distinguishable(const std::vector<ComplexVector>& states, const std::vector<std::string>& labels,
                                       const RegisterSpace& space, const ToleranceConfig& tol) {
  check_space(space);
  if (states.size() != labels.size()) throw std::invalid_argument("one label per state required");
  std::vector<Candidate> cands;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (static_cast<std::size_t>(states[k].size()) != space.total()) throw DimensionError("state does not match the register space");
    cands.push_back({states[k], labels[k]});
  }
  LoccResult result;
  if (cands.empty()) {
    result.distinguishable = true;
    return result;
  }
  if (!check_orthogonality(states, tol).passed) {
    result.sketch.push_back("candidates are not mutually orthogonal");
    return result;
  }
  Search search{tol};
  std::unique_ptr<LoccPlan> plan = search.solve(cands, space);
  if (!plan) {
    result.sketch.push_back(search.nodes > kNodeBudget ? "unknown: search budget exhausted" : "unknown: no local step found");
    return result;
  }
  describe(*plan, space, 0, result.sketch);
  result.distinguishable = true;
  result.plan = std::shared_ptr<const LoccPlan>(std::move(plan));
  return result;
}

LoccResult greedy_locc_distinguishable(const std::vector<ProductState>& states, const ToleranceConfig& tol) {
  if (states.empty()) return {true, {}, nullptr};
  RegisterSpace space;
  std::vector<ComplexVector> vectors;
  std::vector<std::string> labels;
  const std::size_t parties = states.front().locals.size();
  for (std::size_t p = 0; p < parties; ++p) {
    const std::string name(1, static_cast<char>('A' + p));
    space.dims.push_back(static_cast<std::size_t>(states.front().locals[p].size()));
    space.owner.push_back(p);
    space.names.push_back(name);
    space.party_names.push_back(name);
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].locals.size() != parties) throw DimensionError("states have different party counts");
    vectors.push_back(states[k].vector());
    labels.push_back(states[k].label.name.empty() ? std::to_string(k) : states[k].label.name);
  }
  return greedy_locc_distinguishable(vectors, labels, space, tol);
}

std::vector<std::string> execute_plan(const LoccPlan& plan, const ComplexVector& state, const RegisterSpace& space,
                                      const ToleranceConfig& tol) {
  check_space(space);
  if (static_cast<std::size_t>(state.size()) != space.total()) throw DimensionError("state does not match the register space");
  std::vector<std::string> reached;
  run_plan(plan, state, space, tol.zero_tol * state.norm(), reached);
  return reached;
}

}  // namespace upb
