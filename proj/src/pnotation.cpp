#include <algorithm>
#include <cctype>
#include <set>

#include "upb/protocol.hpp"

namespace upb {

RegisterLayout RegisterLayout::assisted_334() {
  RegisterLayout layout;
  layout.party_names = {"Alice", "Bob", "Charlie"};
  layout.registers = {{"A", 3, 0}, {"B", 3, 1}, {"C", 4, 2}, {"a", 2, 0}, {"b1", 2, 1}, {"b2", 2, 1}, {"c", 2, 2}};
  return layout;
}

std::size_t RegisterLayout::total() const {
  std::size_t n = 1;
  for (const auto& r : registers) n *= r.dim;
  return n;
}

std::size_t RegisterLayout::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < registers.size(); ++k) {
    if (registers[k].name == name) return k;
  }
  throw std::invalid_argument("unknown register: " + name);
}

std::vector<std::size_t> RegisterLayout::dims() const {
  std::vector<std::size_t> out;
  for (const auto& r : registers) out.push_back(r.dim);
  return out;
}

RegisterSpace RegisterLayout::space() const {
  RegisterSpace s;
  for (const auto& r : registers) {
    s.dims.push_back(r.dim);
    s.owner.push_back(r.owner);
    s.names.push_back(r.name);
  }
  s.party_names = party_names;
  return s;
}

ComplexMatrix PFactor::projector() const {
  const auto d = kets.front().size();
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (const auto& k : kets) {
    const ComplexVector u = k.normalized();
    p += u * u.adjoint();
  }
  return p;
}

namespace {

struct Parser {
  const std::string& s;
  const RegisterLayout& layout;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("malformed P-notation at position " + std::to_string(pos) + " in \"" + s + "\": " + what);
  }

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool at_end() {
    skip();
    return pos >= s.size();
  }

  std::size_t number() {
    skip();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected a digit");
    std::size_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) v = v * 10 + static_cast<std::size_t>(s[pos++] - '0');
    return v;
  }

  std::string name() {
    skip();
    const std::size_t start = pos;
    while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected a register name");
    return s.substr(start, pos - start);
  }

  using Terms = std::vector<std::pair<double, std::size_t>>;

  /// [+-] |k> ([+-] |k>)*, optionally parenthesized.
  Terms ket_sum() {
    if (peek('(')) {
      const std::size_t save = pos;
      ++pos;
      Terms inner = ket_sum();
      if (peek(')')) {
        ++pos;
        return inner;
      }
      pos = save;
      fail("unbalanced parenthesis");
    }
    Terms terms;
    double sign = 1.0;
    if (peek('-')) {
      sign = -1.0;
      ++pos;
    } else if (peek('+')) {
      ++pos;
    }
    for (;;) {
      expect('|');
      const std::size_t k = number();
      expect('>');
      terms.emplace_back(sign, k);
      if (peek('+')) {
        sign = 1.0;
      } else if (peek('-')) {
        sign = -1.0;
      } else {
        break;
      }
      ++pos;
    }
    return terms;
  }

  /// Either "(ket, ket, ...)" or a single ket expression.
  std::vector<Terms> group() {
    if (peek('(')) {
      const std::size_t save = pos;
      ++pos;
      std::vector<Terms> kets{ket_sum()};
      if (peek(',')) {
        while (peek(',')) {
          ++pos;
          kets.push_back(ket_sum());
        }
        expect(')');
        return kets;
      }
      pos = save;
    }
    return {ket_sum()};
  }

  PFactor factor() {
    const auto kets = group();
    expect('_');
    const std::size_t reg = layout.index_of(name());
    const std::size_t dim = layout.registers[reg].dim;
    PFactor f;
    f.reg = reg;
    for (const auto& terms : kets) {
      ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
      for (auto [sign, k] : terms) {
        if (k >= dim) fail("ket |" + std::to_string(k) + "> exceeds the dimension of register " + layout.registers[reg].name);
        v[static_cast<Eigen::Index>(k)] += sign;
      }
      if (v.norm() == 0.0) fail("ket sums to zero");
      f.kets.push_back(v);
    }
    for (std::size_t i = 0; i < f.kets.size(); ++i) {
      for (std::size_t j = i + 1; j < f.kets.size(); ++j) {
        if (relative_overlap(f.kets[i], f.kets[j]) > 1e-12) {
          throw std::invalid_argument("non-orthogonal kets in one P group: \"" + s + "\"");
        }
      }
    }
    return f;
  }

  PTerm term() {
    skip();
    const std::size_t start = pos;
    expect('P');
    expect('[');
    PTerm t;
    std::set<std::size_t> seen;
    for (;;) {
      PFactor f = factor();
      if (!seen.insert(f.reg).second) fail("register listed twice");
      t.factors.push_back(std::move(f));
      if (peek(';')) {
        ++pos;
        continue;
      }
      expect(']');
      break;
    }
    t.text = s.substr(start, pos - start);
    return t;
  }
};

/// Applies a d x d matrix to one register of a composite vector.
ComplexVector apply_register(const ComplexVector& v, const std::vector<std::size_t>& dims, std::size_t reg,
                             const ComplexMatrix& m) {
  std::size_t inner = 1;
  for (std::size_t r = reg + 1; r < dims.size(); ++r) inner *= dims[r];
  const std::size_t d = dims[reg];
  const std::size_t outer = static_cast<std::size_t>(v.size()) / (inner * d);
  ComplexVector out = ComplexVector::Zero(v.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t a = 0; a < d; ++a) {
        Complex acc{0.0, 0.0};
        for (std::size_t b = 0; b < d; ++b) {
          acc += m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                 v[static_cast<Eigen::Index>((o * d + b) * inner + i)];
        }
        out[static_cast<Eigen::Index>((o * d + a) * inner + i)] = acc;
      }
    }
  }
  return out;
}

SparseComplexMatrix sparse_kron(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  SparseComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseComplexMatrix::InnerIterator ia(a, ka); ia; ++ia) {
      for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseComplexMatrix::InnerIterator ib(b, kb); ib; ++ib) {
          trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseComplexMatrix term_sparse(const PTerm& term, const RegisterLayout& layout) {
  SparseComplexMatrix acc(1, 1);
  acc.insert(0, 0) = Complex(1.0, 0.0);
  for (std::size_t r = 0; r < layout.registers.size(); ++r) {
    const auto d = static_cast<Eigen::Index>(layout.registers[r].dim);
    SparseComplexMatrix f(d, d);
    auto it = std::find_if(term.factors.begin(), term.factors.end(), [&](const PFactor& x) { return x.reg == r; });
    if (it == term.factors.end()) {
      f.setIdentity();
    } else {
      f = it->projector().sparseView(1.0, 1e-15);
    }
    acc = sparse_kron(acc, f);
  }
  return acc;
}

}  // namespace

PTerm parse_pterm(const std::string& text, const RegisterLayout& layout) {
  Parser p{text, layout};
  PTerm t = p.term();
  if (!p.at_end()) p.fail("trailing characters");
  return t;
}

ComplexMatrix projector_from_spec(const PTerm& term, const RegisterLayout& layout) {
  for (const auto& f : term.factors) {
    if (f.reg >= layout.registers.size()) throw std::invalid_argument("register index out of range");
  }
  return ComplexMatrix(term_sparse(term, layout));
}

ComplexMatrix projector_from_spec(const std::string& text, const RegisterLayout& layout) {
  return projector_from_spec(parse_pterm(text, layout), layout);
}

LocalOperator LocalOperator::parse(const std::string& text, const RegisterLayout& layout) {
  Parser p{text, layout};
  LocalOperator op;
  double sign = 1.0;
  if (p.peek('-')) {
    sign = -1.0;
    ++p.pos;
  }
  for (;;) {
    if (p.peek('I')) {
      ++p.pos;
      op.identity_weight += sign;
    } else {
      op.terms.emplace_back(sign, p.term());
    }
    if (p.at_end()) break;
    if (p.peek('+')) {
      sign = 1.0;
    } else if (p.peek('-')) {
      sign = -1.0;
    } else {
      p.fail("expected '+' or '-'");
    }
    ++p.pos;
  }
  return op;
}

LocalOperator LocalOperator::complement(const std::vector<const LocalOperator*>& ops) {
  LocalOperator out;
  out.identity_weight = 1.0;
  for (const auto* op : ops) {
    out.identity_weight -= op->identity_weight;
    for (const auto& [coef, term] : op->terms) out.terms.emplace_back(-coef, term);
  }
  return out;
}

ComplexVector LocalOperator::apply(const ComplexVector& v, const RegisterLayout& layout) const {
  const auto dims = layout.dims();
  ComplexVector out = identity_weight * v;
  for (const auto& [coef, term] : terms) {
    ComplexVector w = v;
    for (const auto& f : term.factors) w = apply_register(w, dims, f.reg, f.projector());
    out += coef * w;
  }
  return out;
}

SparseComplexMatrix LocalOperator::sparse(const RegisterLayout& layout) const {
  const auto n = static_cast<Eigen::Index>(layout.total());
  SparseComplexMatrix out(n, n);
  if (identity_weight != 0.0) {
    out.setIdentity();
    out *= Complex(identity_weight, 0.0);
  }
  for (const auto& [coef, term] : terms) out += Complex(coef, 0.0) * term_sparse(term, layout);
  return out;
}

std::vector<std::size_t> LocalOperator::registers() const {
  std::set<std::size_t> regs;
  for (const auto& [coef, term] : terms) {
    for (const auto& f : term.factors) regs.insert(f.reg);
  }
  return {regs.begin(), regs.end()};
}

LocalOperator flip_frame(const LocalOperator& op, const std::vector<std::size_t>& regs) {
  LocalOperator out = op;
  for (auto& [coef, term] : out.terms) {
    for (auto& f : term.factors) {
      if (std::find(regs.begin(), regs.end(), f.reg) == regs.end()) continue;
      for (auto& k : f.kets) {
        if (k.size() != 2) throw std::invalid_argument("frame flips act on qubit registers only");
        std::swap(k[0], k[1]);
      }
    }
  }
  return out;
}

}  // namespace upb
