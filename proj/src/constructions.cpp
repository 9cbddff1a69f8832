#include "upb/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace upb {

std::string to_string(Tile tile) {
  switch (tile) {
    case Tile::A1: return "A1";
    case Tile::A2: return "A2";
    case Tile::A3: return "A3";
    case Tile::A4: return "A4";
    case Tile::B1: return "B1";
    case Tile::B2: return "B2";
    case Tile::B3: return "B3";
    case Tile::B4: return "B4";
    case Tile::F: return "F";
    case Tile::Stopper: return "S";
    case Tile::Custom: return "custom";
  }
  return "custom";
}

Tile tile_from_string(const std::string& text) {
  static const std::map<std::string, Tile> table = {
      {"A1", Tile::A1}, {"A2", Tile::A2}, {"A3", Tile::A3}, {"A4", Tile::A4}, {"B1", Tile::B1},
      {"B2", Tile::B2}, {"B3", Tile::B3}, {"B4", Tile::B4}, {"F", Tile::F},   {"S", Tile::Stopper},
      {"custom", Tile::Custom}};
  auto it = table.find(text);
  if (it == table.end()) throw std::invalid_argument("unknown tile name: " + text);
  return it->second;
}

std::string to_string(Family family) {
  switch (family) {
    case Family::Example334: return "example334";
    case Family::Tripartite: return "tripartite";
    case Family::Layered: return "layered";
    case Family::Custom: return "custom";
  }
  return "custom";
}

Family family_from_string(const std::string& text) {
  if (text == "example334") return Family::Example334;
  if (text == "tripartite") return Family::Tripartite;
  if (text == "layered") return Family::Layered;
  if (text == "custom") return Family::Custom;
  throw std::invalid_argument("unknown family: " + text);
}

void StateSet::validate() const {
  std::set<std::string> names;
  for (const auto& s : states) {
    if (s.locals.size() != dims.parties()) throw DimensionError("state has the wrong number of parties");
    for (std::size_t p = 0; p < dims.parties(); ++p) {
      if (static_cast<std::size_t>(s.locals[p].size()) != dims[p]) {
        throw DimensionError("local dimension mismatch in state " + s.label.name);
      }
      if (s.locals[p].norm() == 0.0) throw std::invalid_argument("zero local vector in state " + s.label.name);
    }
    if (!names.insert(s.label.name).second) throw std::invalid_argument("duplicate state label " + s.label.name);
  }
}

std::optional<std::size_t> StateSet::stopper_index() const {
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].label.tile == Tile::Stopper) return k;
  }
  return std::nullopt;
}

std::vector<ComplexVector> StateSet::vectors() const {
  std::vector<ComplexVector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.vector());
  return out;
}

std::size_t family_size(LocalKind kind, std::size_t dim, std::size_t layer) {
  if (dim < 2 * layer + 3) throw std::out_of_range("layer too deep for this local dimension");
  const std::size_t width = dim - 2 * layer;
  return kind == LocalKind::Beta ? width - 2 : width - 1;
}

ComplexVector local_vector(const LocalVectorFamily& f) {
  const std::size_t count = family_size(f.kind, f.dim, f.layer);
  if (f.index >= count) throw std::out_of_range("local vector index out of range");
  const std::size_t n = f.layer;
  // eta lives on n..X_n+n-2, xi one cell up, beta on n+1..X_n+n-2 (X_n = dim - 2n)
  const std::size_t period = count;
  const std::size_t shift = f.kind == LocalKind::Eta ? 0 : 1;
  ComplexVector v = ComplexVector::Zero(f.dim);
  for (std::size_t t = 0; t < period; ++t) {
    v[n + t + shift] = root_of_unity(period, static_cast<long long>(f.index * t));
  }
  return v;
}

std::size_t max_layer(const SystemDims& dims) {
  if (dims.parties() != 3) throw std::invalid_argument("the layered construction is tripartite");
  if (dims[0] < 3) throw std::invalid_argument("need d_A >= 3");
  if (!(dims[0] <= dims[1] && dims[1] <= dims[2])) throw std::invalid_argument("need d_A <= d_B <= d_C");
  return (dims[0] - 3) / 2;
}

namespace {

ComplexVector eta(std::size_t d, std::size_t n, std::size_t s) { return local_vector({LocalKind::Eta, d, n, s}); }
ComplexVector xi(std::size_t d, std::size_t n, std::size_t s) { return local_vector({LocalKind::Xi, d, n, s}); }
ComplexVector beta(std::size_t d, std::size_t n, std::size_t s) { return local_vector({LocalKind::Beta, d, n, s}); }

std::string index_text(const std::vector<int>& index) {
  std::string out = "(";
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(index[k]);
  }
  return out + ")";
}

struct Naming {
  bool greek_names = false;

  std::string operator()(Tile tile, int layer, const std::vector<int>& index) const {
    if (tile == Tile::Stopper) return "S";
    if (greek_names) {
      switch (tile) {
        case Tile::A1: return "psi1" + index_text(index);
        case Tile::A2: return "psi2" + index_text(index);
        case Tile::A3: return "psi3" + index_text(index);
        case Tile::A4: return "psi4";
        case Tile::B1: return "phi1" + index_text(index);
        case Tile::B2: return "phi2" + index_text(index);
        case Tile::B3: return "phi3" + index_text(index);
        case Tile::B4: return "phi4";
        case Tile::F: return "varphi" + index_text(index);
        default: break;
      }
    }
    std::string out = to_string(tile) + "^(" + std::to_string(layer) + ")";
    if (!index.empty()) out += index_text(index);
    return out;
  }
};

/// One state of a tile, with a flag for the index the tile leaves out.
struct TileState {
  ProductState state;
  bool excluded = false;
};

ProductState make_state(std::vector<ComplexVector> locals, Tile tile, int layer, std::vector<int> index,
                        const Naming& naming) {
  ProductState s;
  s.locals = std::move(locals);
  s.label.tile = tile;
  s.label.layer = layer;
  s.label.name = naming(tile, layer, index);
  s.label.index = std::move(index);
  return s;
}

/// Every state of the three-party layer-t tiles A1..A4 and B1..B4, including
/// the (0,0) members that the construction excludes.
std::vector<TileState> layer_tiles(const SystemDims& dims, std::size_t t, const Naming& naming) {
  const std::size_t dA = dims[0], dB = dims[1], dC = dims[2];
  const std::size_t nA = family_size(LocalKind::Eta, dA, t);
  const std::size_t nB = family_size(LocalKind::Eta, dB, t);
  const std::size_t nC = family_size(LocalKind::Eta, dC, t);
  const int layer = static_cast<int>(t);
  std::vector<TileState> out;

  auto pair_tile = [&](Tile tile, std::size_t n1, std::size_t n2, auto&& locals) {
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        std::vector<int> index{static_cast<int>(i), static_cast<int>(j)};
        out.push_back({make_state(locals(i, j), tile, layer, index, naming), i == 0 && j == 0});
      }
    }
  };

  pair_tile(Tile::A1, nA, nC, [&](std::size_t i, std::size_t k) {
    return std::vector<ComplexVector>{xi(dA, t, i), basis_vector(dB, t), eta(dC, t, k)};
  });
  pair_tile(Tile::A2, nA, nB, [&](std::size_t i, std::size_t j) {
    return std::vector<ComplexVector>{xi(dA, t, i), eta(dB, t, j), basis_vector(dC, dC - 1 - t)};
  });
  pair_tile(Tile::A3, nB, nC, [&](std::size_t j, std::size_t k) {
    return std::vector<ComplexVector>{basis_vector(dA, dA - 1 - t), xi(dB, t, j), eta(dC, t, k)};
  });
  out.push_back({make_state({basis_vector(dA, dA - 1 - t), basis_vector(dB, dB - 1 - t), basis_vector(dC, dC - 1 - t)},
                            Tile::A4, layer, {}, naming),
                 true});
  pair_tile(Tile::B1, nA, nC, [&](std::size_t i, std::size_t k) {
    return std::vector<ComplexVector>{eta(dA, t, i), basis_vector(dB, dB - 1 - t), xi(dC, t, k)};
  });
  pair_tile(Tile::B2, nA, nB, [&](std::size_t i, std::size_t j) {
    return std::vector<ComplexVector>{eta(dA, t, i), xi(dB, t, j), basis_vector(dC, t)};
  });
  pair_tile(Tile::B3, nB, nC, [&](std::size_t j, std::size_t k) {
    return std::vector<ComplexVector>{basis_vector(dA, t), eta(dB, t, j), xi(dC, t, k)};
  });
  out.push_back({make_state({basis_vector(dA, t), basis_vector(dB, t), basis_vector(dC, t)}, Tile::B4, layer, {}, naming),
                 true});
  return out;
}

/// All states of F^(n), including the (0,0,0) member.
std::vector<TileState> inner_tile(const SystemDims& dims, std::size_t n, const Naming& naming, bool short_index) {
  const std::size_t dA = dims[0], dB = dims[1], dC = dims[2];
  const std::size_t nA = family_size(LocalKind::Beta, dA, n);
  const std::size_t nB = family_size(LocalKind::Beta, dB, n);
  const std::size_t nC = family_size(LocalKind::Beta, dC, n);
  std::vector<TileState> out;
  for (std::size_t i = 0; i < nA; ++i) {
    for (std::size_t j = 0; j < nB; ++j) {
      for (std::size_t k = 0; k < nC; ++k) {
        std::vector<int> index{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
        if (short_index) index = {static_cast<int>(k)};
        out.push_back({make_state({beta(dA, n, i), beta(dB, n, j), beta(dC, n, k)}, Tile::F, static_cast<int>(n),
                                  std::move(index), naming),
                       i == 0 && j == 0 && k == 0});
      }
    }
  }
  return out;
}

ProductState stopper(const SystemDims& dims, const Naming& naming) {
  std::vector<ComplexVector> locals;
  for (std::size_t p = 0; p < dims.parties(); ++p) locals.push_back(ComplexVector::Ones(dims[p]));
  return make_state(std::move(locals), Tile::Stopper, 0, {}, naming);
}

void check_layer(const SystemDims& dims, std::size_t layer) {
  if (layer > max_layer(dims)) {
    throw std::invalid_argument("layer " + std::to_string(layer) + " exceeds floor((d_A-3)/2) = " +
                                std::to_string(max_layer(dims)));
  }
}

StateSet assemble(const SystemDims& dims, std::size_t layer, const Naming& naming, bool short_f_index) {
  check_layer(dims, layer);
  StateSet set;
  set.dims = dims;
  set.layer_depth = static_cast<int>(layer);
  set.family = layer == 0 ? Family::Tripartite : Family::Layered;
  for (std::size_t t = 0; t <= layer; ++t) {
    for (auto& ts : layer_tiles(dims, t, naming)) {
      if (!ts.excluded) set.states.push_back(std::move(ts.state));
    }
  }
  for (auto& ts : inner_tile(dims, layer, naming, short_f_index)) {
    if (!ts.excluded) set.states.push_back(std::move(ts.state));
  }
  set.states.push_back(stopper(dims, naming));
  return set;
}

}  // namespace

StateSet build_334() {
  StateSet set = assemble(SystemDims{3, 3, 4}, 0, Naming{true}, true);
  set.family = Family::Example334;
  return set;
}

StateSet build_layered(const SystemDims& dims, std::size_t layer) { return assemble(dims, layer, Naming{false}, false); }

RemovedStates removed_states(const SystemDims& dims, std::size_t layer) {
  check_layer(dims, layer);
  const Naming naming{false};
  RemovedStates removed;
  removed.tiles.dims = dims;
  removed.tiles.layer_depth = static_cast<int>(layer);
  removed.tiles.family = Family::Custom;
  for (std::size_t t = 0; t <= layer; ++t) {
    for (auto& ts : layer_tiles(dims, t, naming)) {
      if (ts.excluded) removed.tiles.states.push_back(std::move(ts.state));
    }
  }
  for (auto& ts : inner_tile(dims, layer, naming, false)) {
    if (ts.excluded) {
      removed.stopper_replaced = std::move(ts.state);
      break;
    }
  }
  return removed;
}

StateSet build_shifts() {
  const double h = 1.0 / std::sqrt(2.0);
  const ComplexVector zero = basis_vector(2, 0), one = basis_vector(2, 1);
  const ComplexVector plus = h * (zero + one), minus = h * (zero - one);
  StateSet set;
  set.dims = SystemDims{2, 2, 2};
  set.family = Family::Custom;
  auto add = [&](std::vector<ComplexVector> locals, int k) {
    ProductState s;
    s.locals = std::move(locals);
    s.label.tile = Tile::Custom;
    s.label.index = {k};
    s.label.name = "psi" + std::to_string(k);
    set.states.push_back(std::move(s));
  };
  add({zero, one, plus}, 0);
  add({one, plus, zero}, 1);
  add({plus, zero, one}, 2);
  add({minus, minus, minus}, 3);
  return set;
}

StateSet permute_parties(const StateSet& set, const std::vector<std::size_t>& perm) {
  if (perm.size() != set.dims.parties()) throw DimensionError("permutation has the wrong length");
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (auto p : perm) {
    dims.push_back(set.dims[p]);
    labels.push_back(set.dims.label(p));
  }
  StateSet out;
  out.dims = SystemDims(dims, labels);
  out.layer_depth = set.layer_depth;
  out.family = Family::Custom;
  for (const auto& s : set.states) {
    ProductState t;
    t.label = s.label;
    for (auto p : perm) t.locals.push_back(s.locals.at(p));
    out.states.push_back(std::move(t));
  }
  return out;
}

std::string GridTiling::column_label(std::size_t col) const {
  const auto& parties = cut.right();
  std::vector<std::size_t> digits(parties.size());
  for (std::size_t k = parties.size(); k-- > 0;) {
    digits[k] = col % dims[parties[k]];
    col /= dims[parties[k]];
  }
  const bool wide = std::any_of(parties.begin(), parties.end(), [&](std::size_t p) { return dims[p] > 10; });
  std::string out;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (wide && k) out += '.';
    out += std::to_string(digits[k]);
  }
  return out;
}

GridTiling grid(const SystemDims& dims, std::size_t layer, const Bipartition& cut_in) {
  check_layer(dims, layer);
  cut_in.validate_for(dims);
  Bipartition cut = cut_in;
  if (cut.left().size() != 1) {
    if (cut.right().size() != 1) throw std::invalid_argument("grid cut must separate one party from the rest");
    cut = Bipartition(cut.right(), cut.left());
  }

  GridTiling tiling{dims, cut, 0, 0, {}};
  tiling.rows = dims[cut.left()[0]];
  tiling.cols = dims.total() / tiling.rows;

  const Naming naming{false};
  std::vector<std::pair<GridTile, std::vector<ProductState>>> groups;
  auto group_for = [&](Tile tile, int layer_index) -> std::vector<ProductState>& {
    const std::string name = to_string(tile) + "^(" + std::to_string(layer_index) + ")";
    for (auto& g : groups) {
      if (g.first.name == name) return g.second;
    }
    GridTile gt;
    gt.name = name;
    gt.tile = tile;
    gt.layer = layer_index;
    gt.removed = tile == Tile::A4 || tile == Tile::B4;
    groups.push_back({gt, {}});
    return groups.back().second;
  };
  for (std::size_t t = 0; t <= layer; ++t) {
    for (auto& ts : layer_tiles(dims, t, naming)) group_for(ts.state.label.tile, static_cast<int>(t)).push_back(ts.state);
  }
  for (auto& ts : inner_tile(dims, layer, naming, false)) group_for(Tile::F, static_cast<int>(layer)).push_back(ts.state);

  for (auto& [gt, states] : groups) {
    std::set<std::pair<std::size_t, std::size_t>> cells;
    for (const auto& s : states) {
      const ComplexMatrix m = matricize(s.vector(), dims, cut);
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          if (std::abs(m(r, c)) > 1e-12) cells.insert({static_cast<std::size_t>(r), static_cast<std::size_t>(c)});
        }
      }
    }
    gt.cells.assign(cells.begin(), cells.end());
    tiling.tiles.push_back(std::move(gt));
  }
  return tiling;
}

namespace {

char tile_symbol(const GridTile& tile) {
  if (tile.removed) return '#';
  if (tile.tile == Tile::F) return '*';
  int offset = 0;
  switch (tile.tile) {
    case Tile::A1: case Tile::B1: offset = 0; break;
    case Tile::A2: case Tile::B2: offset = 1; break;
    case Tile::A3: case Tile::B3: offset = 2; break;
    default: return '?';
  }
  const bool upper = tile.tile == Tile::B1 || tile.tile == Tile::B2 || tile.tile == Tile::B3;
  const int code = (3 * tile.layer + offset) % 26;
  return static_cast<char>((upper ? 'A' : 'a') + code);
}

}  // namespace

std::string render_grid(const GridTiling& tiling) {
  std::vector<std::string> cell(tiling.rows * tiling.cols, ".");
  for (const auto& tile : tiling.tiles) {
    for (auto [r, c] : tile.cells) cell[r * tiling.cols + c] = std::string(1, tile_symbol(tile));
  }
  std::size_t width = 1;
  for (std::size_t c = 0; c < tiling.cols; ++c) width = std::max(width, tiling.column_label(c).size());

  std::ostringstream out;
  const std::string row_party = tiling.dims.label(tiling.cut.left()[0]);
  std::string col_parties;
  for (auto p : tiling.cut.right()) col_parties += tiling.dims.label(p);
  out << row_party << "\\" << col_parties << ' ';
  for (std::size_t c = 0; c < tiling.cols; ++c) {
    std::string label = tiling.column_label(c);
    out << ' ' << std::string(width - label.size(), ' ') << label;
  }
  out << '\n';
  const std::size_t lead = row_party.size() + col_parties.size() + 2;
  for (std::size_t r = 0; r < tiling.rows; ++r) {
    std::string head = std::to_string(r);
    out << std::string(lead - head.size(), ' ') << head;
    for (std::size_t c = 0; c < tiling.cols; ++c) {
      out << ' ' << std::string(width - 1, ' ') << cell[r * tiling.cols + c];
    }
    out << '\n';
  }
  out << "legend:";
  for (const auto& tile : tiling.tiles) {
    out << ' ' << tile_symbol(tile) << '=' << tile.name;
  }
  out << " (# = removed cell)\n";
  return out.str();
}

}  // namespace upb
