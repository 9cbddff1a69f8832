#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upb/linalg.hpp"

namespace upb {

/// Which tile of the cube decomposition a state belongs to.
enum class Tile { A1, A2, A3, A4, B1, B2, B3, B4, F, Stopper, Custom };

std::string to_string(Tile tile);
Tile tile_from_string(const std::string& text);

/// Structured label; the verifier locates tiles and (0,0)-indexed states through it.
struct StateLabel {
  Tile tile = Tile::Custom;
  int layer = 0;
  std::vector<int> index;
  std::string name;

  bool operator==(const StateLabel& other) const {
    return tile == other.tile && layer == other.layer && index == other.index && name == other.name;
  }
};

/// A fully product pure state, stored unnormalized as one local vector per party.
struct ProductState {
  std::vector<ComplexVector> locals;
  StateLabel label;

  ComplexVector vector() const { return kron_all(locals); }
};

enum class Family { Example334, Tripartite, Layered, Custom };

std::string to_string(Family family);
Family family_from_string(const std::string& text);

struct StateSet {
  SystemDims dims;
  std::vector<ProductState> states;
  int layer_depth = 0;
  Family family = Family::Custom;

  std::size_t size() const { return states.size(); }
  /// Throws when a state's local dimensions disagree with dims or labels repeat.
  void validate() const;
  /// Index of the stopper, if present.
  std::optional<std::size_t> stopper_index() const;
  /// Rows are the full composite vectors.
  std::vector<ComplexVector> vectors() const;
};

/// The states a layered construction leaves out. `tiles` holds the 8(n+1)
/// excluded states; `stopper_replaced` is the F^(n)(0,0,0) state whose role
/// the stopper takes over, kept apart so the 8(n+1) count stays exact.
struct RemovedStates {
  StateSet tiles;
  ProductState stopper_replaced;
};

enum class LocalKind { Eta, Xi, Beta };

struct LocalVectorFamily {
  LocalKind kind = LocalKind::Eta;
  std::size_t dim = 0;
  std::size_t layer = 0;
  std::size_t index = 0;
};

/// Fourier-type local vectors eta^(n)_s, xi^(n)_s, beta^(n)_s on a party of dimension dim.
ComplexVector local_vector(const LocalVectorFamily& f);
/// Number of vectors in the family at this dimension and layer.
std::size_t family_size(LocalKind kind, std::size_t dim, std::size_t layer);

/// Largest admissible layer index floor((d_A - 3) / 2); throws if dims are invalid.
std::size_t max_layer(const SystemDims& dims);

/// The 28-state UPB in 3x3x4, labelled with the psi/phi/varphi names.
StateSet build_334();
/// The layered UPB U_n of size d_A d_B d_C - 8(n+1).
StateSet build_layered(const SystemDims& dims, std::size_t layer);
RemovedStates removed_states(const SystemDims& dims, std::size_t layer);

/// The SHIFTS UPB in 2x2x2 (normalized local vectors).
StateSet build_shifts();

/// Reorders the parties of every state; perm[k] is the old index of the new party k.
StateSet permute_parties(const StateSet& set, const std::vector<std::size_t>& perm);

struct GridTile {
  std::string name;  ///< e.g. "A1^(0)"
  Tile tile = Tile::Custom;
  int layer = 0;
  bool removed = false;  ///< A4/B4 singleton cells
  std::vector<std::pair<std::size_t, std::size_t>> cells;  ///< (row, column)
};

/// A d_X x (product of the other dims) picture of the tile decomposition.
struct GridTiling {
  SystemDims dims;
  Bipartition cut;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<GridTile> tiles;

  /// Composite label for a column, e.g. "02" for the joint party.
  std::string column_label(std::size_t col) const;
};

GridTiling grid(const SystemDims& dims, std::size_t layer, const Bipartition& cut);

/// ASCII rendering, one character per tile, with a legend.
std::string render_grid(const GridTiling& tiling);

}  // namespace upb
