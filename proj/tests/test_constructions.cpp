#include <gtest/gtest.h>

#include <map>
#include <set>

#include "upb/constructions.hpp"
#include "upb/verify.hpp"

using namespace upb;

namespace {

std::vector<std::pair<SystemDims, std::size_t>> sweep() {
  std::vector<std::pair<SystemDims, std::size_t>> out;
  for (std::size_t a = 3; a <= 7; ++a)
    for (std::size_t b = a; b <= 7; ++b)
      for (std::size_t c = b; c <= 7; ++c)
        for (std::size_t n = 0; n <= (a - 3) / 2; ++n) out.push_back({SystemDims{a, b, c}, n});
  return out;
}

const ProductState& by_name(const StateSet& set, const std::string& name) {
  for (const auto& s : set.states)
    if (s.label.name == name) return s;
  throw std::runtime_error("missing state " + name);
}

}  // namespace

TEST(LocalVector, EtaThree) {
  const ComplexVector v = local_vector({LocalKind::Eta, 3, 0, 1});
  ASSERT_EQ(v.size(), 3);
  EXPECT_LT(std::abs(v[0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(v[1] + 1.0), 1e-15);
  EXPECT_EQ(v[2], Complex(0.0, 0.0));
}

TEST(LocalVector, XiFour) {
  const ComplexVector v = local_vector({LocalKind::Xi, 4, 0, 1});
  const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
  EXPECT_EQ(v[0], Complex(0.0, 0.0));
  EXPECT_LT(std::abs(v[1] - 1.0), 1e-15);
  EXPECT_LT(std::abs(v[2] - w), 1e-15);
  EXPECT_LT(std::abs(v[3] - w * w), 1e-15);
}

TEST(LocalVector, BetaFiveLayerOne) {
  // X_1 = 3, so the sum over t runs over the single value t = 1 and lands on e_2
  const std::size_t d = 5, n = 1, x = d - 2 * n;
  ComplexVector oracle = ComplexVector::Zero(5);
  for (std::size_t t = n; t + 3 <= x + n; ++t) oracle[static_cast<Eigen::Index>(t + 1)] += 1.0;
  const ComplexVector v = local_vector({LocalKind::Beta, d, n, 0});
  EXPECT_LT((v - oracle).norm(), 1e-15);
  EXPECT_EQ(v.cwiseAbs().sum(), 1.0);
  EXPECT_EQ(v[2], Complex(1.0, 0.0));
}

TEST(LocalVector, IndexOutOfRange) {
  EXPECT_THROW(local_vector({LocalKind::Eta, 3, 0, 2}), std::out_of_range);
  EXPECT_THROW(local_vector({LocalKind::Beta, 4, 0, 2}), std::out_of_range);
  EXPECT_THROW(local_vector({LocalKind::Xi, 4, 1, 0}), std::out_of_range);
}

TEST(LocalVector, FamilyOrthogonalityAndSupport) {
  for (std::size_t d = 3; d <= 9; ++d) {
    for (std::size_t n = 0; 2 * n + 3 <= d; ++n) {
      const std::size_t x = d - 2 * n;
      for (auto kind : {LocalKind::Eta, LocalKind::Xi, LocalKind::Beta}) {
        const std::size_t count = family_size(kind, d, n);
        const double norm2 = kind == LocalKind::Beta ? double(x - 2) : double(x - 1);
        std::size_t lo = n + (kind == LocalKind::Eta ? 0 : 1);
        std::size_t hi = kind == LocalKind::Xi ? x + n - 1 : x + n - 2;
        ASSERT_EQ(count, hi - lo + 1);
        for (std::size_t s = 0; s < count; ++s) {
          const ComplexVector u = local_vector({kind, d, n, s});
          for (std::size_t k = 0; k < d; ++k) {
            if (k < lo || k > hi) EXPECT_EQ(u[static_cast<Eigen::Index>(k)], Complex(0.0, 0.0));
          }
          for (std::size_t t = 0; t < count; ++t) {
            const Complex ip = inner(u, local_vector({kind, d, n, t}));
            EXPECT_NEAR(std::abs(ip), s == t ? norm2 : 0.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(Build334, SizeAndTiles) {
  const StateSet set = build_334();
  EXPECT_EQ(set.size(), 28u);
  EXPECT_EQ(set.family, Family::Example334);
  std::map<Tile, int> counts;
  for (const auto& s : set.states) ++counts[s.label.tile];
  EXPECT_EQ(counts[Tile::A1], 5);
  EXPECT_EQ(counts[Tile::A2], 3);
  EXPECT_EQ(counts[Tile::A3], 5);
  EXPECT_EQ(counts[Tile::B1], 5);
  EXPECT_EQ(counts[Tile::B2], 3);
  EXPECT_EQ(counts[Tile::B3], 5);
  EXPECT_EQ(counts[Tile::F], 1);
  EXPECT_EQ(counts[Tile::Stopper], 1);
  EXPECT_NO_THROW(set.validate());
}

TEST(Build334, NamedStates) {
  const StateSet set = build_334();
  const auto& f = by_name(set, "varphi(1)");
  EXPECT_EQ(f.label.tile, Tile::F);
  EXPECT_EQ(f.locals[0], basis_vector(3, 1));
  EXPECT_EQ(f.locals[1], basis_vector(3, 1));
  EXPECT_LE((f.locals[2] - (basis_vector(4, 1) - basis_vector(4, 2))).norm(), 1e-15);
  const auto& s = by_name(set, "S");
  EXPECT_EQ(s.locals[0], ComplexVector::Ones(3));
  EXPECT_EQ(s.locals[1], ComplexVector::Ones(3));
  EXPECT_EQ(s.locals[2], ComplexVector::Ones(4));
  // psi1(i,k) = xi_i |0> eta_k
  const auto& p = by_name(set, "psi1(1,2)");
  EXPECT_EQ(p.locals[1], basis_vector(3, 0));
  EXPECT_LT(std::abs(p.locals[0][2] + 1.0), 1e-15);
}

TEST(Build334, MatchesLayeredUpToNaming) {
  const StateSet a = build_334();
  const StateSet b = build_layered(SystemDims{3, 3, 4}, 0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.states[k].label.tile, b.states[k].label.tile);
    EXPECT_LT((a.states[k].vector() - b.states[k].vector()).norm(), 1e-15);
  }
}

TEST(BuildLayered, Sizes) {
  EXPECT_EQ(build_layered(SystemDims{3, 3, 3}, 0).size(), 19u);
  EXPECT_EQ(build_layered(SystemDims{5, 5, 5}, 1).size(), 109u);
  const StateSet s = build_layered(SystemDims{3, 4, 5}, 0);
  EXPECT_EQ(s.size(), 52u);
  std::size_t f = 0;
  for (const auto& st : s.states) f += st.label.tile == Tile::F;
  // index tuples of Z1 x Z2 x Z3 without (0,0,0)
  std::size_t tuples = 0;
  for (int i = 0; i < 1; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k) tuples += (i || j || k) ? 1 : 0;
  EXPECT_EQ(f, tuples);
}

TEST(BuildLayered, SizeIdentityOverSweep) {
  for (const auto& [dims, n] : sweep()) {
    EXPECT_EQ(build_layered(dims, n).size() + 8 * (n + 1), dims.total());
    EXPECT_EQ(removed_states(dims, n).tiles.size(), 8 * (n + 1));
  }
}

TEST(BuildLayered, Errors) {
  EXPECT_THROW(build_layered(SystemDims{4, 3, 5}, 0), std::invalid_argument);
  EXPECT_THROW(build_layered(SystemDims{3, 3, 4}, 1), std::invalid_argument);
  EXPECT_THROW(build_layered(SystemDims{5, 5, 6}, 2), std::invalid_argument);
  EXPECT_THROW(build_layered(SystemDims{3, 4}, 0), std::invalid_argument);
}

TEST(BuildLayered, LabelsUnique) {
  for (const auto& [dims, n] : sweep()) EXPECT_NO_THROW(build_layered(dims, n).validate());
}

TEST(BuildLayered, LayerNesting) {
  for (const SystemDims dims : {SystemDims{5, 5, 5}, SystemDims{5, 6, 7}, SystemDims{7, 7, 7}}) {
    for (std::size_t n = 1; n <= max_layer(dims); ++n) {
      const StateSet outer = build_layered(dims, n);
      const StateSet inner = build_layered(dims, n - 1);
      std::map<std::string, ComplexVector> have;
      for (const auto& s : outer.states) have[s.label.name] = s.vector();
      for (const auto& s : inner.states) {
        if (s.label.tile == Tile::F || s.label.tile == Tile::Stopper) continue;
        auto it = have.find(s.label.name);
        ASSERT_NE(it, have.end()) << s.label.name;
        EXPECT_LT((it->second - s.vector()).norm(), 1e-14);
      }
    }
  }
}

TEST(RemovedStates, Example334) {
  const RemovedStates r = removed_states(SystemDims{3, 3, 4}, 0);
  ASSERT_EQ(r.tiles.size(), 8u);
  std::multiset<Tile> tiles;
  for (const auto& s : r.tiles.states) {
    tiles.insert(s.label.tile);
    if (!s.label.index.empty()) EXPECT_EQ(s.label.index, (std::vector<int>{0, 0}));
  }
  for (auto t : {Tile::A1, Tile::A2, Tile::A3, Tile::A4, Tile::B1, Tile::B2, Tile::B3, Tile::B4})
    EXPECT_EQ(tiles.count(t), 1u);
  EXPECT_EQ(r.stopper_replaced.label.tile, Tile::F);
  // F(0) = |1>|1>(|1>+|2>)
  const ComplexVector c = basis_vector(4, 1) + basis_vector(4, 2);
  EXPECT_EQ(r.stopper_replaced.locals[2], c);
}

TEST(RemovedStates, CompleteBasisWithSet) {
  const SystemDims dims{3, 4, 5};
  const StateSet set = build_layered(dims, 0);
  const RemovedStates r = removed_states(dims, 0);
  std::vector<ComplexVector> all;
  for (const auto& s : set.states)
    if (s.label.tile != Tile::Stopper) all.push_back(s.vector());
  for (const auto& s : r.tiles.states) all.push_back(s.vector());
  all.push_back(r.stopper_replaced.vector());
  ASSERT_EQ(all.size(), 60u);
  ComplexMatrix m(60, 60);
  for (int k = 0; k < 60; ++k) m.col(k) = all[static_cast<std::size_t>(k)];
  EXPECT_EQ(Eigen::FullPivLU<ComplexMatrix>(m).rank(), 60);
}

TEST(PermuteParties, ReordersLocals) {
  const StateSet set = build_334();
  const StateSet p = permute_parties(set, {2, 0, 1});
  EXPECT_EQ(p.dims.dims(), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(p.states[5].locals[0], set.states[5].locals[2]);
  EXPECT_THROW(permute_parties(set, {0, 1}), DimensionError);
}

TEST(Grid, A1TileOf334) {
  const SystemDims dims{3, 3, 4};
  const GridTiling g = grid(dims, 0, Bipartition::parse("A|BC", dims));
  EXPECT_EQ(g.rows, 3u);
  EXPECT_EQ(g.cols, 12u);
  const GridTile* a1 = nullptr;
  for (const auto& t : g.tiles)
    if (t.name == "A1^(0)") a1 = &t;
  ASSERT_NE(a1, nullptr);
  std::set<std::pair<std::size_t, std::size_t>> expect;
  for (std::size_t r : {1, 2})
    for (std::size_t c : {0, 1, 2}) expect.insert({r, c});
  const std::set<std::pair<std::size_t, std::size_t>> cells(a1->cells.begin(), a1->cells.end());
  EXPECT_EQ(cells, expect);
  EXPECT_EQ(g.column_label(0), "00");
  EXPECT_EQ(g.column_label(2), "02");
  EXPECT_EQ(g.column_label(11), "23");
}

TEST(Grid, TilesPartitionTheGrid) {
  for (const auto& [dims, n] : sweep()) {
    for (std::size_t p = 0; p < 3; ++p) {
      const GridTiling g = grid(dims, n, Bipartition::solo_vs_rest(p, 3));
      std::vector<int> hits(g.rows * g.cols, 0);
      for (const auto& t : g.tiles)
        for (auto [r, c] : t.cells) ++hits[r * g.cols + c];
      for (int h : hits) EXPECT_EQ(h, 1);
    }
  }
}

TEST(Grid, PointSymmetryOnCubes) {
  for (std::size_t d : {3, 5, 7}) {
    const SystemDims dims{d, d, d};
    for (std::size_t n = 0; n <= max_layer(dims); ++n) {
      for (std::size_t p = 0; p < 3; ++p) {
        const GridTiling g = grid(dims, n, Bipartition::solo_vs_rest(p, 3));
        std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> cells;
        for (const auto& t : g.tiles) cells[t.name] = {t.cells.begin(), t.cells.end()};
        for (int t = 0; t <= int(n); ++t) {
          for (int i = 1; i <= 4; ++i) {
            const std::string suffix = std::to_string(i) + "^(" + std::to_string(t) + ")";
            std::set<std::pair<std::size_t, std::size_t>> mirrored;
            for (auto [r, c] : cells["A" + suffix]) mirrored.insert({g.rows - 1 - r, g.cols - 1 - c});
            EXPECT_EQ(mirrored, cells["B" + suffix]) << "d=" << d << " tile " << suffix;
          }
        }
      }
    }
  }
}

TEST(Grid, NestedLayers) {
  const SystemDims dims{5, 5, 5};
  const GridTiling g = grid(dims, 1, Bipartition::parse("A|BC", dims));
  std::set<std::string> names;
  for (const auto& t : g.tiles) names.insert(t.name);
  for (const char* n : {"A1^(0)", "B1^(0)", "A1^(1)", "B3^(1)", "F^(1)"}) EXPECT_TRUE(names.count(n)) << n;
  const std::string text = render_grid(g);
  EXPECT_NE(text.find('#'), std::string::npos);
  EXPECT_NE(text.find("A1^(1)"), std::string::npos);
}

TEST(Grid, RejectsBadCut) {
  const SystemDims dims{3, 3, 4};
  EXPECT_THROW(grid(dims, 0, Bipartition::parse("A|B", dims)), std::invalid_argument);
}
