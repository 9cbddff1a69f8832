#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "upb/constructions.hpp"
#include "upb/verify.hpp"

using namespace upb;
using oracle::brute_force_solution_dim;

namespace {

/// Pairs whose spectator overlap is non-zero, counted directly.
std::size_t spectator_pairs(const StateSet& set, const std::vector<std::size_t>& spectators) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      Complex ip{1.0, 0.0};
      for (auto p : spectators) ip *= set.states[i].locals[p].dot(set.states[j].locals[p]);
      if (std::abs(ip) > 1e-9) ++count;
    }
  }
  return count;
}

}  // namespace

TEST(OpConstraints, ShiftsBC) {
  const StateSet set = build_shifts();
  const ConstraintSystem cs = op_constraints(set, Bipartition({0}, {1, 2}));
  EXPECT_EQ(cs.joint_dim, 4u);
  ASSERT_EQ(cs.rows.size(), 4u);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& r : cs.rows) pairs.emplace_back(r.first, r.second);
  const std::vector<std::pair<std::size_t, std::size_t>> expect{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  EXPECT_EQ(pairs, expect);
}

TEST(OpConstraints, RowCountMatchesPairEnumeration) {
  const StateSet set = build_334();
  for (std::size_t p = 0; p < 3; ++p) {
    const auto cut = Bipartition::solo_vs_rest(p, 3);
    EXPECT_EQ(op_constraints(set, cut).rows.size(), spectator_pairs(set, cut.left()));
  }
}

TEST(OpConstraints, CompleteBasisHasOnlyNonOrthogonalSpectators) {
  StateSet basis;
  basis.dims = SystemDims{2, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ProductState s;
      s.locals = {basis_vector(2, i), basis_vector(2, j)};
      s.label.name = std::to_string(i) + std::to_string(j);
      basis.states.push_back(s);
    }
  const auto cs = op_constraints(basis, Bipartition({0}, {1}));
  ASSERT_EQ(cs.rows.size(), 2u);
  for (const auto& r : cs.rows) EXPECT_EQ(r.first / 2, r.second / 2);
}

TEST(HermitianCoordinates, RoundTrip) {
  std::mt19937_64 rng(1);
  const ComplexMatrix g = testutil::random_matrix(rng, 4, 4);
  const ComplexMatrix h = g + g.adjoint();
  const RealVector x = hermitian_to_real(h);
  EXPECT_EQ(x.size(), 16);
  EXPECT_LT((real_to_hermitian(x, 4) - h).norm(), 1e-13);
  // coordinates are an isometry for the Frobenius norm
  EXPECT_NEAR(x.norm(), h.norm(), 1e-12);
}

TEST(SolveTriviality, Example334BC) {
  const auto cs = op_constraints(build_334(), Bipartition({0}, {1, 2}));
  const auto r = solve_triviality(cs);
  EXPECT_EQ(r.joint_dim, 12u);
  EXPECT_EQ(r.solution_dim, 1u);
  EXPECT_TRUE(r.contains_identity);
  EXPECT_TRUE(r.certified_trivial);
}

TEST(SolveTriviality, ShiftsBCNotCertified) {
  const auto cs = op_constraints(build_shifts(), Bipartition({0}, {1, 2}));
  const auto r = solve_triviality(cs);
  EXPECT_GE(r.solution_dim, 2u);
  EXPECT_EQ(r.solution_dim, brute_force_solution_dim(cs));
  EXPECT_FALSE(r.certified_trivial);
  EXPECT_TRUE(r.contains_identity);
}

TEST(SolveTriviality, EmptySystem) {
  ConstraintSystem cs;
  cs.joint_dim = 3;
  const auto r = solve_triviality(cs);
  EXPECT_EQ(r.solution_dim, 9u);
  EXPECT_TRUE(r.contains_identity);
  EXPECT_FALSE(r.certified_trivial);
}

TEST(SolveTriviality, BasisSatisfiesRows) {
  const auto cs = op_constraints(build_shifts(), Bipartition({1}, {0, 2}));
  const auto r = solve_triviality(cs);
  for (const auto& b : r.basis) {
    EXPECT_TRUE(is_hermitian(b, 1e-12));
    for (const auto& row : cs.rows) {
      EXPECT_LE(std::abs(row.bra.normalized().dot(b * row.ket.normalized())), 1e-8);
    }
  }
}

TEST(SolveTriviality, BruteForceEquivalenceOnSmallSystems) {
  std::mt19937_64 rng(31);
  // 2x2x2 sets: SHIFTS, its party permutations, and random orthogonal product sets
  std::vector<StateSet> sets{build_shifts(), permute_parties(build_shifts(), {1, 2, 0}),
                             permute_parties(build_shifts(), {2, 1, 0})};
  for (int trial = 0; trial < 5; ++trial) {
    StateSet s;
    s.dims = SystemDims{2, 2, 2};
    const ComplexMatrix qa = Eigen::HouseholderQR<ComplexMatrix>(testutil::random_matrix(rng, 2, 2)).householderQ();
    const ComplexMatrix qb = Eigen::HouseholderQR<ComplexMatrix>(testutil::random_matrix(rng, 2, 2)).householderQ();
    const ComplexVector c0 = testutil::random_vector(rng, 2), c1 = testutil::random_vector(rng, 2);
    const std::vector<std::vector<ComplexVector>> locals{
        {qa.col(0), qb.col(0), c0}, {qa.col(0), qb.col(1), c1}, {qa.col(1), c0, qb.col(0)}};
    for (std::size_t k = 0; k < locals.size(); ++k) {
      ProductState p;
      p.locals = locals[k];
      p.label.name = "r" + std::to_string(k);
      s.states.push_back(p);
    }
    sets.push_back(s);
  }
  for (const auto& set : sets) {
    for (std::size_t p = 0; p < 3; ++p) {
      for (const auto& cut : {Bipartition::solo_vs_rest(p, 3)}) {
        const auto cs = op_constraints(set, cut);
        EXPECT_EQ(solve_triviality(cs).solution_dim, brute_force_solution_dim(cs));
      }
    }
  }
}

TEST(StrongNonlocality, Example334) {
  const StateSet set = build_334();
  const auto reports = check_strong_nonlocality(set, set.dims);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.certified_trivial) << r.cut;
    EXPECT_EQ(r.provenance.size(), r.rows);
  }
  EXPECT_TRUE(certified_strongly_nonlocal(reports));
}

TEST(StrongNonlocality, Layered333) {
  const StateSet set = build_layered(SystemDims{3, 3, 3}, 0);
  EXPECT_TRUE(certified_strongly_nonlocal(check_strong_nonlocality(set, set.dims)));
}

TEST(StrongNonlocality, ShiftsInconclusive) {
  const StateSet set = build_shifts();
  const auto reports = check_strong_nonlocality(set, set.dims);
  EXPECT_FALSE(certified_strongly_nonlocal(reports));
  bool some_uncertified = false;
  for (const auto& r : reports) some_uncertified = some_uncertified || !r.certified_trivial;
  EXPECT_TRUE(some_uncertified);
}

TEST(StrongNonlocality, ScaleInvariant) {
  std::mt19937_64 rng(5);
  StateSet set = build_334();
  const auto before = check_strong_nonlocality(set, set.dims);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (auto& s : set.states)
    for (auto& v : s.locals) v *= std::polar(u(rng), u(rng));
  const auto after = check_strong_nonlocality(set, set.dims);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(before[k].solution_dim, after[k].solution_dim);
    EXPECT_EQ(before[k].certified_trivial, after[k].certified_trivial);
    EXPECT_EQ(before[k].rows, after[k].rows);
  }
}

TEST(StrongNonlocality, DroppingStatesBreaksCertificate) {
  // without the stopper and F the remaining tiles leave room for a non-trivial measurement
  StateSet set = build_334();
  std::vector<ProductState> kept;
  for (const auto& s : set.states)
    if (s.label.tile == Tile::A1 || s.label.tile == Tile::B1) kept.push_back(s);
  set.states = kept;
  EXPECT_FALSE(certified_strongly_nonlocal(check_strong_nonlocality(set, set.dims)));
}

TEST(StrongNonlocality, IdentityAlwaysContained) {
  for (const auto& set : {build_334(), build_shifts(), build_layered(SystemDims{3, 4, 4}, 0)}) {
    for (const auto& r : check_strong_nonlocality(set, set.dims)) EXPECT_TRUE(r.contains_identity);
  }
}
