#include <gtest/gtest.h>

#include "upb/constructions.hpp"
#include "upb/verify.hpp"

using namespace upb;

TEST(Orthogonality, Example334) {
  const auto r = check_orthogonality(build_334());
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_overlap, 1e-12);
}

TEST(Orthogonality, Shifts) { EXPECT_TRUE(check_orthogonality(build_shifts()).passed); }

TEST(Orthogonality, DuplicateIsReported) {
  StateSet set = build_334();
  ProductState dup = set.states[4];
  dup.label.name = "dup";
  set.states.push_back(dup);
  const auto r = check_orthogonality(set);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.worst_pair.has_value());
  EXPECT_EQ(r.worst_pair->first, 4u);
  EXPECT_EQ(r.worst_pair->second, set.size() - 1);
  EXPECT_NEAR(r.max_overlap, 1.0, 1e-12);
}

TEST(Orthogonality, ScaleInvariant) {
  StateSet set = build_334();
  for (auto& s : set.states) s.locals[1] *= Complex(-3.5, 1e3);
  const auto r = check_orthogonality(set);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_overlap, 1e-12);
}

TEST(Completeness, Example334) {
  const auto r = check_completeness(build_334(), removed_states(SystemDims{3, 3, 4}, 0), SystemDims{3, 3, 4});
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.count, 36u);
}

TEST(Completeness, MissingStateFails) {
  RemovedStates removed = removed_states(SystemDims{3, 3, 4}, 0);
  removed.tiles.states.pop_back();
  const auto r = check_completeness(build_334(), removed, SystemDims{3, 3, 4});
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.count, 35u);
}

TEST(Completeness, Layered345) {
  const SystemDims dims{3, 4, 5};
  const auto r = check_completeness(build_layered(dims, 0), removed_states(dims, 0), dims);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.count, 60u);
}

TEST(ComplementProjector, Example334) {
  const ComplexMatrix p = complement_projector(build_334(), SystemDims{3, 3, 4});
  EXPECT_EQ(rank(p), 8u);
  EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ComplementProjector, CompleteBasisGivesZero) {
  const SystemDims dims{3, 3, 4};
  StateSet full = build_334();
  full.states.erase(full.states.begin() + static_cast<std::ptrdiff_t>(*full.stopper_index()));
  const RemovedStates r = removed_states(dims, 0);
  for (const auto& s : r.tiles.states) full.states.push_back(s);
  full.states.push_back(r.stopper_replaced);
  EXPECT_LE(max_abs(complement_projector(full, dims)), 1e-10);
}

TEST(ComplementProjector, EmptySetIsIdentity) {
  StateSet empty;
  empty.dims = SystemDims{2, 3};
  EXPECT_EQ(complement_projector(empty, empty.dims), ComplexMatrix(ComplexMatrix::Identity(6, 6)));
}

TEST(ComplementProjector, RejectsNonOrthogonal) {
  StateSet set = build_shifts();
  set.states.push_back(set.states[0]);
  set.states.back().label.name = "copy";
  EXPECT_THROW(complement_projector(set, set.dims), std::invalid_argument);
}
