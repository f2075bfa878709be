#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "eigenchaos/common.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/rng.hpp"

using namespace eigenchaos;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path(name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("partitions") {

TEST_CASE("nu counts diagonal positions twice") {
  CHECK(nu(Block{{{1, 2}, {2, 1}}}) == 2);
  CHECK(nu(Block{{{1, 1}}}) == 2);
  CHECK(nu(Block{{{1, 1}, {2, 3}, {3, 2}}}) == 4);
  CHECK_THROWS_AS((void)nu(Block{{{1, 2}}}), ValidationError);  // not mirror-closed
}

TEST_CASE("entries partition layout") {
  const AdmissiblePartition p = entries_partition(3);
  CHECK(p.m() == 6);
  CHECK(p.nu == 2);
  CHECK(p.finalized());
  CHECK_FALSE(validate_partition(p).has_value());
  // Row-major upper-triangle block order.
  CHECK(p.block_of(0, 0) == 0);
  CHECK(p.block_of(0, 1) == 1);
  CHECK(p.block_of(1, 0) == 1);
  CHECK(p.block_of(0, 2) == 2);
  CHECK(p.block_of(1, 1) == 3);
  CHECK(p.block_of(1, 2) == 4);
  CHECK(p.block_of(2, 2) == 5);
  REQUIRE(p.upper_reps(1).size() == 1);
  CHECK(p.upper_reps(1)[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("band partition tiling") {
  const AdmissiblePartition p = band_partition(8, 2);
  CHECK(p.m() == 9);
  CHECK(p.nu == 8);
  CHECK_FALSE(validate_partition(p).has_value());

  // width 1 reproduces the entries partition.
  const AdmissiblePartition b1 = band_partition(5, 1);
  const AdmissiblePartition e = entries_partition(5);
  REQUIRE(b1.m() == e.m());
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(b1.block_of(i, j) == e.block_of(i, j));
  }

  CHECK_THROWS_AS((void)band_partition(3, 2), ValidationError);  // width does not divide n
  CHECK_THROWS_AS((void)band_partition(4, 2), ValidationError);  // 2w^2 does not divide n(w+1)
  CHECK_THROWS_AS((void)band_partition(6, 2), ValidationError);
}

TEST_CASE("finalize rejects unequal block sizes") {
  AdmissiblePartition p;
  p.n = 2;
  p.blocks.push_back(Block{{{1, 1}, {1, 2}, {2, 1}}});  // nu = 4
  p.blocks.push_back(Block{{{2, 2}}});                  // nu = 2
  CHECK_THROWS_AS(p.finalize(), CheckFailure);
  const auto violation = validate_partition(p);
  REQUIRE(violation.has_value());
  CHECK(violation->condition == "equal-nu");
}

TEST_CASE("validator reports the first broken condition") {
  AdmissiblePartition sym;
  sym.n = 2;
  sym.blocks.push_back(Block{{{1, 1}}});
  sym.blocks.push_back(Block{{{2, 2}}});
  sym.blocks.push_back(Block{{{1, 2}}});  // missing the mirror
  auto v = validate_partition(sym);
  REQUIRE(v.has_value());
  CHECK(v->condition == "symmetry");

  AdmissiblePartition cover;
  cover.n = 2;
  cover.blocks.push_back(Block{{{1, 1}}});
  cover.blocks.push_back(Block{{{2, 2}}});  // (1,2)/(2,1) uncovered
  v = validate_partition(cover);
  REQUIRE(v.has_value());
  CHECK(v->condition == "coverage");

  AdmissiblePartition overlap;
  overlap.n = 2;
  overlap.blocks.push_back(Block{{{1, 1}}});
  overlap.blocks.push_back(Block{{{1, 2}, {2, 1}}});
  overlap.blocks.push_back(Block{{{2, 2}}});
  overlap.blocks.push_back(Block{{{2, 2}}});  // duplicate coverage
  v = validate_partition(overlap);
  REQUIRE(v.has_value());
  CHECK(v->condition == "disjointness");
}

TEST_CASE("sample_union draws distinct blocks and mirror-closed indices") {
  const AdmissiblePartition p = entries_partition(4);
  Rng rng(31, 0);
  const UnionSet u = sample_union(p, 3, rng);
  CHECK(u.k == 3);
  REQUIRE(u.block_ids.size() == 3);
  const std::set<int> distinct(u.block_ids.begin(), u.block_ids.end());
  CHECK(distinct.size() == 3);
  CHECK(std::is_sorted(u.block_ids.begin(), u.block_ids.end()));
  const std::set<std::pair<int, int>> pos(u.indices.begin(), u.indices.end());
  for (const auto& [i, j] : u.indices) CHECK(pos.count({j, i}) == 1);

  const UnionSet none = sample_union(p, 0, rng);
  CHECK(none.indices.empty());
  const UnionSet all = sample_union(p, p.m(), rng);
  CHECK(all.indices.size() == 16);  // every position of [4]x[4]
  CHECK_THROWS_AS((void)sample_union(p, p.m() + 1, rng), ValidationError);
  CHECK_THROWS_AS((void)sample_union(p, -1, rng), ValidationError);
}

TEST_CASE("partition text round trip") {
  const AdmissiblePartition p = band_partition(8, 2);
  TempFile f("tmp_partition_roundtrip.txt");
  write_partition_text(f.path, p);
  const AdmissiblePartition q = read_partition_text(f.path);
  REQUIRE(q.n == 8);
  CHECK(q.m() == p.m());
  CHECK(q.nu == p.nu);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) CHECK(q.block_of(i, j) == p.block_of(i, j));
  }
}

TEST_CASE("partition reader separates parse errors from admissibility") {
  CHECK_THROWS_AS((void)read_partition_text("no_such_partition.txt"), ValidationError);

  TempFile garbage("tmp_partition_garbage.txt");
  write_text_atomic(garbage.path, "not a partition\n");
  CHECK_THROWS_AS((void)read_partition_text(garbage.path), ValidationError);

  // Parseable but inadmissible: (1,2)/(2,1) uncovered.
  TempFile bad("tmp_partition_inadmissible.txt");
  write_text_atomic(bad.path, "2 2 2\n1,1\n2,2\n");
  CHECK_THROWS_AS((void)read_partition_text(bad.path), CheckFailure);
}

}  // TEST_SUITE
