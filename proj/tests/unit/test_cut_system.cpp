#include <gtest/gtest.h>

#include "tqft/cut_system.hpp"
#include "tqft/verlinde.hpp"

using namespace tqft;

namespace {

CutSystem pants_genus2(int n = 2, int d = 0) {
  return CutSystem{n,
                   2,
                   d,
                   {"a", "b", "c"},
                   {Piece{0, {{"a", Side::plus}, {"b", Side::plus}, {"c", Side::plus}}},
                    Piece{0, {{"a", Side::minus}, {"b", Side::minus}, {"c", Side::minus}}}},
                   0};
}

std::string rule_of(const CutSystem& cut) {
  const auto diag = validate_cut_system(cut);
  return diag ? diag->rule : "";
}

}  // namespace

TEST(CutSystem, BuildersAreValid) {
  for (int g = 2; g <= 5; ++g) {
    EXPECT_EQ(rule_of(uncut_surface(3, g)), "");
    EXPECT_EQ(rule_of(nonseparating_cut(3, g, 1)), "");
    for (int g1 = 1; g1 < g; ++g1) EXPECT_EQ(rule_of(separating_cut(2, g, g1)), "");
  }
  EXPECT_EQ(rule_of(pants_genus2()), "");
}

TEST(CutSystem, EachRuleIsReported) {
  auto c = nonseparating_cut(2, 2);
  c.n = 1;
  EXPECT_EQ(rule_of(c), "rank");

  c = nonseparating_cut(2, 2);
  c.d = 2;
  EXPECT_EQ(rule_of(c), "marked residue");

  c = nonseparating_cut(2, 2);
  c.pieces.clear();
  EXPECT_EQ(rule_of(c), "pieces");

  c = nonseparating_cut(2, 2);
  c.curves.push_back("c1");
  EXPECT_EQ(rule_of(c), "duplicate curve");

  c = nonseparating_cut(2, 2);
  c.pieces[0].boundary[1].curve = "zz";
  EXPECT_EQ(rule_of(c), "unknown curve");

  c = nonseparating_cut(2, 2);
  c.pieces[0].boundary.pop_back();
  EXPECT_EQ(rule_of(c), "curve incidence count");

  c = nonseparating_cut(2, 2);
  c.pieces[0].boundary[1].side = Side::plus;
  EXPECT_EQ(rule_of(c), "curve sides");

  c = nonseparating_cut(2, 2);
  c.pieces[0].genus = 2;
  EXPECT_EQ(rule_of(c), "Euler characteristic");

  c = nonseparating_cut(2, 2);
  c.pieces[0].genus = -1;
  EXPECT_EQ(rule_of(c), "piece genus");

  // a torus with two holes glued to itself plus a detached closed torus
  c = CutSystem{2, 2, 0, {"a"}, {Piece{1, {{"a", Side::plus}, {"a", Side::minus}}}, Piece{1, {}}}, 0};
  EXPECT_EQ(rule_of(c), "connectivity");

  c = separating_cut(2, 2, 1);
  c.marked_piece = 2;
  EXPECT_EQ(rule_of(c), "marked piece");

  EXPECT_THROW(require_valid(c), Error);
}

TEST(CutSystem, Separation) {
  EXPECT_TRUE(is_separating(separating_cut(2, 3, 1), "c1"));
  EXPECT_FALSE(is_separating(nonseparating_cut(2, 3), "c1"));
  const auto pants = pants_genus2();
  for (const char* id : {"a", "b", "c"}) EXPECT_FALSE(is_separating(pants, id));
  EXPECT_THROW(is_separating(pants, "d"), Error);
}

TEST(CutSystem, PantsDecompositionFactorizes) {
  const auto pants = pants_genus2();
  EXPECT_EQ(pants.pieces.size(), 2u);
  EXPECT_EQ(pants.curves.size(), 3u);
  for (int k = 0; k <= 8; ++k) {
    const auto r = factorization_check(pants, k);
    EXPECT_EQ(r.block_sum, r.dim_z);
    EXPECT_EQ(r.blocks, static_cast<std::size_t>((k + 1) * (k + 1) * (k + 1)));
  }
  for (int k = 1; k <= 4; ++k) {
    const auto r = factorization_check(pants_genus2(3, 1), k);
    EXPECT_EQ(r.block_sum, r.dim_z);
  }
}

TEST(CutSystem, CurveLookup) {
  const auto pants = pants_genus2();
  EXPECT_EQ(pants.curve_index("b"), 1u);
  EXPECT_FALSE(pants.find_curve("x").has_value());
  try {
    pants.curve_index("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}
