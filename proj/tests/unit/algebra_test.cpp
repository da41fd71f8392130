#include "mbp/algebra.hpp"
#include "mbp/error.hpp"
#include "support/support.hpp"

#include <gtest/gtest.h>

using namespace mbp;
using mbp::testing::two_loop_algebra;
using mbp::testing::fixture_path;
using mbp::testing::read_text;

namespace {

BasedAlgebra algebra(const std::string& text) { return build_based_algebra(parse_presentation(text)); }

std::vector<std::string> labels(const BasedAlgebra& a) {
  std::vector<std::string> out;
  for (const auto& b : a.basis) out.push_back(b.label);
  return out;
}

const std::vector<std::string> kSamples = {
    read_text(fixture_path("ex145.quiver")),
    "vertices: 2; arrows: a: 1 -> 2",
    "vertices: 3; arrow a: 1 -> 2; arrow b: 2 -> 3",
    "vertices: 3; arrow a: 1 -> 2; arrow b: 2 -> 3; relation: a*b",
    "vertices: 4; arrow a: 1 -> 2; arrow b: 2 -> 4; arrow c: 1 -> 3; arrow d: 3 -> 4; relation: a*b - c*d",
    "vertices: 1; arrow a: 1 -> 1; relation: a*a*a",
    "vertices: 1; arrow x: 1 -> 1; arrow y: 1 -> 1; relation: x*y - y*x; relation: x*x; relation: y*y",
};

}  // namespace

TEST(Presentation, TwoLoop) {
  auto p = parse_presentation(read_text(fixture_path("ex145.quiver")));
  EXPECT_EQ(p.quiver.vertices.size(), 1u);
  ASSERT_EQ(p.quiver.arrows.size(), 2u);
  EXPECT_EQ(p.quiver.arrows[0].name, "a");
  EXPECT_EQ(p.quiver.arrows[1].name, "b");
  EXPECT_EQ(p.relations.size(), 4u);
}

TEST(Presentation, PathAlgebraWithoutRelations) {
  auto p = parse_presentation("vertices: 2; arrows: a: 1 -> 2");
  EXPECT_EQ(p.quiver.vertices, (std::vector<std::string>{"1", "2"}));
  ASSERT_EQ(p.quiver.arrows.size(), 1u);
  EXPECT_EQ(p.quiver.arrows[0].source, 0);
  EXPECT_EQ(p.quiver.arrows[0].target, 1);
  EXPECT_TRUE(p.relations.empty());
}

TEST(Presentation, MalformedArrowReportsPosition) {
  try {
    parse_presentation("vertices: 2\narrow a: 1 ->");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "ParseError");
    EXPECT_EQ(e.payload()["line"], 2);
    EXPECT_TRUE(e.payload().contains("column"));
  }
  EXPECT_THROW(parse_presentation("arrow a: 1 -> 2"), Error);
  EXPECT_THROW(parse_presentation("vertices: 1; arrow a: 1 -> 1; relation: a"), Error);
}

TEST(BasedAlgebra, TwoLoopBasis) {
  auto a = two_loop_algebra();
  EXPECT_EQ(a.dim(), 5);
  EXPECT_EQ(a.radical_dim(), 4);
  EXPECT_EQ(labels(a), (std::vector<std::string>{"a*b", "b*b", "b", "a", "e"}));
}

TEST(BasedAlgebra, SmallExamples) {
  auto a2 = algebra("vertices: 2; arrows: a: 1 -> 2");
  EXPECT_EQ(labels(a2), (std::vector<std::string>{"a", "e1", "e2"}));
  auto loop = algebra("vertices: 1; arrow a: 1 -> 1; relation: a*a");
  EXPECT_EQ(labels(loop), (std::vector<std::string>{"a", "e"}));
  try {
    algebra("vertices: 1; arrow a: 1 -> 1");
    FAIL() << "free loop is infinite dimensional";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotFiniteDimensional");
  }
}

TEST(BasedAlgebra, ProductIsAssociative) {
  for (const auto& text : kSamples) {
    auto a = algebra(text);
    int n = a.dim();
    auto mul = [&](const SparseVec& x, const SparseVec& y) {
      SparseVec out;
      for (const auto& [i, ci] : x)
        for (const auto& [j, cj] : y)
          for (const auto& [k, ck] : a.product[i][j]) out[k] += ci * cj * ck;
      for (auto it = out.begin(); it != out.end();) it = is_zero(it->second) ? out.erase(it) : std::next(it);
      return out;
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          SparseVec bi{{i, 1}}, bk{{k, 1}};
          EXPECT_EQ(mul(mul(bi, SparseVec{{j, 1}}), bk), mul(bi, mul(SparseVec{{j, 1}}, bk))) << text;
        }
  }
}

TEST(RegularRepresentation, TwoLoopDisplay) {
  auto a = two_loop_algebra();
  EXPECT_EQ(render_label_matrix(a, regular_representation(a)),
            "e 0 a b a*b\n"
            "0 e b 0 b*b\n"
            "0 0 e 0 b\n"
            "0 0 0 e a\n"
            "0 0 0 0 e\n");
}

TEST(RegularRepresentation, SmallDisplays) {
  auto a2 = algebra("vertices: 2; arrows: a: 1 -> 2");
  EXPECT_EQ(render_label_matrix(a2, regular_representation(a2)), "e1 0 a\n0 e1 0\n0 0 e2\n");
  auto ss = algebra("vertices: 2");
  EXPECT_EQ(render_label_matrix(ss, regular_representation(ss)), "e1 0\n0 e2\n");
}

TEST(RegularRepresentation, FaithfulAndSized) {
  for (const auto& text : kSamples) {
    auto a = algebra(text);
    int n = a.dim();
    EXPECT_EQ(int(regular_representation(a).size()), n);
    RatMatrix stacked(n, n * n);
    for (int k = 0; k < n; ++k) {
      RatMatrix l = left_multiplication(a, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) stacked(k, i * n + j) = l(i, j);
    }
    EXPECT_EQ(rank(stacked), n) << text;
  }
}

TEST(BipartiteProblem, ValidAndRdcc) {
  for (const auto& text : kSamples) {
    Problem p = build_bipartite_problem(algebra(text));
    EXPECT_TRUE(validate(p).empty()) << text;
    EXPECT_TRUE(check_rdcc(p).ok()) << text;
    EXPECT_TRUE(p.h_zero());
  }
}

TEST(BipartiteProblem, Shapes) {
  Problem ex = mbp::testing::two_loop_problem();
  ASSERT_EQ(ex.solid.size(), 4u);
  EXPECT_EQ(ex.solid[0].name, "a");
  EXPECT_EQ(ex.solid[3].name, "d");
  EXPECT_EQ(ex.size(), 10);
  Problem a2 = build_bipartite_problem(algebra("vertices: 2; arrows: a: 1 -> 2"));
  ASSERT_EQ(a2.solid.size(), 1u);
  EXPECT_TRUE(differential(a2, 0).is_zero());
  Problem ss = build_bipartite_problem(algebra("vertices: 2"));
  EXPECT_TRUE(ss.solid.empty());
  EXPECT_TRUE(check_rdcc(ss).ok());
}

TEST(Rdcc, TwoLeadsInOneRow) {
  Problem p;
  p.classes = {VertexClass{"X"}};
  p.class_of = {0, 0};
  p.origin = {0, 1};
  p.solid.push_back({"a", 0, 0, {{1, 0, Rational(1)}}, {1, 0}});
  p.solid.push_back({"b", 0, 0, {{1, 1, Rational(1)}}, {1, 1}});
  auto r = check_rdcc(p);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.distinct_rows);
}

TEST(QuiverProblem, Layout) {
  Problem p = mbp::testing::a3_problem();
  EXPECT_EQ(p.classes.size(), 3u);
  EXPECT_EQ(p.solid.size(), 2u);
  EXPECT_TRUE(p.dotted.empty());
  EXPECT_TRUE(validate(p).empty());
  Problem loop = mbp::testing::loop_problem();
  EXPECT_EQ(loop.classes.size(), 1u);
  EXPECT_EQ(loop.size(), 2);
}
