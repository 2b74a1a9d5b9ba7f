#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "lrt/backbone.hpp"
#include "lrt/error.hpp"

using lrt::Matrix;

namespace {

std::set<std::pair<std::size_t, std::size_t>> edge_set(const lrt::BackboneGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> s;
  for (const auto& e : g.edges) s.emplace(e.from, e.to);
  return s;
}

const lrt::BackboneEdge* find(const lrt::BackboneGraph& g, std::size_t from, std::size_t to) {
  for (const auto& e : g.edges) {
    if (e.from == from && e.to == to) return &e;
  }
  return nullptr;
}

}  // namespace

// Node 0 sends to 1 and 2 (rho(1,0), rho(2,0)); 1 and 2 have a single
// incoming edge each, so only the out-direction is tested.
TEST(DisparityFilter, EqualOutWeights) {
  Matrix r = Matrix::Zero(3, 3);
  r(1, 0) = 1.0;
  r(2, 0) = 1.0;
  const auto g = lrt::disparity_filter(r, 0.05, false);
  EXPECT_TRUE(g.edges.empty());
  const auto kept = lrt::disparity_filter(r, 0.6, false);
  ASSERT_EQ(kept.edges.size(), 2u);
  EXPECT_EQ(kept.edges[0].alpha, 0.5);
  EXPECT_EQ(kept.edges[1].alpha, 0.5);
  // Two-sided: the single in-edges are degree-1 and rescued with a flag.
  const auto rescued = lrt::disparity_filter(r, 0.05, true);
  ASSERT_EQ(rescued.edges.size(), 2u);
  EXPECT_TRUE(rescued.edges[0].preserved);
}

TEST(DisparityFilter, HeavyEdgeOnly) {
  Matrix r = Matrix::Zero(3, 3);
  r(1, 0) = 9.0;
  r(2, 0) = 1.0;
  const auto g = lrt::disparity_filter(r, 0.2, false);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].from, 0u);
  EXPECT_EQ(g.edges[0].to, 1u);
  EXPECT_DOUBLE_EQ(g.edges[0].alpha, 1.0 - 0.9);
  const auto all = lrt::disparity_filter(r, 0.95, false);
  ASSERT_EQ(all.edges.size(), 2u);
  EXPECT_DOUBLE_EQ(all.edges[1].alpha, 1.0 - 0.1);
}

TEST(DisparityFilter, SignAndDiagonal) {
  Matrix r(2, 2);
  r << 5.0, -0.3, 0.7, 5.0;
  const auto g = lrt::disparity_filter(r, 0.05);
  ASSERT_EQ(g.edges.size(), 2u);  // degree-1 preserved both ways
  const auto* e = find(g, 1, 0);
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->sign, -1);
  EXPECT_EQ(e->weight, -0.3);
  EXPECT_TRUE(e->preserved);
  EXPECT_EQ(find(g, 0, 0), nullptr);
}

TEST(DisparityFilter, LimitIsFullSupport) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix r(6, 6);
  for (auto& v : r.reshaped()) v = u(rng);
  const auto g = lrt::disparity_filter(r, 1.0 - 1e-12);
  EXPECT_EQ(g.edges.size(), 30u);
}

TEST(DisparityFilter, MonotoneInPAndScaleInvariant) {
  std::mt19937_64 rng(62);
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution sparse(0.3), negative(0.2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 9;
    Matrix r(n, n);
    for (auto& v : r.reshaped()) v = sparse(rng) ? 0.0 : (negative(rng) ? -1.0 : 1.0) * ex(rng);
    auto prev = edge_set(lrt::disparity_filter(r, 0.01));
    for (double p : {0.05, 0.1, 0.3, 0.6, 0.9}) {
      const auto g = lrt::disparity_filter(r, p);
      const auto cur = edge_set(g);
      for (const auto& e : prev) EXPECT_TRUE(cur.count(e)) << "trial " << trial << " p " << p;
      EXPECT_EQ(cur, edge_set(lrt::disparity_filter(7.5 * r, p)));
      for (const auto& e : g.edges) {
        EXPECT_EQ(e.sign, r(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from)) < 0 ? -1 : 1);
      }
      prev = cur;
    }
  }
}

TEST(DisparityFilter, InvalidP) {
  for (double p : {0.0, 1.0, -0.1, 2.0}) {
    try {
      lrt::disparity_filter(Matrix::Identity(2, 2), p);
      FAIL();
    } catch (const lrt::Error& e) {
      EXPECT_EQ(e.code(), lrt::ErrorCode::InvalidP);
    }
  }
}

TEST(ExportGraph, EdgeListAndGraphml) {
  Matrix empty = Matrix::Zero(3, 3);
  std::ostringstream out;
  lrt::export_graph(lrt::disparity_filter(empty, 0.05), "edgelist", out);
  EXPECT_EQ(out.str(), "from,to,weight,sign,alpha,preserved_flag\n");

  Matrix r = Matrix::Zero(3, 3);
  r(2, 0) = 0.123456789012345678;
  r(1, 0) = 2.0;
  auto g = lrt::disparity_filter(r, 0.9);
  std::ostringstream list;
  lrt::export_graph(g, "edgelist", list);
  EXPECT_EQ(list.str(),
            "from,to,weight,sign,alpha,preserved_flag\n"
            "0,1,2,1,0,1\n"
            "0,2,0.12345678901234568,1,0,1\n");

  std::ostringstream xml;
  lrt::export_graph(g, "graphml", xml);
  const std::string s = xml.str();
  const std::regex node("<node id=");
  const std::regex edge("<edge source=");
  EXPECT_EQ(std::distance(std::sregex_iterator(s.begin(), s.end(), node), std::sregex_iterator()), 3);
  EXPECT_EQ(std::distance(std::sregex_iterator(s.begin(), s.end(), edge), std::sregex_iterator()), 2);
  EXPECT_NE(s.find("<data key=\"weight\">0.12345678901234568</data>"), std::string::npos);

  try {
    lrt::export_graph(g, "gexf", xml);
    FAIL();
  } catch (const lrt::Error& e) {
    EXPECT_EQ(e.code(), lrt::ErrorCode::UnsupportedFormat);
  }
}
