#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "cfm/staggered_grid.hpp"

using namespace cfm;

namespace {

const LevelSet kCircle = LevelSet::circle({0.5, 0.5}, 0.25);

Point2 periodic(const GridSpec& s, Point2 p) {
  const double lx = s.x_right - s.x_left, ly = s.y_top - s.y_bottom;
  p.x() -= std::floor((p.x() - s.x_left) / lx) * lx;
  p.y() -= std::floor((p.y() - s.y_bottom) / ly) * ly;
  return p;
}

using Key = std::tuple<int, int, int>;

// For every node, look at the stencil centres that read it (in physical offsets) and flag it
// when one of them sits on the other side.
std::set<Key> brute_force_corrected(const GridSpec& spec, const LevelSet& ls, int order) {
  const std::vector<double> reach = order == 2 ? std::vector<double>{0.5} : std::vector<double>{0.5, 1.5};
  std::set<Key> out;
  auto check = [&](Family f, int i, int j, const Point2& dir) {
    const Point2 p = node_coords(spec, f, i, j);
    const Side s = side_of(ls, p);
    for (double r : reach)
      for (double sign : {-1.0, 1.0}) {
        const Point2 c = periodic(spec, p + sign * r * Point2(dir.x() * spec.dx(), dir.y() * spec.dy()));
        if (side_of(ls, c) != s) out.insert({static_cast<int>(f), i, j});
      }
  };
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      const NodeId hx = node_from_storage(spec, Family::Hx, i + spec.nx * j);
      const NodeId hy = node_from_storage(spec, Family::Hy, i + spec.nx * j);
      const NodeId ez = node_from_storage(spec, Family::Ez, i + spec.nx * j);
      check(Family::Hx, hx.i, hx.j, {0, 1});  // read by d/dy at Ez
      check(Family::Hy, hy.i, hy.j, {1, 0});  // read by d/dx at Ez
      check(Family::Ez, ez.i, ez.j, {0, 1});  // read by d/dy at Hx
      check(Family::Ez, ez.i, ez.j, {1, 0});  // read by d/dx at Hy
    }
  return out;
}

std::set<Key> as_set(const SideMasks& m) {
  std::set<Key> out;
  for (const auto& n : m.corrected) out.insert({static_cast<int>(n.family), n.i, n.j});
  return out;
}

}  // namespace

TEST(NodeCoords, UnitSquareTwentyCells) {
  const GridSpec s = GridSpec::unit_square(20);
  EXPECT_EQ(node_coords(s, Family::Hx, 1, 0), Point2(0.025, 0.0));
  EXPECT_EQ(node_coords(s, Family::Ez, 1, 1), Point2(0.025, 0.025));
  EXPECT_EQ(node_coords(s, Family::Hy, 0, 1), Point2(0.0, 0.025));
}

TEST(NodeCoords, OutOfRangeThrows) {
  const GridSpec s = GridSpec::unit_square(20);
  try {
    node_coords(s, Family::Ez, 0, 1);
    FAIL() << "expected IndexOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(Wrap, Periodic) {
  const GridSpec s = GridSpec::unit_square(20);
  EXPECT_EQ(wrap(s, Family::Ez, 21, 3), (NodeId{Family::Ez, 1, 3}));
  EXPECT_EQ(wrap(s, Family::Hx, 4, -1), (NodeId{Family::Hx, 4, 19}));
  EXPECT_EQ(wrap(s, Family::Hy, 7, 9), (NodeId{Family::Hy, 7, 9}));
}

TEST(Wrap, CoordinateShiftIsWholePeriods) {
  const GridSpec s{0.0, 2.0, -1.0, 0.5, 8, 6};
  for (Family f : {Family::Hx, Family::Hy, Family::Ez})
    for (int i = -10; i < 20; ++i)
      for (int j = -10; j < 20; ++j) {
        const NodeId w = wrap(s, f, i, j);
        const HalfIndex hi = half_index(f, i, j);
        const Point2 raw(s.x_left + 0.5 * hi.x * s.dx(), s.y_bottom + 0.5 * hi.y * s.dy());
        const Point2 d = node_coords(s, w) - raw;
        const double kx = d.x() / 2.0, ky = d.y() / 1.5;
        EXPECT_NEAR(kx, std::round(kx), 1e-12);
        EXPECT_NEAR(ky, std::round(ky), 1e-12);
      }
}

TEST(Storage, RoundTrip) {
  const GridSpec s{0.0, 1.0, 0.0, 1.0, 5, 7};
  for (Family f : {Family::Hx, Family::Hy, Family::Ez})
    for (int k = 0; k < 35; ++k) {
      const NodeId n = node_from_storage(s, f, k);
      EXPECT_EQ(storage_index(s, f, n.i, n.j), k);
    }
}

TEST(FieldSet, ShapesAndPeriodicAccess) {
  const GridSpec s{0.0, 1.0, 0.0, 1.0, 5, 7};
  FieldSet f(s);
  EXPECT_EQ(f.hx.rows(), 5);
  EXPECT_EQ(f.hx.cols(), 7);
  f.at(Family::Ez, 6, 8) = 2.5;
  EXPECT_EQ(f.at(Family::Ez, 1, 1), 2.5);
  EXPECT_EQ(f.ez(0, 0), 2.5);
}

TEST(ClassifyNodes, NoInterfaceMeansNoCorrections) {
  const LevelSet outside = LevelSet::half_plane({0.0, 10.0}, {0.0, 1.0});
  const SideMasks m = classify_nodes(GridSpec::unit_square(20), outside, 4);
  EXPECT_TRUE(m.corrected.empty());
}

TEST(ClassifyNodes, MatchesBruteForceScan) {
  const GridSpec s = GridSpec::unit_square(20);
  for (int order : {2, 4}) {
    const SideMasks m = classify_nodes(s, kCircle, order);
    EXPECT_EQ(as_set(m), brute_force_corrected(s, kCircle, order)) << "order " << order;
    EXPECT_EQ(m.corrected.size(), as_set(m).size());
  }
}

TEST(ClassifyNodes, FourthOrderContainsSecondOrder) {
  const GridSpec s = GridSpec::unit_square(20);
  const auto two = as_set(classify_nodes(s, kCircle, 2));
  const auto four = as_set(classify_nodes(s, kCircle, 4));
  EXPECT_TRUE(std::includes(four.begin(), four.end(), two.begin(), two.end()));
  EXPECT_GT(four.size(), two.size());
}

TEST(ClassifyNodes, SidesAgreeAndCorrectedNodesAreNearInterface) {
  const GridSpec s = GridSpec::unit_square(28);
  const LevelSet star = LevelSet::star({0.55, 0.55}, 0.25, 0.15, 3.0);
  for (int order : {2, 4}) {
    const SideMasks m = classify_nodes(s, star, order, {true});
    for (Family f : {Family::Hx, Family::Hy, Family::Ez})
      for (int k = 0; k < s.nx * s.ny; ++k)
        EXPECT_EQ(m.side(f, k), side_of(star, node_coords(s, node_from_storage(s, f, k))));
    const double beta = order == 2 ? 1.0 : 3.0;
    for (const auto& n : m.corrected) {
      const Point2 p = node_coords(s, n);
      EXPECT_LE((closest_point(star, p) - p).norm(), beta * s.h() * std::sqrt(2.0));
      EXPECT_EQ(m.correction_slot(n.family, storage_index(s, n.family, n.i, n.j)),
                std::find(m.corrected.begin(), m.corrected.end(), n) - m.corrected.begin());
    }
  }
}

TEST(ClassifyNodes, DivergenceOptionOnlyAddsMagneticNodes) {
  const GridSpec s = GridSpec::unit_square(20);
  const auto plain = as_set(classify_nodes(s, kCircle, 4));
  const auto with_div = as_set(classify_nodes(s, kCircle, 4, {true}));
  EXPECT_TRUE(std::includes(with_div.begin(), with_div.end(), plain.begin(), plain.end()));
  for (const auto& k : with_div)
    if (!plain.count(k)) EXPECT_NE(std::get<0>(k), static_cast<int>(Family::Ez));
}

TEST(Stencil, Weights) {
  const Stencil& two = staggered_stencil(2);
  EXPECT_EQ(two.size, 2);
  EXPECT_EQ(two.weights[0] + two.weights[1], 0.0);
  const Stencil& four = staggered_stencil(4);
  EXPECT_EQ(four.offsets, (std::array<int, 4>{-3, -1, 1, 3}));
  EXPECT_DOUBLE_EQ(four.weights[2] * 24.0, 27.0);
  EXPECT_DOUBLE_EQ(four.weights[0] * 24.0, 1.0);
}
