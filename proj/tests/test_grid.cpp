#include <doctest.h>

#include <random>
#include <set>

#include "gridpat/constructions.hpp"
#include "gridpat/errors.hpp"
#include "gridpat/grid.hpp"
#include "support/oracles.hpp"

using namespace gridpat;

namespace {

PointSet random_set(std::mt19937_64& rng, int max_points, int spread) {
  std::uniform_int_distribution<int> size(1, max_points);
  std::uniform_int_distribution<Coord> coord(-spread, spread);
  PointSet ps;
  const int target = size(rng);
  while (static_cast<int>(ps.size()) < target) ps.insert({coord(rng), coord(rng)});
  return ps;
}

std::set<oracle::Cell> cells(const PointSet& ps) {
  std::set<oracle::Cell> out;
  for (const auto& p : ps) out.insert({p.x, p.y});
  return out;
}

}  // namespace

TEST_CASE("single point has four unit runs") {
  const PointSet ps{{0, 0}};
  const auto runs = maximal_runs(ps);
  REQUIRE(runs.size() == 4);
  for (const auto& r : runs) CHECK(r.length == 1);
  CHECK(patterns_of_length(ps, 1).count == 4);
}

TEST_CASE("empty set has no runs") {
  CHECK(maximal_runs(PointSet{}).empty());
  CHECK(pattern_histogram(PointSet{}).empty());
  CHECK(patterns_of_length(PointSet{}, 3).count == 0);
}

TEST_CASE("horizontal segment of five") {
  const PointSet ps{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
  const auto runs = maximal_runs(ps);
  REQUIRE(runs.size() == 16);
  CHECK(runs.front().direction == Direction::H);
  CHECK(runs.front().length == 5);
  CHECK(runs.front().start == Point{0, 0});
  for (std::size_t i = 1; i < runs.size(); ++i) CHECK(runs[i].length == 1);
  CHECK(pattern_histogram(ps) == PatternHistogram{{1, 15}, {5, 1}});
  // a row of k+1 points has no pattern of length k
  CHECK(patterns_of_length(ps, 4).count == 0);
}

TEST_CASE("run starts are the smallest-x end") {
  const PointSet anti{{0, 2}, {1, 1}, {2, 0}};
  const auto runs = maximal_runs(anti);
  const auto it = std::find_if(runs.begin(), runs.end(), [](const Run& r) { return r.length == 3; });
  REQUIRE(it != runs.end());
  CHECK(it->direction == Direction::DMinus);
  CHECK(it->start == Point{0, 2});
}

TEST_CASE("rectangle pattern counts") {
  CHECK(patterns_of_length(full_rectangle(5, 7), 5).count == 13);
  // the four corner diagonals of length 4 (brute-force oracle)
  CHECK(patterns_of_length(full_rectangle(5, 7), 4).count == 4);
  CHECK(patterns_of_length(full_rectangle(5, 7), 4).count == oracle::count_runs(cells(full_rectangle(5, 7)), 4));

  for (Coord k = 2; k <= 12; ++k) {
    for (Coord m = k + 1; m <= 12; ++m) {
      CHECK(patterns_of_length(full_rectangle(k, m), k).count == 3 * m - 2 * k + 2);
    }
    // square: the k rows are patterns too
    CHECK(patterns_of_length(full_rectangle(k, k), k).count == 2 * k + 2);
    CHECK(oracle::count_runs(cells(full_rectangle(k, k)), k) == 2 * k + 2);
  }
}

TEST_CASE("tile with holes, no wrap: histogram from the oracle") {
  const int sigma[5] = {0, 2, 4, 1, 3};
  PointSet ps;
  for (Coord x = 0; x < 5; ++x)
    for (Coord y = 0; y < 5; ++y)
      if (sigma[x] != y) ps.insert({x, y});
  const PatternHistogram expected{{1, 13}, {2, 11}, {3, 7}, {4, 6}};
  CHECK(pattern_histogram(ps) == expected);
  const auto ref = oracle::histogram(cells(ps));
  CHECK(PatternHistogram(ref.begin(), ref.end()) == expected);
}

TEST_CASE("histogram mass and oracle agreement on random sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ps = random_set(rng, 40, 5);
    const auto h = pattern_histogram(ps);
    std::int64_t mass = 0;
    for (auto [len, count] : h) mass += len * count;
    CHECK(mass == 4 * static_cast<std::int64_t>(ps.size()));
    const auto ref = oracle::histogram(cells(ps));
    CHECK(h == PatternHistogram(ref.begin(), ref.end()));
  }
}

TEST_CASE("pattern counts are translation and dihedral invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ps = random_set(rng, 30, 4);
    const auto h = pattern_histogram(ps);
    CHECK(pattern_histogram(translate(ps, {17, -5})) == h);
    for (int g = 0; g < 8; ++g) {
      std::vector<Point> img;
      for (const auto& p : ps) img.push_back(dihedral(p, g));
      CHECK(pattern_histogram(PointSet(img)) == h);
    }
  }
}

TEST_CASE("separated constellations have additive histograms") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_set(rng, 20, 3);
    const auto b = random_set(rng, 20, 3);
    // b shifted so two empty columns separate the boxes
    const auto ba = bounding_box(a);
    const auto bb = bounding_box(b);
    const auto moved = translate(b, {ba.max.x - bb.min.x + 3, 0});
    std::vector<Point> all(a.begin(), a.end());
    all.insert(all.end(), moved.begin(), moved.end());
    auto combined = pattern_histogram(PointSet(all));
    auto expected = pattern_histogram(a);
    for (auto [len, count] : pattern_histogram(b)) expected[len] += count;
    CHECK(combined == expected);
  }
}

TEST_CASE("normalize") {
  CHECK(normalize(PointSet{{5, 5}}) == PointSet{{0, 0}});
  // vertical pair: the horizontal image (0,0),(1,0) sorts after (0,0),(0,1)
  CHECK(normalize(PointSet{{0, 0}, {0, 1}}) == PointSet{{0, 0}, {0, 1}});
  CHECK(normalize(PointSet{{3, 7}, {4, 7}}) == PointSet{{0, 0}, {0, 1}});
  CHECK_THROWS_AS(normalize(PointSet{}), EmptySetError);

  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ps = random_set(rng, 12, 6);
    const auto once = normalize(ps);
    CHECK(normalize(once) == once);
    CHECK(pattern_histogram(once) == pattern_histogram(ps));
    const auto box = bounding_box(once);
    CHECK(box.min == Point{0, 0});
  }
}

TEST_CASE("point text format") {
  CHECK(parse_points("0 0\n1 0\n") == PointSet{{0, 0}, {1, 0}});
  CHECK(parse_points("# header\n\n  -3   4 # trailing\n") == PointSet{{-3, 4}});
  CHECK(parse_points("") == PointSet{});
  CHECK_THROWS_AS(parse_points("0 0\n0 0\n"), DuplicatePointError);
  try {
    parse_points("0 0\n1 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_points("1 2 3\n"), ParseError);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ps = random_set(rng, 25, 1000);
    CHECK(parse_points(serialize_points(ps)) == ps);
    CHECK(points_from_json(to_json(ps)) == ps);
  }
}

TEST_CASE("json form is sorted") {
  const auto j = to_json(PointSet{{1, 0}, {0, 5}, {0, -1}});
  CHECK(j.dump() == R"({"points":[[0,-1],[0,5],[1,0]]})");
}
