#pragma once

// Explicit constellations (full rectangles, periodic tilings of a queens
// permutation or partial placement, lattice complements) and exact
// points-per-pattern ratios and bounds on f(k) = lim a_k(n)/n.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "gridpat/grid.hpp"
#include "gridpat/queens.hpp"

namespace gridpat {

using Rational = boost::rational<std::int64_t>;

// "p/q", or "p" when q == 1
std::string to_string(const Rational& r);
nlohmann::json to_json(const Rational& r);

// {(x, y) : 0 <= x < m, 0 <= y < k}. Throws HypothesisError unless 1 <= k <= m.
PointSet full_rectangle(Coord k, Coord m);

// N x N window of the periodic tiling of an n x n tile with holes (i, sigma(i)):
// (x, y) is present unless y mod n == sigma(x mod n). Requires in_T(p), N >= n.
PointSet tile_window(const QueensPermutation& p, Coord window);

// Same, with the queens of a partial placement as holes. Requires N >= n.
PointSet monsky_tile_window(const PartialPlacement& placement, Coord window);

struct LatticeVector {
  Coord x = 0;
  Coord y = 0;
};

// Whether (x, y) = a*v1 + b*v2 for integers a, b (Cramer's rule, exact).
// Throws HypothesisError if v1, v2 are linearly dependent.
bool on_lattice(LatticeVector v1, LatticeVector v2, Point p);

// Points of [0, N)^2 that are not on the lattice spanned by v1 and v2.
PointSet lattice_constellation(LatticeVector v1, LatticeVector v2, Coord window);

struct RatioReport {
  Coord k = 0;
  std::int64_t points = 0;
  std::int64_t patterns = 0;
  Rational ratio;
  // side of the bounding box
  Coord window = 0;
};

// Exact |ps| / patterns_of_length(ps, k). Throws HypothesisError when the
// set has no pattern of length k.
RatioReport ratio(const PointSet& ps, Coord k);

nlohmann::json to_json(const RatioReport& r);

struct ConvergenceFit {
  // max over windows of N * |ratio(N) - k/4|
  double constant = 0.0;
  // |ratio - k/4| is non-increasing along the windows
  bool monotone_error = false;
};

struct ConvergenceSeries {
  std::vector<RatioReport> reports;
  Rational limit;  // k/4
  ConvergenceFit fit;
};

// Ratios of tile_window(p, N) for each window. Requires in_T(p) and windows
// strictly increasing, each >= n.
ConvergenceSeries convergence_series(const QueensPermutation& p, Coord k, const std::vector<Coord>& windows);

// True when every point of `ps` whose distance to the border of [0, N)^2
// exceeds `margin` lies in exactly four maximal runs of length exactly k.
bool interior_points_have_four_patterns(const PointSet& ps, Coord k, Coord window, Coord margin);

enum class BoundRule {
  IsolatedPoints,  // k = 1: n isolated points carry 4n patterns
  ModularQueens,   // k+1 coprime with 6: a full modular queens solution exists
  Rectangle,       // k x m rectangles: k/3
  PartialQueens,   // n-2 queens on the torus: (k(k+1)+2) / (4(k-1))
  NearFullQueens,  // n-1 queens when 3, 4 do not divide k+1: (k(k+1)+1) / (4k)
};

std::string to_string(BoundRule rule);

struct BoundReport {
  Coord k = 0;
  Rational lower;
  Rational upper;
  BoundRule rule = BoundRule::Rectangle;
};

// Throws HypothesisError for k < 1.
BoundReport f_bounds(Coord k);

nlohmann::json to_json(const BoundReport& b);

}  // namespace gridpat
