#include "gridpat/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gridpat/errors.hpp"

namespace gridpat {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

nlohmann::json to_json(const Rational& r) { return {{"num", r.numerator()}, {"den", r.denominator()}}; }

PointSet full_rectangle(Coord k, Coord m) {
  if (k < 1 || k > m) {
    throw HypothesisError("rectangle needs 1 <= k <= m, got k=" + std::to_string(k) + ", m=" + std::to_string(m));
  }
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(k * m));
  for (Coord x = 0; x < m; ++x)
    for (Coord y = 0; y < k; ++y) pts.push_back({x, y});
  return PointSet(std::move(pts));
}

namespace {

Coord floor_mod(Coord a, Coord n) {
  Coord r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

PointSet tile_window(const QueensPermutation& p, Coord window) {
  if (!in_T(p)) throw HypothesisError("tiling needs a permutation in T_n: " + format_permutation(p));
  const Coord n = p.n();
  if (window < n) {
    throw HypothesisError("window " + std::to_string(window) + " is smaller than the tile size " + std::to_string(n));
  }
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(window * window));
  for (Coord x = 0; x < window; ++x) {
    const Coord hole = p(static_cast<int>(floor_mod(x, n)));
    for (Coord y = 0; y < window; ++y) {
      if (floor_mod(y, n) != hole) pts.push_back({x, y});
    }
  }
  return PointSet(std::move(pts));
}

PointSet monsky_tile_window(const PartialPlacement& placement, Coord window) {
  validate(placement);
  const Coord n = placement.n;
  if (window < n) {
    throw HypothesisError("window " + std::to_string(window) + " is smaller than the tile size " + std::to_string(n));
  }
  std::vector<bool> hole(static_cast<std::size_t>(n * n), false);
  for (auto [i, j] : placement.queens) hole[static_cast<std::size_t>(i * n + j)] = true;
  std::vector<Point> pts;
  for (Coord x = 0; x < window; ++x)
    for (Coord y = 0; y < window; ++y)
      if (!hole[static_cast<std::size_t>(floor_mod(x, n) * n + floor_mod(y, n))]) pts.push_back({x, y});
  return PointSet(std::move(pts));
}

bool on_lattice(LatticeVector v1, LatticeVector v2, Point p) {
  const Coord det = v1.x * v2.y - v1.y * v2.x;
  if (det == 0) throw HypothesisError("lattice vectors are linearly dependent");
  // a = det([p v2]) / det, b = det([v1 p]) / det
  const Coord a_num = p.x * v2.y - p.y * v2.x;
  const Coord b_num = v1.x * p.y - v1.y * p.x;
  return a_num % det == 0 && b_num % det == 0;
}

PointSet lattice_constellation(LatticeVector v1, LatticeVector v2, Coord window) {
  if (v1.x * v2.y - v1.y * v2.x == 0) throw HypothesisError("lattice vectors are linearly dependent");
  std::vector<Point> pts;
  for (Coord x = 0; x < window; ++x)
    for (Coord y = 0; y < window; ++y)
      if (!on_lattice(v1, v2, {x, y})) pts.push_back({x, y});
  return PointSet(std::move(pts));
}

RatioReport ratio(const PointSet& ps, Coord k) {
  const auto patterns = patterns_of_length(ps, k).count;
  if (patterns == 0) throw HypothesisError("no pattern of length " + std::to_string(k) + " in the constellation");
  RatioReport r;
  r.k = k;
  r.points = static_cast<std::int64_t>(ps.size());
  r.patterns = patterns;
  r.ratio = Rational(r.points, patterns);
  const auto box = bounding_box(ps);
  r.window = std::max(box.width(), box.height());
  return r;
}

nlohmann::json to_json(const RatioReport& r) {
  return {{"schema_version", 1}, {"k", r.k},           {"points", r.points},
          {"patterns", r.patterns}, {"ratio", to_json(r.ratio)}, {"window", r.window}};
}

ConvergenceSeries convergence_series(const QueensPermutation& p, Coord k, const std::vector<Coord>& windows) {
  if (!in_T(p)) throw HypothesisError("convergence series needs a permutation in T_n: " + format_permutation(p));
  if (k < 1) throw HypothesisError("pattern length must be >= 1");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i] < p.n()) throw HypothesisError("window " + std::to_string(windows[i]) + " is smaller than the tile");
    if (i && windows[i] <= windows[i - 1]) throw HypothesisError("windows must be strictly increasing");
  }
  ConvergenceSeries s;
  s.limit = Rational(k, 4);
  double previous = INFINITY;
  s.fit.monotone_error = true;
  for (Coord N : windows) {
    auto r = ratio(tile_window(p, N), k);
    r.window = N;
    const double err = std::abs(boost::rational_cast<double>(r.ratio - s.limit));
    s.fit.constant = std::max(s.fit.constant, err * static_cast<double>(N));
    if (err > previous) s.fit.monotone_error = false;
    previous = err;
    s.reports.push_back(r);
  }
  return s;
}

bool interior_points_have_four_patterns(const PointSet& ps, Coord k, Coord window, Coord margin) {
  std::map<Point, int> hits;
  for (const auto& run : maximal_runs(ps)) {
    if (run.length != k) continue;
    const Point d = step(run.direction);
    for (Coord t = 0; t < run.length; ++t) ++hits[{run.start.x + t * d.x, run.start.y + t * d.y}];
  }
  for (const auto& p : ps) {
    const Coord dist = std::min({p.x, p.y, window - 1 - p.x, window - 1 - p.y});
    if (dist <= margin) continue;
    auto it = hits.find(p);
    if (it == hits.end() || it->second != 4) return false;
  }
  return true;
}

std::string to_string(BoundRule rule) {
  switch (rule) {
    case BoundRule::IsolatedPoints: return "isolated-points";
    case BoundRule::ModularQueens: return "modular-queens";
    case BoundRule::Rectangle: return "rectangle";
    case BoundRule::PartialQueens: return "partial-queens";
    case BoundRule::NearFullQueens: return "near-full-queens";
  }
  return "?";
}

BoundReport f_bounds(Coord k) {
  if (k < 1) throw HypothesisError("k must be >= 1");
  BoundReport b;
  b.k = k;
  b.lower = Rational(k, 4);
  if (k == 1) {
    b.upper = b.lower;
    b.rule = BoundRule::IsolatedPoints;
    return b;
  }
  if (std::gcd(k + 1, Coord{6}) == 1) {
    b.upper = b.lower;
    b.rule = BoundRule::ModularQueens;
    return b;
  }
  b.upper = Rational(k, 3);
  b.rule = BoundRule::Rectangle;
  const Rational general(k * (k + 1) + 2, 4 * (k - 1));
  if (general < b.upper) {
    b.upper = general;
    b.rule = BoundRule::PartialQueens;
  }
  if ((k + 1) % 3 != 0 && (k + 1) % 4 != 0) {
    const Rational sharper(k * (k + 1) + 1, 4 * k);
    if (sharper < b.upper) {
      b.upper = sharper;
      b.rule = BoundRule::NearFullQueens;
    }
  }
  return b;
}

nlohmann::json to_json(const BoundReport& b) {
  return {{"schema_version", 1},
          {"k", b.k},
          {"lower", to_json(b.lower)},
          {"upper", to_json(b.upper)},
          {"rule", to_string(b.rule)}};
}

}  // namespace gridpat
