#pragma once

// Finite point sets on Z^2 and exact-length run ("pattern") counting.
//
// A pattern of length k is a maximal run of exactly k occupied cells along
// one of four directions: horizontal (1,0), vertical (0,1) and the two
// diagonals (1,1) and (1,-1). The plane outside the set is empty, so every
// run is flanked by empty cells and no window edge ever truncates a run.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gridpat {

using Coord = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

enum class Direction : std::uint8_t { H = 0, V = 1, DPlus = 2, DMinus = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::H, Direction::V, Direction::DPlus,
                                                      Direction::DMinus};

constexpr Point step(Direction d) {
  switch (d) {
    case Direction::H: return {1, 0};
    case Direction::V: return {0, 1};
    case Direction::DPlus: return {1, 1};
    case Direction::DMinus: return {1, -1};
  }
  return {0, 0};
}

std::string_view to_string(Direction d);

// Sorted, duplicate-free list of grid points. Value type.
class PointSet {
public:
  PointSet() = default;
  // Throws DuplicatePointError (line 0) if `points` has repeats.
  explicit PointSet(std::vector<Point> points);
  PointSet(std::initializer_list<Point> points);

  // Returns false if the point was already present.
  bool insert(Point p);
  bool contains(Point p) const;

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

private:
  std::vector<Point> points_;
};

struct BoundingBox {
  Point min;
  Point max;
  Coord width() const { return max.x - min.x + 1; }
  Coord height() const { return max.y - min.y + 1; }
};

// Throws EmptySetError on an empty set.
BoundingBox bounding_box(const PointSet& ps);

PointSet translate(const PointSet& ps, Point offset);

struct Run {
  Direction direction = Direction::H;
  // extreme cell with the smallest x (smallest y on ties)
  Point start;
  Coord length = 0;

  friend auto operator<=>(const Run&, const Run&) = default;
};

// Every maximal run in all four directions, ordered by direction then start.
// Each point of `ps` lies in exactly four of the returned runs.
std::vector<Run> maximal_runs(const PointSet& ps);

struct PatternCount {
  std::int64_t count = 0;
  std::vector<Run> runs;
};

// Maximal runs of length exactly k. Throws HypothesisError for k < 1.
PatternCount patterns_of_length(const PointSet& ps, Coord k);

using PatternHistogram = std::map<Coord, std::int64_t>;

PatternHistogram pattern_histogram(const PointSet& ps);

// Canonical representative under translation and the 8 dihedral symmetries:
// every image is translated to min x = min y = 0 and the lexicographically
// smallest sorted point list wins. Throws EmptySetError.
PointSet normalize(const PointSet& ps);

// Image of `p` under dihedral element `g` in [0, 8).
Point dihedral(Point p, int g);

// Text format: one "x y" pair per line, '#' starts a comment, blank lines
// ignored. Throws ParseError / DuplicatePointError with 1-based line numbers.
PointSet parse_points(std::string_view text);
std::string serialize_points(const PointSet& ps);

// {"points": [[x, y], ...]} with points sorted lexicographically.
nlohmann::json to_json(const PointSet& ps);
PointSet points_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PatternHistogram& h);

}  // namespace gridpat
