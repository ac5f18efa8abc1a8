#include "gridpat/grid.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

#include "gridpat/errors.hpp"

namespace gridpat {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::H: return "H";
    case Direction::V: return "V";
    case Direction::DPlus: return "D+";
    case Direction::DMinus: return "D-";
  }
  return "?";
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  auto dup = std::adjacent_find(points_.begin(), points_.end());
  if (dup != points_.end()) {
    throw DuplicatePointError(
        "duplicate point (" + std::to_string(dup->x) + ", " + std::to_string(dup->y) + ")", 0);
  }
}

PointSet::PointSet(std::initializer_list<Point> points) : PointSet(std::vector<Point>(points)) {}

bool PointSet::insert(Point p) {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it != points_.end() && *it == p) return false;
  points_.insert(it, p);
  return true;
}

bool PointSet::contains(Point p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

BoundingBox bounding_box(const PointSet& ps) {
  if (ps.empty()) throw EmptySetError("bounding box of an empty point set");
  BoundingBox box{ps.points().front(), ps.points().front()};
  for (const auto& p : ps) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

PointSet translate(const PointSet& ps, Point offset) {
  std::vector<Point> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back({p.x + offset.x, p.y + offset.y});
  return PointSet(std::move(out));
}

namespace {

// (line key, position along the line); consecutive positions on one key are
// neighbours in that direction.
std::pair<Coord, Coord> line_coords(Direction d, Point p) {
  switch (d) {
    case Direction::H: return {p.y, p.x};
    case Direction::V: return {p.x, p.y};
    case Direction::DPlus: return {p.x - p.y, p.x};
    case Direction::DMinus: return {p.x + p.y, p.x};
  }
  return {0, 0};
}

Point from_line_coords(Direction d, Coord key, Coord pos) {
  switch (d) {
    case Direction::H: return {pos, key};
    case Direction::V: return {key, pos};
    case Direction::DPlus: return {pos, pos - key};
    case Direction::DMinus: return {pos, key - pos};
  }
  return {0, 0};
}

}  // namespace

std::vector<Run> maximal_runs(const PointSet& ps) {
  std::vector<Run> runs;
  std::vector<std::pair<Coord, Coord>> keyed;
  keyed.reserve(ps.size());
  for (Direction d : kDirections) {
    keyed.clear();
    for (const auto& p : ps) keyed.push_back(line_coords(d, p));
    std::sort(keyed.begin(), keyed.end());
    const std::size_t first = runs.size();
    std::size_t i = 0;
    while (i < keyed.size()) {
      std::size_t j = i + 1;
      while (j < keyed.size() && keyed[j].first == keyed[i].first &&
             keyed[j].second == keyed[j - 1].second + 1) {
        ++j;
      }
      runs.push_back({d, from_line_coords(d, keyed[i].first, keyed[i].second),
                      static_cast<Coord>(j - i)});
      i = j;
    }
    std::sort(runs.begin() + static_cast<std::ptrdiff_t>(first), runs.end(),
              [](const Run& a, const Run& b) { return a.start < b.start; });
  }
  return runs;
}

PatternCount patterns_of_length(const PointSet& ps, Coord k) {
  if (k < 1) throw HypothesisError("pattern length must be >= 1");
  PatternCount out;
  for (auto& r : maximal_runs(ps)) {
    if (r.length == k) out.runs.push_back(r);
  }
  out.count = static_cast<std::int64_t>(out.runs.size());
  return out;
}

PatternHistogram pattern_histogram(const PointSet& ps) {
  PatternHistogram h;
  for (const auto& r : maximal_runs(ps)) ++h[r.length];
  return h;
}

Point dihedral(Point p, int g) {
  switch (g & 7) {
    case 0: return {p.x, p.y};
    case 1: return {-p.x, p.y};
    case 2: return {p.x, -p.y};
    case 3: return {-p.x, -p.y};
    case 4: return {p.y, p.x};
    case 5: return {-p.y, p.x};
    case 6: return {p.y, -p.x};
    default: return {-p.y, -p.x};
  }
}

PointSet normalize(const PointSet& ps) {
  if (ps.empty()) throw EmptySetError("cannot normalize an empty point set");
  std::vector<Point> best;
  std::vector<Point> img;
  img.reserve(ps.size());
  for (int g = 0; g < 8; ++g) {
    img.clear();
    Point lo{ps.points().front()};
    bool first = true;
    for (const auto& p : ps) {
      Point q = dihedral(p, g);
      if (first) {
        lo = q;
        first = false;
      }
      lo.x = std::min(lo.x, q.x);
      lo.y = std::min(lo.y, q.y);
      img.push_back(q);
    }
    for (auto& q : img) q = {q.x - lo.x, q.y - lo.y};
    std::sort(img.begin(), img.end());
    if (best.empty() || img < best) best = img;
  }
  return PointSet(std::move(best));
}

namespace {

bool parse_coord(std::string_view tok, Coord& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

PointSet parse_points(std::string_view text) {
  PointSet ps;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty()) continue;
    Point p;
    if (tokens.size() != 2 || !parse_coord(tokens[0], p.x) || !parse_coord(tokens[1], p.y)) {
      throw ParseError("expected two integers \"x y\", got \"" + std::string(line) + "\"", line_no);
    }
    if (!ps.insert(p)) {
      throw DuplicatePointError(
          "duplicate point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")", line_no);
    }
  }
  return ps;
}

std::string serialize_points(const PointSet& ps) {
  std::string out;
  for (const auto& p : ps) {
    out += std::to_string(p.x);
    out += ' ';
    out += std::to_string(p.y);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const PointSet& ps) {
  auto arr = nlohmann::json::array();
  for (const auto& p : ps) arr.push_back({p.x, p.y});
  return {{"points", std::move(arr)}};
}

PointSet points_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw ParseError("expected {\"points\": [[x, y], ...]}", 0);
  }
  std::vector<Point> pts;
  for (const auto& e : j["points"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ParseError("point entries must be [x, y] integer pairs", 0);
    }
    pts.push_back({e[0].get<Coord>(), e[1].get<Coord>()});
  }
  return PointSet(std::move(pts));
}

nlohmann::json to_json(const PatternHistogram& h) {
  auto obj = nlohmann::json::object();
  for (const auto& [len, count] : h) obj[std::to_string(len)] = count;
  return obj;
}

}  // namespace gridpat
