#include "gridpat/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <mutex>
#include <thread>

#include "gridpat/errors.hpp"

namespace gridpat {

std::string to_string(SolveStatus s) {
  return s == SolveStatus::Proven ? "Proven" : "BestKnownInWindow";
}

nlohmann::json to_json(const SolveResult& r) {
  return {{"schema_version", 1},
          {"k", r.k},
          {"n", r.n},
          {"value", r.value},
          {"status", to_string(r.status)},
          {"lower_bound", r.lower_bound},
          {"window", r.window},
          {"nodes", r.nodes},
          {"witness", to_json(r.witness)}};
}

SolveResult solve_result_from_json(const nlohmann::json& j) {
  SolveResult r;
  try {
    r.k = j.at("k").get<Coord>();
    r.n = j.at("n").get<std::int64_t>();
    r.value = j.at("value").get<std::int64_t>();
    const auto status = j.at("status").get<std::string>();
    if (status == "Proven") {
      r.status = SolveStatus::Proven;
    } else if (status == "BestKnownInWindow") {
      r.status = SolveStatus::BestKnownInWindow;
    } else {
      throw ParseError("unknown status \"" + status + "\"", 0);
    }
    r.lower_bound = j.at("lower_bound").get<std::int64_t>();
    r.window = j.at("window").get<Coord>();
    r.nodes = j.value("nodes", std::int64_t{0});
    r.witness = points_from_json(j.at("witness"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed solve result: ") + e.what(), 0);
  }
  return r;
}

Coord default_window(Coord k, std::int64_t n) {
  const Coord w = n <= 3 ? 3 * k : k * ((n + 1) / 2);
  return std::max(w, k + 2);
}

std::int64_t lower_bound(Coord k, std::int64_t n) { return (k * n + 3) / 4; }

bool verify(const PointSet& ps, Coord k, std::int64_t n) { return patterns_of_length(ps, k).count == n; }

ClosedForm closed_form_small(Coord k, std::int64_t n) {
  if (k < 2) throw HypothesisError("closed forms need k >= 2 (a single point already carries 4 patterns of length 1)");
  std::vector<Point> pts;
  switch (n) {
    case 1:
      for (Coord x = 0; x < k; ++x) pts.push_back({x, 0});
      break;
    case 2:
      // horizontal segment, diagonal continuing from its right end
      for (Coord x = 0; x < k; ++x) pts.push_back({x, 0});
      for (Coord t = 1; t < k; ++t) pts.push_back({k - 1 + t, t});
      break;
    case 3:
      // right triangle with legs and hypotenuse of k points each
      for (Coord x = 0; x < k; ++x) pts.push_back({x, 0});
      for (Coord y = 1; y < k; ++y) pts.push_back({0, y});
      for (Coord t = 1; t + 1 < k; ++t) pts.push_back({t, k - 1 - t});
      break;
    default:
      throw HypothesisError("closed forms are known for n in {1, 2, 3}, got n=" + std::to_string(n));
  }
  ClosedForm out;
  out.witness = normalize(PointSet(std::move(pts)));
  out.value = static_cast<std::int64_t>(out.witness.size());
  return out;
}

bool window_suffices(Coord k, std::int64_t n, std::int64_t value, Coord window) {
  // An optimal unrestricted configuration splits into king-connected
  // components, each holding at least one pattern (so at most value/k of them)
  // and each at most as wide as its point count. Laid side by side with one
  // empty column between them they fit in this width, and patterns are
  // additive over components.
  if (value == lower_bound(k, n)) return true;
  return window >= value + value / k - 1;
}

namespace {

constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max();

struct Candidate {
  Point min_cell;  // smallest cell in (y, x) order
  Direction dir;
  int flank_before;
  int flank_after;
  Coord minx, maxx, miny, maxy;
};

// Read-only layout shared by all workers: a dense cell array over
// [-R, R]^2 and every length-k segment whose cells satisfy (y, x) >= (0, 0)
// and fit a window-sided box containing the origin, sorted by key
// (min cell in (y, x) order, then direction).
struct Geometry {
  Coord k;
  Coord window;
  Coord radius;
  int side;
  std::array<int, 4> offset;
  std::vector<Candidate> cands;
  std::vector<int> cells;   // k grid indices per candidate
  std::vector<int> seg_at;  // (min cell index, dir) -> candidate or -1
  std::vector<int> first_level;  // candidates with min cell (0, 0)

  Geometry(Coord k_, Coord window_) : k(k_), window(window_), radius(window_ + 2) {
    side = static_cast<int>(2 * radius + 1);
    offset = {1, side, side + 1, 1 - side};
    seg_at.assign(static_cast<std::size_t>(side) * side * 4, -1);
    const Coord lo = -(window - 1), hi = window - 1;
    for (Coord y = 0; y <= hi; ++y) {
      for (Coord x = (y == 0 ? 0 : lo); x <= hi; ++x) {
        for (Direction d : kDirections) {
          // cells from the min cell; D- runs towards smaller x as y grows
          Point s = step(d);
          Point walk = d == Direction::DMinus ? Point{-1, 1} : s;
          Coord minx = x, maxx = x, miny = y, maxy = y;
          for (Coord t = 1; t < k; ++t) {
            minx = std::min(minx, x + t * walk.x);
            maxx = std::max(maxx, x + t * walk.x);
            maxy = std::max(maxy, y + t * walk.y);
          }
          if (minx < lo || maxx > hi || maxy > hi) continue;
          if (maxx - minx + 1 > window || maxy - miny + 1 > window) continue;
          Candidate c;
          c.min_cell = {x, y};
          c.dir = d;
          c.flank_before = index(x - walk.x, y - walk.y);
          c.flank_after = index(x + k * walk.x, y + k * walk.y);
          c.minx = minx;
          c.maxx = maxx;
          c.miny = miny;
          c.maxy = maxy;
          const int id = static_cast<int>(cands.size());
          cands.push_back(c);
          for (Coord t = 0; t < k; ++t) cells.push_back(index(x + t * walk.x, y + t * walk.y));
          seg_at[static_cast<std::size_t>(index(x, y)) * 4 + static_cast<std::size_t>(d)] = id;
          if (x == 0 && y == 0) first_level.push_back(id);
        }
      }
    }
  }

  int index(Coord x, Coord y) const { return static_cast<int>((y + radius) * side + (x + radius)); }
  Point point(int idx) const { return {idx % side - radius, idx / side - radius}; }
  const int* cells_of(int cand) const { return cells.data() + static_cast<std::size_t>(cand) * static_cast<std::size_t>(k); }
};

struct SpuriousRun {
  int flank_before;
  int flank_after;
};

struct Box {
  Coord minx, maxx, miny, maxy;
};

class Worker {
public:
  Worker(const Geometry& g, std::int64_t n, std::int64_t points)
      : g_(g), n_(n), points_(points) {
    const auto cells = static_cast<std::size_t>(g.side) * static_cast<std::size_t>(g.side);
    occ_.assign(cells, 0);
    mask_.assign(cells, 0);
    forb_.assign(cells, 0);
    seg_lb_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t depth = n - 1; depth >= 0; --depth) {
      seg_lb_[static_cast<std::size_t>(depth)] =
          seg_lb_[static_cast<std::size_t>(depth) + 1] + std::max<std::int64_t>(0, g.k - depth);
    }
  }

  struct Outcome {
    bool found = false;
    bool capped = false;
    std::int64_t nodes = 0;
    std::vector<Point> witness;
  };

  // Explores every completion of the chosen prefix (one or two candidates).
  Outcome run(const std::vector<int>& prefix, std::int64_t node_cap) {
    nodes_ = 0;
    cap_ = node_cap;
    capped_ = false;
    Outcome out;
    bool ok = true;
    int depth = 0;
    int last = -1;
    for (int c : prefix) {
      if (!admissible(c, depth)) {
        ok = false;
        break;
      }
      apply(c);
      ++depth;
      last = c;
      if (!bound_ok(depth, last)) {
        ok = false;
        break;
      }
    }
    if (ok) out.found = dfs(depth, last);
    if (out.found) {
      for (int idx : tcells_) out.witness.push_back(g_.point(idx));
    }
    while (extras_ > 0) remove_extra();
    while (!chosen_.empty()) undo();
    out.nodes = nodes_;
    out.capped = capped_;
    return out;
  }

  // Candidates that may follow `first` at depth 1.
  std::vector<int> second_level(int first) {
    std::vector<int> out;
    if (!admissible(first, 0)) return out;
    apply(first);
    if (bound_ok(1, first)) {
      for (int c = first + 1; c < static_cast<int>(g_.cands.size()); ++c) {
        if (admissible(c, 1)) out.push_back(c);
      }
    }
    undo();
    return out;
  }

private:
  const Geometry& g_;
  std::int64_t n_;
  std::int64_t points_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint8_t> mask_;
  std::vector<int> forb_;
  std::vector<int> tcells_;
  std::vector<int> chosen_;
  std::vector<std::size_t> chosen_mark_;
  std::vector<Box> boxes_;
  std::vector<std::int64_t> seg_lb_;
  int extras_ = 0;
  std::int64_t nodes_ = 0;
  std::int64_t cap_ = kUnlimited;
  bool capped_ = false;

  Box box() const { return boxes_.empty() ? Box{0, 0, 0, 0} : boxes_.back(); }

  bool fits(const Box& b, Coord x0, Coord x1, Coord y0, Coord y1) const {
    if (boxes_.empty()) return x1 - x0 + 1 <= g_.window && y1 - y0 + 1 <= g_.window;
    return std::max(b.maxx, x1) - std::min(b.minx, x0) + 1 <= g_.window &&
           std::max(b.maxy, y1) - std::min(b.miny, y0) + 1 <= g_.window;
  }

  bool fits_cell(int idx) const {
    Point p = g_.point(idx);
    return fits(box(), p.x, p.x, p.y, p.y);
  }

  bool tick() {
    if (++nodes_ > cap_) {
      capped_ = true;
      return false;
    }
    return true;
  }

  // Cheap feasibility of adding candidate c as segment number `depth`.
  bool admissible(int c, int depth) const {
    const Candidate& cand = g_.cands[static_cast<std::size_t>(c)];
    if (!fits(box(), cand.minx, cand.maxx, cand.miny, cand.maxy)) return false;
    if (occ_[static_cast<std::size_t>(cand.flank_before)] || occ_[static_cast<std::size_t>(cand.flank_after)]) return false;
    const int* cells = g_.cells_of(c);
    std::int64_t fresh = 0;
    for (Coord t = 0; t < g_.k; ++t) {
      const auto idx = static_cast<std::size_t>(cells[t]);
      if (forb_[idx]) return false;
      if (!occ_[idx]) ++fresh;
    }
    return static_cast<std::int64_t>(tcells_.size()) + fresh + seg_lb_[static_cast<std::size_t>(depth) + 1] <= points_;
  }

  void apply(int c) {
    const Candidate& cand = g_.cands[static_cast<std::size_t>(c)];
    chosen_.push_back(c);
    chosen_mark_.push_back(tcells_.size());
    Box b = boxes_.empty() ? Box{cand.minx, cand.maxx, cand.miny, cand.maxy} : boxes_.back();
    b.minx = std::min(b.minx, cand.minx);
    b.maxx = std::max(b.maxx, cand.maxx);
    b.miny = std::min(b.miny, cand.miny);
    b.maxy = std::max(b.maxy, cand.maxy);
    boxes_.push_back(b);
    const int* cells = g_.cells_of(c);
    const auto bit = static_cast<std::uint8_t>(1u << static_cast<unsigned>(cand.dir));
    for (Coord t = 0; t < g_.k; ++t) {
      const auto idx = static_cast<std::size_t>(cells[t]);
      if (!occ_[idx]) {
        occ_[idx] = 1;
        tcells_.push_back(cells[t]);
      }
      mask_[idx] |= bit;
    }
    ++forb_[static_cast<std::size_t>(cand.flank_before)];
    ++forb_[static_cast<std::size_t>(cand.flank_after)];
  }

  void undo() {
    const int c = chosen_.back();
    const Candidate& cand = g_.cands[static_cast<std::size_t>(c)];
    const int* cells = g_.cells_of(c);
    const auto bit = static_cast<std::uint8_t>(1u << static_cast<unsigned>(cand.dir));
    for (Coord t = 0; t < g_.k; ++t) mask_[static_cast<std::size_t>(cells[t])] &= static_cast<std::uint8_t>(~bit);
    const std::size_t mark = chosen_mark_.back();
    while (tcells_.size() > mark) {
      occ_[static_cast<std::size_t>(tcells_.back())] = 0;
      tcells_.pop_back();
    }
    --forb_[static_cast<std::size_t>(cand.flank_before)];
    --forb_[static_cast<std::size_t>(cand.flank_after)];
    chosen_.pop_back();
    chosen_mark_.pop_back();
    boxes_.pop_back();
  }

  void add_extra(int idx) {
    ++extras_;
    occ_[static_cast<std::size_t>(idx)] = 1;
    tcells_.push_back(idx);
    Point p = g_.point(idx);
    Box b = box();
    boxes_.push_back({std::min(b.minx, p.x), std::max(b.maxx, p.x), std::min(b.miny, p.y), std::max(b.maxy, p.y)});
  }

  void remove_extra() {
    --extras_;
    occ_[static_cast<std::size_t>(tcells_.back())] = 0;
    tcells_.pop_back();
    boxes_.pop_back();
  }

  bool can_fill(int idx) const { return !forb_[static_cast<std::size_t>(idx)] && fits_cell(idx); }

  // Maximal runs of length exactly k that are not chosen segments and can no
  // longer become one (their key is at most `last`, or no segment remains).
  // Returns false as soon as such a run has no fillable flank.
  bool spurious_runs(int last, bool segments_remain, std::vector<SpuriousRun>& out) const {
    out.clear();
    const Coord k = g_.k;
    for (int c : tcells_) {
      for (Direction d : kDirections) {
        const int off = g_.offset[static_cast<std::size_t>(d)];
        const int before = c - off;
        if (occ_[static_cast<std::size_t>(before)]) continue;
        Coord len = 1;
        int q = c + off;
        while (occ_[static_cast<std::size_t>(q)] && len <= k) {
          ++len;
          q += off;
        }
        if (len != k) continue;
        const auto bit = static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
        if (mask_[static_cast<std::size_t>(c)] & bit) continue;
        if (segments_remain) {
          const int min_cell = d == Direction::DMinus ? q - off : c;
          const int key = g_.seg_at[static_cast<std::size_t>(min_cell) * 4 + static_cast<std::size_t>(d)];
          if (key > last) continue;
        }
        if (!can_fill(before) && !can_fill(q)) return false;
        out.push_back({before, q});
      }
    }
    return true;
  }

  bool bound_ok(int depth, int last) {
    std::vector<SpuriousRun>& spur = scratch_;
    if (!spurious_runs(last, depth < n_, spur)) return false;
    const auto used = static_cast<std::int64_t>(tcells_.size());
    std::int64_t need = seg_lb_[static_cast<std::size_t>(depth)];
    const std::int64_t remaining = n_ - depth;
    if (remaining > 0) {
      // future segments only touch cells at or after the last key's min cell
      const Point from = g_.cands[static_cast<std::size_t>(last)].min_cell;
      std::int64_t capacity = 0;
      for (int c : tcells_) {
        Point p = g_.point(c);
        if (p.y > from.y || (p.y == from.y && p.x >= from.x)) {
          capacity += 4 - std::popcount(static_cast<unsigned>(mask_[static_cast<std::size_t>(c)]));
        }
      }
      const std::int64_t overflow = remaining * g_.k - capacity;
      if (overflow > 0) need = std::max(need, (overflow + 3) / 4);
    }
    need = std::max<std::int64_t>(need, (static_cast<std::int64_t>(spur.size()) + 7) / 8);
    return used + need <= points_;
  }

  bool dfs(int depth, int last) {
    if (!tick()) return false;
    if (depth == n_) return close();
    for (int c = last + 1; c < static_cast<int>(g_.cands.size()); ++c) {
      if (!admissible(c, depth)) continue;
      apply(c);
      if (bound_ok(depth + 1, c) && dfs(depth + 1, c)) return true;
      undo();
      if (capped_) return false;
    }
    return false;
  }

  // Adds extra points on flanks until no spurious length-k run is left.
  bool close() {
    if (!tick()) return false;
    std::vector<SpuriousRun> spur;
    if (!spurious_runs(std::numeric_limits<int>::max(), false, spur)) return false;
    if (spur.empty()) return true;
    const auto used = static_cast<std::int64_t>(tcells_.size());
    if (used + (static_cast<std::int64_t>(spur.size()) + 7) / 8 > points_) return false;
    // branch on the most constrained run
    const SpuriousRun* pick = &spur.front();
    for (const auto& r : spur) {
      if (!(can_fill(r.flank_before) && can_fill(r.flank_after))) {
        pick = &r;
        break;
      }
    }
    const std::array<int, 2> flanks{pick->flank_before, pick->flank_after};
    for (int f : flanks) {
      if (!can_fill(f) || used + 1 > points_) continue;
      add_extra(f);
      if (close()) return true;
      remove_extra();
      if (capped_) return false;
    }
    return false;
  }

  std::vector<SpuriousRun> scratch_;
};

struct LevelOutcome {
  bool found = false;
  bool exhausted = false;
  std::int64_t nodes = 0;
  std::vector<Point> witness;
};

LevelOutcome search_level(const Geometry& g, std::int64_t n, std::int64_t points, std::int64_t budget, int threads) {
  LevelOutcome level;
  // root bound: pairwise intersections and four patterns per cell
  std::int64_t root = 0;
  for (std::int64_t s = 0; s < n; ++s) root += std::max<std::int64_t>(0, g.k - s);
  root = std::max(root, lower_bound(g.k, n));
  if (root > points) {
    level.nodes = 1;
    level.exhausted = budget < 1;
    return level;
  }

  std::vector<std::vector<int>> tasks;
  {
    Worker w(g, n, points);
    for (int first : g.first_level) {
      if (n == 1) {
        tasks.push_back({first});
        continue;
      }
      for (int second : w.second_level(first)) tasks.push_back({first, second});
    }
  }

  std::vector<Worker::Outcome> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_hit{tasks.size()};
  auto work = [&] {
    Worker w(g, n, points);
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size() || t > first_hit.load()) return;
      results[t] = w.run(tasks[t], budget);
      if (results[t].found) {
        std::size_t cur = first_hit.load();
        while (t < cur && !first_hit.compare_exchange_weak(cur, t)) {
        }
      }
    }
  };
  if (threads <= 1) {
    // sequential runs stop once the prefix spends the budget
    Worker w(g, n, points);
    std::int64_t spent = 0;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      results[t] = w.run(tasks[t], budget == kUnlimited ? kUnlimited : budget - spent);
      spent += results[t].nodes;
      if (results[t].found || results[t].capped) break;
    }
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  // settle in task order so the outcome is schedule independent
  std::int64_t spent = 1;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& r = results[t];
    spent += r.nodes;
    if (r.capped || (budget != kUnlimited && spent > budget)) {
      level.exhausted = true;
      break;
    }
    if (r.found) {
      level.found = true;
      level.witness = r.witness;
      break;
    }
  }
  level.nodes = budget == kUnlimited ? spent : std::min(spent, budget);
  return level;
}

}  // namespace

SolveResult solve_exact(Coord k, std::int64_t n, const SolveOptions& options) {
  if (k < 1) throw HypothesisError("k must be >= 1");
  if (n < 1) throw HypothesisError("n must be >= 1");
  const Coord window = options.window > 0 ? options.window : default_window(k, n);
  if (window < k + 2) {
    throw HypothesisError("window " + std::to_string(window) + " is below k+2=" + std::to_string(k + 2));
  }
  if (window > 200) throw HypothesisError("window " + std::to_string(window) + " exceeds the supported maximum of 200");
  std::int64_t max_points = window * window;
  if (options.max_points > 0) max_points = std::min(max_points, options.max_points);

  const Geometry geometry(k, window);
  const std::int64_t lb = lower_bound(k, n);
  std::int64_t budget_left = options.node_budget > 0 ? options.node_budget : kUnlimited;
  std::int64_t nodes = 0;
  for (std::int64_t p = lb; p <= max_points; ++p) {
    auto level = search_level(geometry, n, p, budget_left, std::max(1, options.threads));
    nodes += level.nodes;
    if (budget_left != kUnlimited) budget_left -= level.nodes;
    if (level.found) {
      SolveResult r;
      r.k = k;
      r.n = n;
      r.value = p;
      r.witness = normalize(PointSet(std::move(level.witness)));
      r.lower_bound = lb;
      r.window = window;
      r.nodes = nodes;
      r.status = window_suffices(k, n, p, window) ? SolveStatus::Proven : SolveStatus::BestKnownInWindow;
      return r;
    }
    if (level.exhausted || (budget_left != kUnlimited && budget_left <= 0)) {
      throw BudgetExhaustedError("node budget exhausted while refuting " + std::to_string(p) +
                                     " points (lower bound " + std::to_string(lb) + ")",
                                 lb, p);
    }
  }
  throw InfeasibleError("no configuration with at most " + std::to_string(max_points) + " points and " +
                        std::to_string(n) + " patterns of length " + std::to_string(k) + " fits a " +
                        std::to_string(window) + "x" + std::to_string(window) + " window");
}

PointSet side_by_side(const PointSet& a, const PointSet& b, Coord gap) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const auto ba = bounding_box(a);
  const auto bb = bounding_box(b);
  std::vector<Point> pts(a.begin(), a.end());
  for (const auto& p : b) pts.push_back({p.x - bb.min.x + ba.max.x + gap + 1, p.y - bb.min.y + ba.min.y});
  return PointSet(std::move(pts));
}

std::vector<SolveResult> subadditive_table(Coord k, std::int64_t n_max, const SolveOptions& per_entry,
                                           const SolveFn& solve) {
  if (n_max < 1) throw HypothesisError("n_max must be >= 1");
  std::vector<SolveResult> table;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    SolveResult best = solve(k, n, per_entry);
    for (std::int64_t j = 1; j <= n / 2; ++j) {
      const auto& a = table[static_cast<std::size_t>(j - 1)];
      const auto& b = table[static_cast<std::size_t>(n - j - 1)];
      if (a.value + b.value < best.value) {
        best.value = a.value + b.value;
        best.witness = normalize(side_by_side(a.witness, b.witness));
        best.status = SolveStatus::BestKnownInWindow;
        const auto box = bounding_box(best.witness);
        best.window = std::max(box.width(), box.height());
      }
    }
    table.push_back(std::move(best));
  }
  return table;
}

std::string to_bfile(const std::vector<SolveResult>& table) {
  std::string out;
  for (const auto& r : table) out += std::to_string(r.n) + " " + std::to_string(r.value) + "\n";
  return out;
}

}  // namespace gridpat
