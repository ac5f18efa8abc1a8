// gridpat: command-line front end for the pattern library.
//
// Exit codes: 0 success, 2 usage, 3 unreadable or malformed input,
// 4 hypothesis violation or infeasible instance, 5 node budget exhausted.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridpat/constructions.hpp"
#include "gridpat/errors.hpp"
#include "gridpat/grid.hpp"
#include "gridpat/queens.hpp"
#include "gridpat/solver.hpp"

using namespace gridpat;
using nlohmann::json;

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) throw IoError("cannot write " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---- count ----------------------------------------------------------------

struct CountArgs {
  std::string file;
  Coord k = 0;
  std::string format = "text";
};

std::string run_count(const CountArgs& a) {
  const auto ps = parse_points(read_input(a.file));
  const auto count = patterns_of_length(ps, a.k).count;
  const auto hist = pattern_histogram(ps);
  if (a.format == "json") {
    return dump({{"schema_version", 1},
                 {"k", a.k},
                 {"points", ps.size()},
                 {"patterns", count},
                 {"histogram", to_json(hist)}});
  }
  std::string out = "patterns=" + std::to_string(count) + "\n";
  for (auto [len, c] : hist) out += "length=" + std::to_string(len) + " count=" + std::to_string(c) + "\n";
  return out;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  Coord k = 0;
  std::int64_t n = 0;
  std::int64_t n_max = 0;
  Coord window = 0;
  std::int64_t budget = 0;
  std::int64_t max_points = 0;
  int threads = 1;
  std::string format = "text";
  std::string witness;
  std::string cache;
};

json cache_key(Coord k, std::int64_t n, Coord window, std::int64_t budget) {
  return {{"k", k}, {"n", n}, {"window", window}, {"budget", budget}};
}

bool trustworthy(const SolveResult& r, Coord k, std::int64_t n, Coord window) {
  if (r.k != k || r.n != n || r.window != window) return false;
  if (static_cast<std::int64_t>(r.witness.size()) != r.value) return false;
  if (r.witness.empty() || normalize(r.witness) != r.witness) return false;
  if (!verify(r.witness, k, n)) return false;
  if (r.lower_bound != lower_bound(k, n) || r.value < r.lower_bound) return false;
  if (r.status == SolveStatus::Proven && !window_suffices(k, n, r.value, window)) return false;
  return true;
}

// Append-only JSON lines; the last verified entry for a key wins.
class ResultCache {
public:
  explicit ResultCache(std::string path) : path_(std::move(path)) {}

  SolveResult solve(Coord k, std::int64_t n, const SolveOptions& o) {
    const Coord window = o.window > 0 ? o.window : default_window(k, n);
    const json key = cache_key(k, n, window, o.node_budget);
    if (auto hit = lookup(key, k, n, window)) return *hit;
    auto r = solve_exact(k, n, o);
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::binary | std::ios::app);
      if (!out || !(out << json{{"key", key}, {"result", to_json(r)}}.dump() << "\n")) {
        throw IoError("cannot append to cache " + path_);
      }
    }
    return r;
  }

private:
  std::optional<SolveResult> lookup(const json& key, Coord k, std::int64_t n, Coord window) const {
    if (path_.empty()) return std::nullopt;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return std::nullopt;
    std::optional<SolveResult> found;
    std::string line;
    while (std::getline(in, line)) {
      const auto j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("key") || j["key"] != key) continue;
      try {
        auto r = solve_result_from_json(j.at("result"));
        if (trustworthy(r, k, n, window)) {
          found = std::move(r);
        } else {
          std::cerr << "gridpat: ignoring cache entry that fails verification\n";
        }
      } catch (const Error&) {
        std::cerr << "gridpat: ignoring malformed cache entry\n";
      }
    }
    return found;
  }

  std::string path_;
};

std::string witness_file(const SolveResult& r) {
  return "# k=" + std::to_string(r.k) + " n=" + std::to_string(r.n) + " value=" + std::to_string(r.value) +
         " status=" + to_string(r.status) + "\n" + serialize_points(r.witness);
}

std::string witness_path(const std::string& pattern, std::int64_t n, bool table) {
  if (!table) return pattern;
  const auto at = pattern.find("{n}");
  if (at == std::string::npos) throw UsageError("--witness needs a {n} placeholder together with --n-max");
  return pattern.substr(0, at) + std::to_string(n) + pattern.substr(at + 3);
}

std::string run_solve(const SolveArgs& a) {
  if ((a.n > 0) == (a.n_max > 0)) throw UsageError("give exactly one of --n and --n-max");
  SolveOptions o;
  o.window = a.window;
  o.node_budget = a.budget;
  o.threads = a.threads;
  o.max_points = a.max_points;
  ResultCache cache(a.cache);
  const bool table_mode = a.n_max > 0;

  std::vector<SolveResult> results;
  if (table_mode) {
    results = subadditive_table(a.k, a.n_max, o, [&](Coord k, std::int64_t n, const SolveOptions& opts) {
      return cache.solve(k, n, opts);
    });
  } else {
    results.push_back(cache.solve(a.k, a.n, o));
  }

  if (!a.witness.empty()) {
    for (const auto& r : results) write_file(witness_path(a.witness, r.n, table_mode), witness_file(r));
  }

  if (a.format == "bfile") return to_bfile(results);
  if (a.format == "json") {
    if (!table_mode) return dump(to_json(results.front()));
    auto entries = json::array();
    for (const auto& r : results) entries.push_back(to_json(r));
    return dump({{"schema_version", 1}, {"k", a.k}, {"entries", std::move(entries)}});
  }
  std::string out;
  if (!table_mode) {
    const auto& r = results.front();
    out += "k=" + std::to_string(r.k) + " n=" + std::to_string(r.n) + "\n";
    out += "value=" + std::to_string(r.value) + "\n";
    out += "status=" + to_string(r.status) + "\n";
    out += "lower_bound=" + std::to_string(r.lower_bound) + "\n";
    out += "window=" + std::to_string(r.window) + "\n";
    out += "nodes=" + std::to_string(r.nodes) + "\n";
    return out;
  }
  out += "n value status lower_bound window\n";
  for (const auto& r : results) {
    out += std::to_string(r.n) + " " + std::to_string(r.value) + " " + to_string(r.status) + " " +
           std::to_string(r.lower_bound) + " " + std::to_string(r.window) + "\n";
  }
  return out;
}

// ---- queens ---------------------------------------------------------------

struct QueensArgs {
  int n = 0;
  std::string mode = "enum";
  std::string format = "text";
  int threads = 1;
  int cap = 13;
  std::int64_t budget = 0;
};

std::string run_queens(const QueensArgs& a) {
  const QueensOptions opts{a.cap, a.threads};
  if (a.mode == "enum") {
    const auto all = enumerate_T(a.n, opts);
    if (a.format == "json") {
      auto perms = json::array();
      for (const auto& p : all) perms.push_back(p.images());
      return dump({{"schema_version", 1}, {"n", a.n}, {"count", all.size()}, {"permutations", std::move(perms)}});
    }
    if (all.empty()) return "empty (gcd(" + std::to_string(a.n) + ",6)=" + std::to_string(std::gcd(a.n, 6)) + ")\n";
    std::string out;
    for (const auto& p : all) out += format_permutation(p) + "\n";
    return out;
  }
  if (a.mode == "classes") {
    const auto report = equivalence_classes(a.n, opts);
    if (a.format == "json") return dump(to_json(report));
    std::string out = "n=" + std::to_string(a.n) + " classes=" + std::to_string(report.classes.size()) + "\n";
    for (const auto& c : report.classes) {
      out += format_permutation(c.representative) + " size=" + std::to_string(c.members.size()) + " " +
             (c.linear ? "linear" : "nonlinear") + "\n";
    }
    return out;
  }
  const auto best = max_partial_toroidal(a.n, a.budget);
  if (a.format == "json") {
    auto j = to_json(best.placement);
    j["schema_version"] = 1;
    j["proven_maximum"] = best.proven_maximum;
    j["nodes"] = best.nodes;
    return dump(j);
  }
  std::string out = "n=" + std::to_string(a.n) + " queens=" + std::to_string(best.placement.queens.size()) +
                    " proven=" + (best.proven_maximum ? "yes" : "no") + "\n";
  for (auto [i, j] : best.placement.queens) out += std::to_string(i) + " " + std::to_string(j) + "\n";
  return out;
}

// ---- construct ------------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  std::vector<std::string> args;
  Coord ratio_k = 0;
  std::string out;
  std::string format = "text";
};

Coord to_coord(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("expected an integer for ") + what + ", got \"" + s + "\"");
}

LatticeVector to_vector(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("expected a vector \"x,y\", got \"" + s + "\"");
  return {to_coord(s.substr(0, comma), "vector x"), to_coord(s.substr(comma + 1), "vector y")};
}

void need_args(const ConstructArgs& a, std::size_t count, const char* usage) {
  if (a.args.size() != count) throw UsageError(std::string("usage: construct ") + usage);
}

std::string run_construct(const ConstructArgs& a) {
  PointSet ps;
  std::string label;
  if (a.kind == "rect") {
    need_args(a, 2, "rect K M");
    ps = full_rectangle(to_coord(a.args[0], "K"), to_coord(a.args[1], "M"));
    label = "rect k=" + a.args[0] + " m=" + a.args[1];
  } else if (a.kind == "tile") {
    need_args(a, 2, "tile PERM N");
    const auto perm = parse_permutation(a.args[0]);
    ps = tile_window(perm, to_coord(a.args[1], "N"));
    label = "tile sigma=" + format_permutation(perm) + " window=" + a.args[1];
  } else if (a.kind == "linear") {
    need_args(a, 3, "linear M SIZE N");
    const auto perm = lattice_permutation(static_cast<int>(to_coord(a.args[0], "M")),
                                          static_cast<int>(to_coord(a.args[1], "SIZE")));
    ps = tile_window(perm, to_coord(a.args[2], "N"));
    label = "tile sigma=" + format_permutation(perm) + " window=" + a.args[2];
  } else if (a.kind == "lattice") {
    need_args(a, 3, "lattice X1,Y1 X2,Y2 N");
    ps = lattice_constellation(to_vector(a.args[0]), to_vector(a.args[1]), to_coord(a.args[2], "N"));
    label = "lattice v1=" + a.args[0] + " v2=" + a.args[1] + " window=" + a.args[2];
  } else if (a.kind == "monsky") {
    need_args(a, 2, "monsky SIZE N");
    const auto best = max_partial_toroidal(static_cast<int>(to_coord(a.args[0], "SIZE")));
    ps = monsky_tile_window(best.placement, to_coord(a.args[1], "N"));
    label = "monsky n=" + a.args[0] + " queens=" + std::to_string(best.placement.queens.size()) +
            " window=" + a.args[1];
  } else {
    throw UsageError("unknown construction \"" + a.kind + "\" (rect, tile, linear, lattice, monsky)");
  }

  std::optional<RatioReport> report;
  if (a.ratio_k > 0) report = ratio(ps, a.ratio_k);

  if (!a.out.empty()) write_file(a.out, serialize_points(ps));

  if (a.format == "json") {
    json j = to_json(ps);
    j["schema_version"] = 1;
    j["construction"] = label;
    if (report) j["ratio"] = to_json(*report);
    return dump(j);
  }
  std::string summary = "construction " + label + "\n";
  summary += "points=" + std::to_string(ps.size()) + "\n";
  if (report) {
    summary += "ratio=" + to_string(report->ratio) + " k=" + std::to_string(report->k) +
               " patterns=" + std::to_string(report->patterns) + "\n";
  }
  if (!a.out.empty()) return summary;
  std::string out;
  std::istringstream lines(summary);
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  return out + serialize_points(ps);
}

// ---- render ---------------------------------------------------------------

struct RenderArgs {
  std::string file;
  std::string format = "ascii";
  std::string out;
};

std::string render_ascii(const PointSet& ps) {
  if (ps.empty()) return "";
  const auto box = bounding_box(ps);
  std::string out;
  for (Coord y = box.max.y; y >= box.min.y; --y) {
    for (Coord x = box.min.x; x <= box.max.x; ++x) out += ps.contains({x, y}) ? "●" : "·";
    out += "\n";
  }
  return out;
}

std::string render_svg(const PointSet& ps) {
  constexpr Coord cell = 20;
  BoundingBox box{{0, 0}, {0, 0}};
  if (!ps.empty()) box = bounding_box(ps);
  const Coord w = box.max.x - box.min.x + 1;
  const Coord h = box.max.y - box.min.y + 1;
  const auto num = [](Coord v) { return std::to_string(v); };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w * cell) + "\" height=\"" +
                    num(h * cell) + "\" viewBox=\"0 0 " + num(w * cell) + " " + num(h * cell) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g stroke=\"#bbbbbb\" stroke-width=\"1\">\n";
  for (Coord i = 0; i <= w; ++i) {
    out += "<line x1=\"" + num(i * cell) + "\" y1=\"0\" x2=\"" + num(i * cell) + "\" y2=\"" + num(h * cell) + "\"/>\n";
  }
  for (Coord i = 0; i <= h; ++i) {
    out += "<line x1=\"0\" y1=\"" + num(i * cell) + "\" x2=\"" + num(w * cell) + "\" y2=\"" + num(i * cell) + "\"/>\n";
  }
  out += "</g>\n<g fill=\"black\">\n";
  // y grows upward: the top row of the image is box.max.y
  for (const auto& p : ps) {
    out += "<circle cx=\"" + num((p.x - box.min.x) * cell + cell / 2) + "\" cy=\"" +
           num((box.max.y - p.y) * cell + cell / 2) + "\" r=\"" + num(cell * 2 / 5) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string run_render(const RenderArgs& a) {
  const auto ps = parse_points(read_input(a.file));
  const auto image = a.format == "svg" ? render_svg(ps) : render_ascii(ps);
  if (a.out.empty()) return image;
  write_file(a.out, image);
  return "";
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  Coord k = 0;
  Coord k_min = 0;
  Coord k_max = 0;
  bool check = false;
  std::string format = "text";
};

// Convergence check for k with k+1 coprime to 6, small enough to tile quickly.
constexpr Coord kCheckLimit = 40;

json check_convergence(Coord k) {
  const int n = static_cast<int>(k + 1);
  const auto sigma = lattice_permutation(2, n);
  const std::vector<Coord> windows{5 * n, 10 * n, 20 * n};
  const auto s = convergence_series(sigma, k, windows);
  auto ratios = json::array();
  for (const auto& r : s.reports) ratios.push_back({{"window", r.window}, {"ratio", to_json(r.ratio)}});
  const bool interior = interior_points_have_four_patterns(tile_window(sigma, windows[0]), k, windows[0], n);
  return {{"sigma", sigma.images()},
          {"ratios", std::move(ratios)},
          {"fit_constant", s.fit.constant},
          {"monotone_error", s.fit.monotone_error},
          {"interior_four_patterns", interior}};
}

std::string run_bounds(const BoundsArgs& a) {
  Coord lo = a.k, hi = a.k;
  if (a.k == 0) {
    if (a.k_min == 0 || a.k_max == 0) throw UsageError("give --k or both --k-min and --k-max");
    lo = a.k_min;
    hi = a.k_max;
  } else if (a.k_min || a.k_max) {
    throw UsageError("--k cannot be combined with --k-min/--k-max");
  }
  if (lo < 1 || hi < lo) throw UsageError("need 1 <= k-min <= k-max");

  auto rows = json::array();
  std::string text = "k lower upper rule near\n";
  std::string checks;
  for (Coord k = lo; k <= hi; ++k) {
    const auto b = f_bounds(k);
    // upper/k within 1/k of 1/4, reported from k = 20 on
    std::string near = "-";
    if (k >= 20) near = b.upper / k - Rational(1, 4) <= Rational(1, k) ? "yes" : "no";
    auto row = to_json(b);
    row["near"] = near;
    text += std::to_string(k) + " " + to_string(b.lower) + " " + to_string(b.upper) + " " + to_string(b.rule) + " " +
            near + "\n";
    if (a.check && std::gcd(k + 1, Coord{6}) == 1 && k <= kCheckLimit) {
      const auto c = check_convergence(k);
      row["check"] = c;
      checks += "check k=" + std::to_string(k) + " sigma=" + format_permutation(QueensPermutation(c["sigma"])) + " ratios=";
      for (std::size_t i = 0; i < c["ratios"].size(); ++i) {
        const auto& r = c["ratios"][i];
        checks += (i ? "," : "") + std::to_string(r["window"].get<Coord>()) + ":" +
                  to_string(Rational(r["ratio"]["num"].get<std::int64_t>(), r["ratio"]["den"].get<std::int64_t>()));
      }
      checks += " C=" + fixed(c["fit_constant"].get<double>()) +
                " monotone=" + (c["monotone_error"].get<bool>() ? "yes" : "no") +
                " interior=" + (c["interior_four_patterns"].get<bool>() ? "yes" : "no") + "\n";
    }
    rows.push_back(std::move(row));
  }
  if (a.format == "json") return dump({{"schema_version", 1}, {"rows", std::move(rows)}});
  return text + checks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid point patterns: counting, exact minima, modular queens and constructions"};
  app.require_subcommand(1);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Count patterns of length k in a points file");
  c->add_option("file", count.file, "points file (\"x y\" per line, '-' for stdin)")->required();
  c->add_option("-k,--k", count.k, "pattern length")->required()->check(CLI::PositiveNumber);
  c->add_option("--format", count.format)->check(CLI::IsMember({"text", "json"}));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Minimal point count for exactly n patterns of length k");
  s->add_option("-k,--k", solve.k)->required()->check(CLI::PositiveNumber);
  s->add_option("-n,--n", solve.n, "number of patterns")->check(CLI::PositiveNumber);
  s->add_option("--n-max", solve.n_max, "tabulate n = 1..N-MAX")->check(CLI::PositiveNumber);
  s->add_option("--window", solve.window, "search window side (default depends on k, n)")->check(CLI::NonNegativeNumber);
  s->add_option("--budget", solve.budget, "search node budget, 0 = unlimited")->check(CLI::NonNegativeNumber);
  s->add_option("--max-points", solve.max_points, "largest point count to try")->check(CLI::NonNegativeNumber);
  s->add_option("--threads", solve.threads)->check(CLI::Range(1, 256));
  s->add_option("--format", solve.format)->check(CLI::IsMember({"text", "json", "bfile"}));
  s->add_option("--witness", solve.witness, "write the witness here ({n} is replaced in table mode)");
  s->add_option("--cache", solve.cache, "JSON-lines results cache");

  QueensArgs queens;
  auto* q = app.add_subcommand("queens", "Modular n-queens: enumeration, classes, maximum partial placements");
  q->add_option("-n,--n", queens.n)->required()->check(CLI::PositiveNumber);
  q->add_option("--mode", queens.mode)->check(CLI::IsMember({"enum", "classes", "maxpartial"}));
  q->add_option("--format", queens.format)->check(CLI::IsMember({"text", "json"}));
  q->add_option("--threads", queens.threads)->check(CLI::Range(1, 256));
  q->add_option("--cap", queens.cap, "largest n to enumerate");
  q->add_option("--budget", queens.budget, "node budget for maxpartial, 0 = unlimited");

  ConstructArgs construct;
  auto* k = app.add_subcommand("construct", "Build a constellation: rect K M | tile PERM N | linear M SIZE N | "
                                            "lattice X1,Y1 X2,Y2 N | monsky SIZE N");
  k->add_option("kind", construct.kind)->required();
  k->add_option("args", construct.args)->required();
  k->add_option("--ratio", construct.ratio_k, "report points per pattern of this length")->check(CLI::PositiveNumber);
  k->add_option("--out", construct.out, "write the points file here");
  k->add_option("--format", construct.format)->check(CLI::IsMember({"text", "json"}));

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Draw a points file");
  r->add_option("file", render.file)->required();
  r->add_option("--format", render.format)->check(CLI::IsMember({"ascii", "svg"}));
  r->add_option("--out", render.out);

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "Lower and upper bounds on lim a_k(n)/n");
  b->add_option("-k,--k", bounds.k)->check(CLI::PositiveNumber);
  b->add_option("--k-min", bounds.k_min)->check(CLI::PositiveNumber);
  b->add_option("--k-max", bounds.k_max)->check(CLI::PositiveNumber);
  b->add_flag("--check", bounds.check, "also tile and measure convergence where a queens tile exists");
  b->add_option("--format", bounds.format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string out;
    if (*c) out = run_count(count);
    if (*s) out = run_solve(solve);
    if (*q) out = run_queens(queens);
    if (*k) out = run_construct(construct);
    if (*r) out = run_render(render);
    if (*b) out = run_bounds(bounds);
    std::cout << out << std::flush;
    return std::cout ? 0 : 3;
  } catch (const UsageError& e) {
    std::cerr << "gridpat: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "gridpat: ";
    if (e.line() > 0) std::cerr << "line " << e.line() << ": ";
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "gridpat: " << e.what() << "\n";
    return 3;
  } catch (const BudgetExhaustedError& e) {
    std::cerr << "gridpat: " << e.what() << "; a(n) >= " << e.reached() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "gridpat: " << e.what() << "\n";
    return 4;
  }
}
