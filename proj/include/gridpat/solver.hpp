#pragma once

// a_k(n): the minimal number of grid points whose constellation contains
// exactly n patterns of length k, computed by exhaustive search.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridpat/grid.hpp"

namespace gridpat {

enum class SolveStatus { Proven, BestKnownInWindow };

std::string to_string(SolveStatus s);

struct SolveResult {
  Coord k = 0;
  std::int64_t n = 0;
  std::int64_t value = 0;
  PointSet witness;  // normalized
  SolveStatus status = SolveStatus::BestKnownInWindow;
  std::int64_t lower_bound = 0;
  // configurations searched are those with bounding box at most window x window
  Coord window = 0;
  std::int64_t nodes = 0;
};

nlohmann::json to_json(const SolveResult& r);
// Parses the fields back; does not re-verify the witness.
SolveResult solve_result_from_json(const nlohmann::json& j);

struct SolveOptions {
  // 0 selects default_window(k, n)
  Coord window = 0;
  // search nodes; 0 means unlimited
  std::int64_t node_budget = 0;
  int threads = 1;
  // largest point count to try; 0 means window^2
  std::int64_t max_points = 0;
};

// 3k for n <= 3, otherwise k * ceil(n / 2).
Coord default_window(Coord k, std::int64_t n);

// ceil(k n / 4): each point lies in at most four patterns.
std::int64_t lower_bound(Coord k, std::int64_t n);

bool verify(const PointSet& ps, Coord k, std::int64_t n);

struct ClosedForm {
  std::int64_t value = 0;
  PointSet witness;
};

// a_k(1) = k, a_k(2) = 2k-1, a_k(3) = 3(k-1) with explicit witnesses.
// Throws HypothesisError unless n in {1, 2, 3} and k >= 2.
ClosedForm closed_form_small(Coord k, std::int64_t n);

// Iterative deepening on the point count from lower_bound(k, n). For each
// count every configuration with bounding box inside window x window is
// covered up to translation. Throws BudgetExhaustedError when the node budget
// runs out first and InfeasibleError when no configuration exists under the
// point cap. Results do not depend on options.threads.
SolveResult solve_exact(Coord k, std::int64_t n, const SolveOptions& options = {});

// Whether an exhaustive window search of side `window` that found `value`
// also settles the unrestricted a_k(n).
bool window_suffices(Coord k, std::int64_t n, std::int64_t value, Coord window);

// Entry n is the better of solve_exact(k, n) and the best split
// table[j] + table[n - j], whose witnesses are placed side by side with two
// empty columns between them. `per_entry` applies to every solve; its window
// is chosen per n when left at 0. `solve` replaces solve_exact, e.g. to
// consult a cache.
using SolveFn = std::function<SolveResult(Coord, std::int64_t, const SolveOptions&)>;
std::vector<SolveResult> subadditive_table(Coord k, std::int64_t n_max, const SolveOptions& per_entry = {},
                                           const SolveFn& solve = solve_exact);

// Disjoint union with `b` shifted right of `a` by `gap` empty columns.
PointSet side_by_side(const PointSet& a, const PointSet& b, Coord gap = 2);

// OEIS b-file lines "n a(n)".
std::string to_bfile(const std::vector<SolveResult>& table);

}  // namespace gridpat
