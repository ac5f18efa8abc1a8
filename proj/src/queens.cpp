#include "gridpat/queens.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <thread>

#include "gridpat/errors.hpp"

namespace gridpat {

namespace {

int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

bool is_bijection(std::span<const int> images) {
  const auto n = images.size();
  std::vector<bool> seen(n, false);
  for (int v : images) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

}  // namespace

QueensPermutation::QueensPermutation(std::vector<int> images) : sigma_(std::move(images)) {
  if (sigma_.empty() || !is_bijection(sigma_)) {
    throw NotAPermutationError("not a permutation of {0.." +
                               std::to_string(static_cast<long long>(sigma_.size()) - 1) +
                               "}: " + format_permutation(*this));
  }
}

QueensPermutation QueensPermutation::inverse() const {
  std::vector<int> inv(sigma_.size());
  for (std::size_t i = 0; i < sigma_.size(); ++i) inv[static_cast<std::size_t>(sigma_[i])] = static_cast<int>(i);
  return QueensPermutation(std::move(inv));
}

QueensPermutation QueensPermutation::shifted(int m) const {
  std::vector<int> out(sigma_.size());
  for (std::size_t i = 0; i < sigma_.size(); ++i) out[i] = mod(static_cast<long long>(sigma_[i]) + m, n());
  return QueensPermutation(std::move(out));
}

QueensPermutation parse_permutation(std::string_view text) {
  std::vector<int> images;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    std::string tok(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t\r\n") + 1);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) {
      throw ParseError("bad permutation entry \"" + tok + "\"", 0);
    }
    images.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return QueensPermutation(std::move(images));
}

std::string format_permutation(const QueensPermutation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.images().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.images()[i]);
  }
  return out;
}

bool in_T(const QueensPermutation& p) {
  const int n = p.n();
  std::vector<bool> sums(static_cast<std::size_t>(n), false), diffs(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    auto s = static_cast<std::size_t>(mod(i + p(i), n));
    auto d = static_cast<std::size_t>(mod(i - p(i), n));
    if (sums[s] || diffs[d]) return false;
    sums[s] = diffs[d] = true;
  }
  return true;
}

bool in_T(std::span<const int> images) {
  return in_T(QueensPermutation(std::vector<int>(images.begin(), images.end())));
}

namespace {

using Mask = std::uint64_t;

struct Enumerator {
  int n;
  Mask full;
  std::vector<int> sigma;
  std::vector<QueensPermutation>* out;

  Mask rot(Mask m, int by) const {
    // rotate an n-bit mask left by `by` positions
    by = mod(by, n);
    if (by == 0) return m;
    return ((m << by) | (m >> (n - by))) & full;
  }

  // `sums` holds (i + sigma(i)) mod n, `offsets` holds (sigma(i) - i) mod n;
  // distinct offsets is the same condition as distinct differences.
  void run(int row, Mask cols, Mask sums, Mask offsets) {
    if (row == n) {
      out->emplace_back(sigma);
      return;
    }
    Mask blocked = cols | rot(sums, -row) | rot(offsets, row);
    Mask free = ~blocked & full;
    while (free) {
      int j = std::countr_zero(free);
      free &= free - 1;
      sigma[static_cast<std::size_t>(row)] = j;
      run(row + 1, cols | (Mask{1} << j), sums | (Mask{1} << mod(row + j, n)),
          offsets | (Mask{1} << mod(j - row, n)));
    }
  }
};

}  // namespace

std::vector<QueensPermutation> enumerate_T(int n, const QueensOptions& options) {
  if (n < 1) throw HypothesisError("board size must be >= 1");
  if (n > options.cap || n > 63) {
    throw CapExceededError("n = " + std::to_string(n) + " exceeds the enumeration cap of " +
                           std::to_string(std::min(options.cap, 63)));
  }
  const Mask full = (Mask{1} << n) - 1;
  // one subtree per first-row column, concatenated in order
  std::vector<std::vector<QueensPermutation>> parts(static_cast<std::size_t>(n));
  auto work = [&](int j) {
    Enumerator e{n, full, std::vector<int>(static_cast<std::size_t>(n), 0), &parts[static_cast<std::size_t>(j)]};
    e.sigma[0] = j;
    e.run(1, Mask{1} << j, Mask{1} << j, Mask{1} << j);
  };
  const int threads = std::clamp(options.threads, 1, n);
  if (threads == 1) {
    for (int j = 0; j < n; ++j) work(j);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int j = t; j < n; j += threads) work(j);
      });
    }
  }
  std::vector<QueensPermutation> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

std::optional<LinearForm> is_linear(const QueensPermutation& p) {
  const int n = p.n();
  const int c = p(0);
  const int m = n > 1 ? mod(p(1) - p(0), n) : 0;
  for (int i = 0; i < n; ++i) {
    if (p(i) != mod(static_cast<long long>(m) * i + c, n)) return std::nullopt;
  }
  return LinearForm{m, c};
}

QueensPermutation lattice_permutation(int m, int n) {
  if (!(1 < m && m < n - 1)) {
    throw HypothesisError("lattice construction needs 1 < m < n-1, got m=" + std::to_string(m) +
                          ", n=" + std::to_string(n));
  }
  std::string failing;
  for (int off : {-1, 0, 1}) {
    int g = std::gcd(m + off, n);
    if (g != 1) {
      if (!failing.empty()) failing += "; ";
      const char* name = off < 0 ? "m-1" : off == 0 ? "m" : "m+1";
      failing += std::string(name) + "=" + std::to_string(m + off) + " shares the factor " +
                 std::to_string(g) + " with n=" + std::to_string(n);
    }
  }
  if (!failing.empty()) throw HypothesisError("lattice hypothesis violated: " + failing);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = mod(static_cast<long long>(m) * i, n);
  return QueensPermutation(std::move(sigma));
}

EquivalenceClassReport equivalence_classes(int n, const QueensOptions& options) {
  EquivalenceClassReport report;
  report.n = n;
  auto members = enumerate_T(n, options);
  if (members.empty()) return report;

  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < members.size(); ++i) index.emplace(members[i].images(), i);

  std::vector<std::size_t> parent(members.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t i = 0; i < members.size(); ++i) {
    // the generators map T_n into itself; a miss would be a bug
    unite(i, index.at(members[i].inverse().images()));
    unite(i, index.at(members[i].shifted(1).images()));
  }

  std::map<std::size_t, std::vector<QueensPermutation>> groups;
  for (std::size_t i = 0; i < members.size(); ++i) groups[find(i)].push_back(members[i]);
  for (auto& [root, group] : groups) {
    std::sort(group.begin(), group.end());
    bool linear = std::all_of(group.begin(), group.end(), [](const auto& q) { return is_linear(q).has_value(); });
    report.classes.push_back({group.front(), std::move(group), linear});
  }
  std::sort(report.classes.begin(), report.classes.end(),
            [](const auto& a, const auto& b) { return a.representative < b.representative; });
  return report;
}

nlohmann::json to_json(const EquivalenceClassReport& report) {
  auto classes = nlohmann::json::array();
  for (const auto& c : report.classes) {
    auto members = nlohmann::json::array();
    for (const auto& m : c.members) members.push_back(m.images());
    classes.push_back({{"representative", c.representative.images()},
                       {"members", std::move(members)},
                       {"linear", c.linear}});
  }
  return {{"schema_version", 1}, {"n", report.n}, {"classes", std::move(classes)}};
}

std::vector<QueensPermutation> closure_witness(const QueensPermutation& p) {
  if (!in_T(p)) throw HypothesisError("closure_witness requires a member of T_n: " + format_permutation(p));
  std::vector<QueensPermutation> out;
  out.push_back(p.inverse());
  for (int m = 0; m < p.n(); ++m) out.push_back(p.shifted(m));
  return out;
}

void validate(const PartialPlacement& placement) {
  const int n = placement.n;
  if (n < 1) throw HypothesisError("board size must be >= 1");
  std::vector<bool> rows(static_cast<std::size_t>(n)), cols(rows), sums(rows), diffs(rows);
  for (auto [i, j] : placement.queens) {
    if (i < 0 || i >= n || j < 0 || j >= n) throw HypothesisError("queen outside the board");
    auto s = static_cast<std::size_t>(mod(i + j, n));
    auto d = static_cast<std::size_t>(mod(i - j, n));
    if (rows[static_cast<std::size_t>(i)] || cols[static_cast<std::size_t>(j)] || sums[s] || diffs[d]) {
      throw HypothesisError("queens attack each other at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(j)] = sums[s] = diffs[d] = true;
  }
}

namespace {

struct PartialSearch {
  int n;
  std::int64_t budget;
  std::int64_t nodes = 0;
  bool aborted = false;
  std::vector<std::pair<int, int>> current;
  std::vector<std::pair<int, int>> best;
  std::vector<bool> cols, sums, diffs;
  int free_cols, free_sums, free_diffs;

  void run(int row) {
    if (aborted) return;
    if (budget > 0 && ++nodes > budget) {
      aborted = true;
      return;
    } else if (budget <= 0) {
      ++nodes;
    }
    const int placed = static_cast<int>(current.size());
    if (placed > static_cast<int>(best.size())) best = current;
    if (row == n || static_cast<int>(best.size()) == n) return;
    const int room = std::min({n - row, free_cols, free_sums, free_diffs});
    if (placed + room <= static_cast<int>(best.size())) return;

    for (int j = 0; j < n && !aborted; ++j) {
      auto s = static_cast<std::size_t>(mod(row + j, n));
      auto d = static_cast<std::size_t>(mod(row - j, n));
      auto c = static_cast<std::size_t>(j);
      if (cols[c] || sums[s] || diffs[d]) continue;
      cols[c] = sums[s] = diffs[d] = true;
      --free_cols, --free_sums, --free_diffs;
      current.emplace_back(row, j);
      run(row + 1);
      current.pop_back();
      ++free_cols, ++free_sums, ++free_diffs;
      cols[c] = sums[s] = diffs[d] = false;
      if (static_cast<int>(best.size()) == n) return;
    }
    // skip this row
    if (placed + std::min({n - row - 1, free_cols, free_sums, free_diffs}) > static_cast<int>(best.size())) {
      run(row + 1);
    }
  }
};

}  // namespace

MaxPartialResult max_partial_toroidal(int n, std::int64_t node_budget) {
  if (n < 1) throw HypothesisError("board size must be >= 1");
  PartialSearch s{};
  s.n = n;
  s.budget = node_budget;
  s.cols.assign(static_cast<std::size_t>(n), false);
  s.sums = s.diffs = s.cols;
  s.free_cols = s.free_sums = s.free_diffs = n;
  s.run(0);
  MaxPartialResult result;
  result.placement = {n, s.best};
  result.proven_maximum = !s.aborted;
  result.nodes = s.nodes;
  return result;
}

nlohmann::json to_json(const PartialPlacement& placement) {
  auto queens = nlohmann::json::array();
  for (auto [i, j] : placement.queens) queens.push_back({i, j});
  return {{"n", placement.n}, {"size", placement.queens.size()}, {"queens", std::move(queens)}};
}

}  // namespace gridpat
