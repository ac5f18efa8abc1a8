#pragma once

// Modular (toroidal) n-queens: the set T_n of permutations sigma of
// {0..n-1} for which i + sigma(i) and i - sigma(i) (mod n) are also
// permutations, its equivalence classes under inversion and output shift,
// linear solutions and maximum partial placements.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gridpat {

class QueensPermutation {
public:
  // Throws NotAPermutationError unless `images` is a bijection on {0..n-1}.
  explicit QueensPermutation(std::vector<int> images);

  int n() const noexcept { return static_cast<int>(sigma_.size()); }
  int operator()(int i) const { return sigma_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const noexcept { return sigma_; }

  QueensPermutation inverse() const;
  // i -> sigma(i) + m mod n
  QueensPermutation shifted(int m) const;

  friend auto operator<=>(const QueensPermutation&, const QueensPermutation&) = default;

private:
  std::vector<int> sigma_;
};

// "0,2,4,1,3"; n is the number of entries.
QueensPermutation parse_permutation(std::string_view text);
std::string format_permutation(const QueensPermutation& p);

bool in_T(const QueensPermutation& p);
// Validates first; throws NotAPermutationError.
bool in_T(std::span<const int> images);

struct QueensOptions {
  int cap = 13;
  int threads = 1;
};

// All of T_n in lexicographic order, by incremental bitmask backtracking.
// Throws CapExceededError when n > options.cap, HypothesisError when n < 1.
std::vector<QueensPermutation> enumerate_T(int n, const QueensOptions& options = {});

struct LinearForm {
  int m = 0;
  int c = 0;
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

// (m, c) with sigma(i) = m*i + c mod n for all i, if any.
std::optional<LinearForm> is_linear(const QueensPermutation& p);

// sigma(i) = m*i mod n. Requires 1 < m < n-1 and m-1, m, m+1 coprime to n;
// throws HypothesisError naming each failing condition.
QueensPermutation lattice_permutation(int m, int n);

struct EquivalenceClass {
  QueensPermutation representative;
  std::vector<QueensPermutation> members;
  bool linear = false;
};

struct EquivalenceClassReport {
  int n = 0;
  std::vector<EquivalenceClass> classes;
};

// Partition of T_n under the equivalence generated by inversion and output
// shifts. Classes are sorted by representative (the smallest member).
EquivalenceClassReport equivalence_classes(int n, const QueensOptions& options = {});

nlohmann::json to_json(const EquivalenceClassReport& report);

// sigma^{-1} followed by the n output shifts sigma + m, m = 0..n-1.
// Throws HypothesisError unless in_T(p).
std::vector<QueensPermutation> closure_witness(const QueensPermutation& p);

struct PartialPlacement {
  int n = 0;
  // (row, column), sorted
  std::vector<std::pair<int, int>> queens;
};

// Throws HypothesisError if two queens share a row, column or toroidal
// diagonal, or a coordinate is out of range.
void validate(const PartialPlacement& placement);

struct MaxPartialResult {
  PartialPlacement placement;
  bool proven_maximum = false;
  std::int64_t nodes = 0;
};

// Maximum set of mutually non-attacking queens on the n x n torus by
// branch and bound over rows. Among maximum placements the lexicographically
// smallest queen list is returned. `node_budget` <= 0 means unlimited; when
// the budget runs out the incumbent is returned with proven_maximum = false.
MaxPartialResult max_partial_toroidal(int n, std::int64_t node_budget = 0);

nlohmann::json to_json(const PartialPlacement& placement);

}  // namespace gridpat
