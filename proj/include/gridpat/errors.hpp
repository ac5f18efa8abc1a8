#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gridpat {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DuplicatePointError : public ParseError {
public:
  using ParseError::ParseError;
};

// A precondition on mathematical inputs does not hold (k > m, dependent
// lattice vectors, a permutation outside T_n, ...).
class HypothesisError : public Error {
public:
  using Error::Error;
};

class NotAPermutationError : public HypothesisError {
public:
  using HypothesisError::HypothesisError;
};

class EmptySetError : public HypothesisError {
public:
  using HypothesisError::HypothesisError;
};

class CapExceededError : public HypothesisError {
public:
  using HypothesisError::HypothesisError;
};

// The search ran out of node budget before reaching a feasible configuration.
class BudgetExhaustedError : public Error {
public:
  BudgetExhaustedError(const std::string& what, std::int64_t lower_bound, std::int64_t reached)
      : Error(what), lower_bound_(lower_bound), reached_(reached) {}
  std::int64_t lower_bound() const noexcept { return lower_bound_; }
  // every point count below this was refuted exhaustively
  std::int64_t reached() const noexcept { return reached_; }

private:
  std::int64_t lower_bound_;
  std::int64_t reached_;
};

// Exhaustive search proved that no configuration exists inside the window
// (or under the point cap).
class InfeasibleError : public HypothesisError {
public:
  using HypothesisError::HypothesisError;
};

}  // namespace gridpat
