#ifndef MTDGRID_ERRORS_HPP
#define MTDGRID_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtdgrid {

// Malformed text input. Carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input that parses but cannot describe a usable grid or graph.
class StructuralError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph text format violations (duplicate ids, non-bipartite edges, ...).
class FormatError : public ParseError {
  using ParseError::ParseError;
};

class ArgumentError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// No discriminating code set (or no family of them) exists. When the cause is
// a pair of transformers the solver cannot tell apart, both indices are set;
// an empty neighborhood reports first == second.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
  InfeasibleError(const std::string& what, int first, int second)
      : std::runtime_error(what), first_(first), second_(second) {}

  bool has_pair() const { return first_ >= 0; }
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_ = -1;
  int second_ = -1;
};

// The solver engine misbehaved (should not happen on well-formed input).
class SolverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mtdgrid

#endif  // MTDGRID_ERRORS_HPP
