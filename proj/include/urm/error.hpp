#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace urm {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph or matching text. Carries the 1-based line number.
class parse_error : public error {
public:
  parse_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A file could not be opened, read, or written.
class io_error : public error {
public:
  using error::error;
};

/// An operation was called on an input outside its documented domain.
class precondition_error : public error {
public:
  using error::error;
};

class not_bipartite : public precondition_error {
public:
  explicit not_bipartite(std::vector<std::uint32_t> odd_cycle)
      : precondition_error("graph is not bipartite"), odd_cycle_(std::move(odd_cycle)) {}

  const std::vector<std::uint32_t>& odd_cycle() const noexcept { return odd_cycle_; }

private:
  std::vector<std::uint32_t> odd_cycle_;
};

/// The input has a 4-cycle where a C4-free graph is required.
class contains_c4 : public precondition_error {
public:
  contains_c4() : precondition_error("graph contains a 4-cycle") {}
};

/// An exact oracle exceeded its vertex, edge, or time budget.
class budget_exceeded : public error {
public:
  using error::error;
};

/// A state the correctness argument rules out was reached. Surfacing these
/// instead of silently recovering keeps them visible to the test suites.
class soundness_error : public error {
public:
  using error::error;
};

/// The recoloring manipulations could not remove the victim color. For a
/// connected graph with a coloring in [Δ²] this certifies K_{Δ,Δ}.
class improvement_blocked : public error {
public:
  using error::error;
};

} // namespace urm
