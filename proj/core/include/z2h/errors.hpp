#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace z2h {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad axes, wrong dimension, interlacing violation, bad bracket.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure did not reach its tolerance. Carries the best
// estimate when one exists.
class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& what,
                          std::optional<double> best = std::nullopt)
      : Error(what), best_(best) {}
  std::optional<double> best_estimate() const { return best_; }

 private:
  std::optional<double> best_;
};

// The query point is within tolerance of the branching ellipsoid.
class BranchProximityError : public Error {
 public:
  explicit BranchProximityError(const std::string& what, double proxy)
      : Error(what), proxy_(proxy) {}
  double proxy() const { return proxy_; }

 private:
  double proxy_;
};

class ContinuationError : public Error {
 public:
  ContinuationError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

[[noreturn]] void throw_precondition(const std::string& what);

}  // namespace z2h
