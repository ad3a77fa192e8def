#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcsteer {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or lengths of the operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a precondition (empty input, wrong layout, bad rank, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite data or a failed decomposition.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Row selection with duplicates or out-of-range indices.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Selected rows are not linearly independent.
class DependenceError : public Error {
 public:
  DependenceError(const std::string& what, std::size_t achieved_rank, std::size_t requested_rank)
      : Error(what), achieved_rank_(achieved_rank), requested_rank_(requested_rank) {}

  std::size_t achieved_rank() const noexcept { return achieved_rank_; }
  std::size_t requested_rank() const noexcept { return requested_rank_; }

 private:
  std::size_t achieved_rank_;
  std::size_t requested_rank_;
};

/// A configuration document failed validation. field() is the dotted key path.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& constraint)
      : Error(field + ": " + constraint), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcsteer
