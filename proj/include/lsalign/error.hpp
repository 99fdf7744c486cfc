#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lsalign {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("sample is empty") {}
};

class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(std::size_t index)
      : Error("non-finite value at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class InvalidProbability : public Error {
 public:
  explicit InvalidProbability(double u)
      : Error("probability outside (0, 1]: " + std::to_string(u)) {}
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class InvalidOrder : public Error {
 public:
  explicit InvalidOrder(double r) : Error("Mallows order must be >= 1, got " + std::to_string(r)) {}
};

class NonPositiveScale : public Error {
 public:
  explicit NonPositiveScale(double sigma)
      : Error("scale must be positive, got " + std::to_string(sigma)) {}
};

// Raised when the scale parameter cannot be identified from the data, e.g.
// every quantile of the reference distribution is zero.
class DegenerateScale : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class AllZeroDifferences : public Error {
 public:
  AllZeroDifferences() : Error("all paired differences are zero") {}
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Input file problems. `line` is 1-based; 0 means the whole file.
class InputError : public Error {
 public:
  InputError(std::string path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(std::move(path)),
        line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace lsalign
