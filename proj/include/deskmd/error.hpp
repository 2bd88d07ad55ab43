#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace deskmd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Structure, parameter and CSV readers report the offending 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OverlapError : public Error {
 public:
  OverlapError() : Error("overlapping atoms (zero separation)") {}
  OverlapError(std::size_t i, std::size_t j)
      : Error("overlapping atoms " + std::to_string(i) + " and " + std::to_string(j) +
              " (zero separation)"),
        i_(i),
        j_(j),
        has_ids_(true) {}
  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }
  bool has_ids() const noexcept { return has_ids_; }

 private:
  std::size_t i_ = 0;
  std::size_t j_ = 0;
  bool has_ids_ = false;
};

class IntegrationError : public Error {
 public:
  IntegrationError(std::size_t step, const std::string& what)
      : Error("integration failed at step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class StuckMinimization : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// Raised by the worker pool; `cause()` is the exception thrown by the task.
class TaskError : public Error {
 public:
  TaskError(std::size_t index, const std::string& what, std::exception_ptr cause)
      : Error("task failed at index " + std::to_string(index) + ": " + what),
        index_(index),
        cause_(std::move(cause)) {}
  std::size_t index() const noexcept { return index_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  std::size_t index_;
  std::exception_ptr cause_;
};

class MeasurementInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace deskmd
