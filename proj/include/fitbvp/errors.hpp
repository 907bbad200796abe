#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fitbvp {

/// Invalid mesh or scheme parameters (e.g. a negative cubic coefficient).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateMeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingExactError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class MeshMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton did not reach tolerance; carries the max-norm of every step taken.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> step_history)
      : std::runtime_error(what), step_history_(std::move(step_history)) {}

  const std::vector<double>& step_history() const noexcept { return step_history_; }

 private:
  std::vector<double> step_history_;
};

}  // namespace fitbvp
