#pragma once

#include <stdexcept>
#include <string>

namespace mobius {

// Sparse products refuse to grow past the configured coefficient budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Orbit evaluation hit a point where the map is undefined (e.g. the Boole map
// too close to 0).  Carries the failing time step.
class OrbitError : public std::runtime_error {
 public:
  OrbitError(const std::string& what, long long step)
      : std::runtime_error(what + " at step n=" + std::to_string(step)), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

// Hopf ratio with an identically-zero denominator at the first checkpoint.
class UndefinedRatioError : public std::runtime_error {
 public:
  explicit UndefinedRatioError(const std::string& what) : std::runtime_error(what) {}
};

// Subsequence plan violating the gap condition n_{j+1} >= n_j + 3.
class InvalidPlanError : public std::invalid_argument {
 public:
  explicit InvalidPlanError(const std::string& what) : std::invalid_argument(what) {}
};

// Normalization against a cylinder whose measure estimate vanished.
class DegenerateCylinderError : public std::runtime_error {
 public:
  explicit DegenerateCylinderError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mobius
