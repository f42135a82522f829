#pragma once

#include <stdexcept>
#include <string>

namespace nsmlimit {

/// Density reached zero or below somewhere on the grid.
class VacuumError : public std::runtime_error {
 public:
  explicit VacuumError(const std::string& what = "vacuum state") : std::runtime_error(what) {}
};

/// div E or div B exceeded the solenoidal tolerance.
class ConstraintDrift : public std::runtime_error {
 public:
  explicit ConstraintDrift(const std::string& what = "constraint drift") : std::runtime_error(what) {}
};

/// Non-finite values appeared during time stepping.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(double t, const std::string& detail)
      : std::runtime_error("blow-up detected at t=" + std::to_string(t) + ": " + detail), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("grid mismatch") {}
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsmlimit
