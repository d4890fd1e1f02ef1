#pragma once

#include <stdexcept>
#include <string>

namespace ssflow {

// Base class for all structured failures thrown by the toolkit.  Every error
// carries a short machine-readable tag (stable across releases, used by the
// CLI to map failures onto exit codes) plus a human-readable message.
struct Error : std::runtime_error {
  std::string tag;
  Error(std::string tag_, const std::string& msg)
      : std::runtime_error(tag_ + ": " + msg), tag(std::move(tag_)) {}
};

// Configuration / input problems (CLI exit code 2).
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("ConfigError", m) {}
};
struct SubsonicPoint : Error {
  double x2;
  SubsonicPoint(double x2_, const std::string& m)
      : Error("SubsonicPoint", m), x2(x2_) {}
};
struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& m) : Error("GridTooCoarse", m) {}
};
struct GridMismatch : Error {
  explicit GridMismatch(const std::string& m) : Error("GridMismatch", m) {}
};
struct CompatibilityViolation : Error {
  explicit CompatibilityViolation(const std::string& m)
      : Error("CompatibilityViolation", m) {}
};
struct CornerMismatch : Error {
  explicit CornerMismatch(const std::string& m) : Error("CornerMismatch", m) {}
};

// Numerical failures during a run (CLI exit code 1 when a suite reports them).
struct CFLViolation : Error {
  explicit CFLViolation(const std::string& m) : Error("CFLViolation", m) {}
};
struct StreamlineCrossing : Error {
  explicit StreamlineCrossing(const std::string& m)
      : Error("StreamlineCrossing", m) {}
};
struct SolverDiverged : Error {
  explicit SolverDiverged(const std::string& m) : Error("SolverDiverged", m) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& m) : Error("NoConvergence", m) {}
};
struct DensityFloor : Error {
  explicit DensityFloor(const std::string& m) : Error("DensityFloor", m) {}
};
struct DegenerateFit : Error {
  explicit DegenerateFit(const std::string& m) : Error("DegenerateFit", m) {}
};

}  // namespace ssflow
