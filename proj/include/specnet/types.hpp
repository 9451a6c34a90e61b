#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace specnet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
// Sign classes of real directions repeat with period pi/3.
inline constexpr double kPhasePeriod = kPi / 3.0;

/// Phase of the rotated differential, reduced to [0, pi/3).
struct Phase {
    double theta = 0.0;

    Phase() = default;
    explicit Phase(double t) : theta(reduce(t)) {}

    static double reduce(double t) {
        double r = std::fmod(t, kPhasePeriod);
        if (r < 0.0) r += kPhasePeriod;
        return r;
    }

    /// Cyclic distance on the phase circle R/(pi/3)Z.
    static double cyclic_distance(double a, double b) {
        double d = std::fabs(reduce(a) - reduce(b));
        return std::min(d, kPhasePeriod - d);
    }
};

enum class TrajectorySign { Positive, Negative };

inline TrajectorySign flip(TrajectorySign s) {
    return s == TrajectorySign::Positive ? TrajectorySign::Negative
                                         : TrajectorySign::Positive;
}

inline const char* to_string(TrajectorySign s) {
    return s == TrajectorySign::Positive ? "+" : "-";
}

/// Central record of numeric tolerances. All geometric tolerances scale
/// with the characteristic length of the configuration at hand.
struct Tolerances {
    double root_tol = 1e-12;           // polynomial root acceptance
    double branch_margin = 0.5;        // fraction of cube-root separation
    double polygon_audit = 1e-6;       // Gauss-Bonnet residual bound
    double ode_local_error = 1e-11;    // per-step truncation error target
    double hit_factor = 1e-7;          // hit tolerance = factor * scale
    double escape_factor = 20.0;       // escape radius = factor * scale
    double sing_factor = 1e-6;         // eps_sing = factor * scale
    double joint_dedup_factor = 1e-6;  // joint dedup radius = factor * scale
    double quad_rel_error = 1e-9;      // relative quadrature error target
    double angle_tol = 1e-4;           // corner angle quantization check
    double phase_bisect_tol = 1e-10;   // bisection resolution in theta
};

class EngineError : public std::runtime_error {
  public:
    explicit EngineError(const std::string& msg) : std::runtime_error(msg) {}
};

class MultipleZeroError : public EngineError {
  public:
    explicit MultipleZeroError(const std::string& msg) : EngineError(msg) {}
};

class BranchAmbiguityError : public EngineError {
  public:
    explicit BranchAmbiguityError(const std::string& msg) : EngineError(msg) {}
};

class QuadratureStallError : public EngineError {
  public:
    explicit QuadratureStallError(const std::string& msg) : EngineError(msg) {}
};

class CoreAssemblyError : public EngineError {
  public:
    explicit CoreAssemblyError(const std::string& msg) : EngineError(msg) {}
};

class UnclassifiedCoreError : public EngineError {
  public:
    explicit UnclassifiedCoreError(const std::string& msg) : EngineError(msg) {}
};

class NotReducibleError : public EngineError {
  public:
    explicit NotReducibleError(const std::string& msg) : EngineError(msg) {}
};

class AmbiguousClassError : public EngineError {
  public:
    explicit AmbiguousClassError(const std::string& msg) : EngineError(msg) {}
};

class ConfigError : public EngineError {
  public:
    explicit ConfigError(const std::string& msg) : EngineError(msg) {}
};

}  // namespace specnet
