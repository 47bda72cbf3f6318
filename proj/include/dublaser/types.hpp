#pragma once
/**
 * @file types.hpp
 * @brief Domain types for the Dubins-laser planning library: problem
 *        parameters, system state, trajectory segments, laser schedules and
 *        candidate trajectory labels.
 */

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dublaser/geometry.hpp"

namespace dublaser {

/// Structured error with a machine-readable code (CLI maps these to exit codes).
class Error : public std::runtime_error {
 public:
  enum class Code {
    InvalidParams,
    InconsistentPlan,
    StateAtTarget,
    UnsupportedInitialCondition,
    NoPlanFound,
    ParseError,
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Problem constants: minimum turn radius, laser range, laser rate bound.
/// The target is static at the origin.
struct SystemParams {
  double rho = 1.0;        ///< minimum turn radius, > 0
  double r = 1.0;          ///< laser range, > 0
  double omega_max = 1.0;  ///< laser angular-rate bound, > 0

  void validate() const {
    if (!(rho > 0.0)) throw Error(Error::Code::InvalidParams, "rho must be > 0");
    if (!(r > 0.0)) throw Error(Error::Code::InvalidParams, "r must be > 0");
    if (!(omega_max > 0.0))
      throw Error(Error::Code::InvalidParams, "omega_max must be > 0");
  }
};

/// Vehicle pose plus laser orientation. Angles are reported wrapped to [0, 2pi).
struct State {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  ///< vehicle heading
  double psi = 0.0;    ///< laser orientation

  Vec2 pos() const { return {x, y}; }

  State normalized() const { return {x, y, wrap_two_pi(theta), wrap_two_pi(psi)}; }
};

/// One control sample: vehicle turn input u in [-1, 1], laser rate in [-omega_max, omega_max].
struct ControlSample {
  double u = 0.0;
  double omega = 0.0;
};

enum class SegKind { LeftArc, RightArc, Straight };

/// Vehicle turn input implied by a segment kind (left = +1, right = -1, straight = 0).
constexpr double turn_input(SegKind k) {
  return k == SegKind::LeftArc ? 1.0 : (k == SegKind::RightArc ? -1.0 : 0.0);
}

constexpr char segment_letter(SegKind k) {
  return k == SegKind::LeftArc ? 'L' : (k == SegKind::RightArc ? 'R' : 'S');
}

std::optional<SegKind> segment_from_letter(char c);

/// A constant-control piece of the pose trajectory. Zero durations are legal
/// but dropped from canonical plans.
struct PoseSegment {
  SegKind kind = SegKind::Straight;
  double duration = 0.0;
  State start_state;
};

/// Laser turn direction. '+' is clockwise (psi decreasing), '-' anticlockwise.
enum class LaserSense { Clockwise, CounterClockwise };

constexpr char sense_symbol(LaserSense s) {
  return s == LaserSense::Clockwise ? '+' : '-';
}

std::optional<LaserSense> sense_from_symbol(char c);

/// Signed laser rate once switched on: clockwise runs at -omega_max.
constexpr double laser_rate(LaserSense s, const SystemParams& p) {
  return s == LaserSense::Clockwise ? -p.omega_max : p.omega_max;
}

/// One-shot laser schedule: off until t_switch_on, then turning at the full
/// rate in the scheduled direction until the end of the trajectory.
struct LaserSchedule {
  LaserSense sense = LaserSense::Clockwise;
  double t_switch_on = 0.0;
};

/**
 * Label of a candidate trajectory family: a pose word over {L, R, S} of
 * length 1..3 plus the laser sense. Only the 16 admissible combinations
 * validate: three-letter words are limited to {RSR, RSL, LSL, LSR}, and a
 * word ending in L (resp. R) forces sense '-' (resp. '+').
 */
struct CandidateType {
  std::string pose_word;
  LaserSense laser_sense = LaserSense::Clockwise;

  std::string label() const { return pose_word + "|" + sense_symbol(laser_sense); }
  bool valid() const;

  static std::optional<CandidateType> parse(const std::string& label);

  bool operator==(const CandidateType& o) const {
    return pose_word == o.pose_word && laser_sense == o.laser_sense;
  }

  /// Lexicographic order on (pose_word, sense), with '+' before '-'.
  bool operator<(const CandidateType& o) const {
    if (pose_word != o.pose_word) return pose_word < o.pose_word;
    return static_cast<int>(laser_sense) < static_cast<int>(o.laser_sense);
  }
};

/// Diagnostics attached to plans produced by the nonlinear-system solver.
struct RootDiagnostics {
  std::array<double, 4> unknowns{};  // (eta, lambda1, theta_f, c0)
  double residual_norm = 0.0;
  double jacobian_condition = 0.0;
};

/// A fully materialized candidate solution.
struct TrajectoryPlan {
  CandidateType candidate;
  std::vector<PoseSegment> segments;  // zero-duration pieces already dropped
  LaserSchedule laser;
  double t_final = 0.0;  // equals the sum of segment durations
  State final_state;
  std::optional<RootDiagnostics> root;

  /// Pose word actually realized by the (nonzero) segments.
  std::string realized_word() const;
};

/// Sum of segment durations; must equal t_final on a consistent plan.
double total_duration(const TrajectoryPlan& plan);

}  // namespace dublaser
