#pragma once

#include <array>
#include <cstddef>
#include <filesystem>

#include "motrans/motion.hpp"

namespace motrans {

/// Motion-copying follower controller: PD gains, pseudo-derivative pole and
/// force low-pass pole, all running at control period ts.
struct ControllerParams {
    double ts = 1e-4;    // control period [s]
    double kp = 1200.0;  // P gain
    double kd = 70.0;    // D gain
    double g_pd = 40.0;  // pseudo-derivative pole [rad/s]
    double g_f = 20.0;   // force low-pass pole [rad/s]
};

/// All parameters strictly positive, ts <= 1e-3; throws InvalidParams.
void validate(const ControllerParams& params);

/// Decoupled per-axis point mass with viscous friction; a stand-in plant for
/// the follower robot.
struct PlantState {
    std::array<double, 3> position{};  // [m]
    std::array<double, 3> velocity{};  // [m/s]
    double mass = 1.0;                 // [kg]
    double friction = 5.0;             // [N s/m]
};

void validate(const PlantState& state);

/// Semi-implicit Euler step under commanded acceleration `accel_cmd`:
/// v += ts (u - (c/m) v), then p += ts v.
void plant_step(PlantState& state, const std::array<double, 3>& accel_cmd, double ts);

/// One-pole low-pass g/(s+g), backward-Euler discretized; unit DC gain.
struct LowpassState {
    double y = 0.0;
};
double lowpass(double input, LowpassState& state, double pole_rad_s, double ts);

/// Band-limited differentiator g s/(s+g): derivative estimate that decays to
/// zero on constant inputs.
struct PseudoDerivativeState {
    double lag = 0.0;
};
double pseudo_derivative(double input, PseudoDerivativeState& state,
                         const ControllerParams& params);

/// u = kp (ref - pos) + kd (vref - vel). Returns commanded acceleration.
double pd_control(double position_ref, double position, double velocity_est,
                  double velocity_ref_est, const ControllerParams& params);

/// Result of replaying a saved leader trajectory on the simulated follower.
/// `follower` is logged at the leader's rate: plant positions in x/y/z and
/// the low-pass-filtered leader force in fx/fy/fz (the filtered force trace).
struct ReplayReport {
    MotionTrajectory follower;
    std::array<double, 3> rms_error_m{};
    std::array<double, 3> max_error_m{};
};

/// Steps the PD-controlled plant at params.ts against the zero-order-held
/// leader reference, logging at the leader rate. Throws UnstableSimulation
/// if any |position| exceeds 10 m.
ReplayReport replay(const MotionTrajectory& leader, const ControllerParams& params,
                    PlantState initial);

/// `rms_x_m=...` style key=value metrics report.
void save_replay_report(const ReplayReport& report, const std::filesystem::path& path);

}  // namespace motrans
