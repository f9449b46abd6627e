#include "motrans/replay.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "motrans/errors.hpp"
#include "motrans/io.hpp"

namespace motrans {

namespace {

constexpr double kPositionLimitM = 10.0;

}  // namespace

void validate(const ControllerParams& params) {
    if (!(params.ts > 0.0) || !(params.ts <= 1e-3))
        throw InvalidParams("control period must be in (0, 1e-3] s");
    if (!(params.kp > 0.0) || !(params.kd > 0.0) || !(params.g_pd > 0.0) ||
        !(params.g_f > 0.0))
        throw InvalidParams("controller gains and poles must be positive");
}

void validate(const PlantState& state) {
    if (!(state.mass > 0.0)) throw InvalidParams("plant mass must be positive");
    if (!(state.friction >= 0.0)) throw InvalidParams("plant friction must be >= 0");
    for (double v : state.position)
        if (!std::isfinite(v)) throw InvalidParams("plant position must be finite");
    for (double v : state.velocity)
        if (!std::isfinite(v)) throw InvalidParams("plant velocity must be finite");
}

void plant_step(PlantState& state, const std::array<double, 3>& accel_cmd, double ts) {
    const double drag = state.friction / state.mass;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        state.velocity[axis] += ts * (accel_cmd[axis] - drag * state.velocity[axis]);
        state.position[axis] += ts * state.velocity[axis];
    }
}

double lowpass(double input, LowpassState& state, double pole_rad_s, double ts) {
    if (!(pole_rad_s > 0.0)) throw InvalidParams("low-pass pole must be positive");
    const double a = pole_rad_s * ts;
    state.y = (state.y + a * input) / (1.0 + a);
    return state.y;
}

double pseudo_derivative(double input, PseudoDerivativeState& state,
                         const ControllerParams& params) {
    // g s/(s+g) realized as g (x - lag), where lag is the backward-Euler
    // low-pass of x at pole g.
    const double a = params.g_pd * params.ts;
    state.lag = (state.lag + a * input) / (1.0 + a);
    return params.g_pd * (input - state.lag);
}

double pd_control(double position_ref, double position, double velocity_est,
                  double velocity_ref_est, const ControllerParams& params) {
    return params.kp * (position_ref - position) +
           params.kd * (velocity_ref_est - velocity_est);
}

ReplayReport replay(const MotionTrajectory& leader, const ControllerParams& params,
                    PlantState initial) {
    validate(params);
    validate(initial);

    const double sample_dt = 1.0 / leader.rate_hz();
    const double steps_per_sample_f = sample_dt / params.ts;
    const std::size_t steps_per_sample =
        static_cast<std::size_t>(std::llround(steps_per_sample_f));
    if (steps_per_sample < 1 ||
        std::abs(steps_per_sample_f - static_cast<double>(steps_per_sample)) > 1e-6)
        throw InvalidParams("control period must divide the leader sample period");

    PlantState plant = initial;
    std::array<PseudoDerivativeState, 3> ref_vel_filter{};
    std::array<PseudoDerivativeState, 3> plant_vel_filter{};
    std::array<LowpassState, 3> force_filter{};

    std::vector<MotionSample> follower_samples;
    follower_samples.reserve(leader.size());

    std::array<double, 3> sum_sq_error{};
    std::array<double, 3> max_error{};
    std::size_t error_count = 0;
    std::size_t control_step = 0;

    auto log_sample = [&](std::size_t leader_idx) {
        MotionSample s;
        s.t = leader[leader_idx].t;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            s.ch[axis] = plant.position[axis];
            s.ch[3 + axis] = force_filter[axis].y;
        }
        follower_samples.push_back(s);
    };

    log_sample(0);
    for (std::size_t k = 0; k + 1 < leader.size(); ++k) {
        const MotionSample& held = leader[k];
        for (std::size_t sub = 0; sub < steps_per_sample; ++sub) {
            ++control_step;
            std::array<double, 3> accel{};
            for (std::size_t axis = 0; axis < 3; ++axis) {
                const double ref = held.ch[axis];
                const double vref =
                    pseudo_derivative(ref, ref_vel_filter[axis], params);
                const double vel = pseudo_derivative(plant.position[axis],
                                                     plant_vel_filter[axis], params);
                accel[axis] = pd_control(ref, plant.position[axis], vel, vref, params);
                lowpass(held.ch[3 + axis], force_filter[axis], params.g_f, params.ts);
            }
            plant_step(plant, accel, params.ts);

            ++error_count;
            for (std::size_t axis = 0; axis < 3; ++axis) {
                const double err = std::abs(held.ch[axis] - plant.position[axis]);
                sum_sq_error[axis] += err * err;
                max_error[axis] = std::max(max_error[axis], err);
                if (std::abs(plant.position[axis]) > kPositionLimitM ||
                    !std::isfinite(plant.position[axis]))
                    throw UnstableSimulation(control_step, plant.position[axis]);
            }
        }
        log_sample(k + 1);
    }

    ReplayReport report{
        MotionTrajectory(std::move(follower_samples), leader.rate_hz()), {}, {}};
    for (std::size_t axis = 0; axis < 3; ++axis) {
        report.rms_error_m[axis] =
            std::sqrt(sum_sq_error[axis] / static_cast<double>(error_count));
        report.max_error_m[axis] = max_error[axis];
    }
    return report;
}

void save_replay_report(const ReplayReport& report, const std::filesystem::path& path) {
    static constexpr const char* axes[] = {"x", "y", "z"};
    std::string out;
    for (std::size_t axis = 0; axis < 3; ++axis)
        out += std::string("rms_") + axes[axis] + "_m=" +
               format_g12(report.rms_error_m[axis]) + "\n";
    for (std::size_t axis = 0; axis < 3; ++axis)
        out += std::string("max_") + axes[axis] + "_m=" +
               format_g12(report.max_error_m[axis]) + "\n";
    write_text_file_atomic(path, out);
}

}  // namespace motrans
