// Coupled neuron / astrocyte / gliotransmitter dynamics and the
// astrocyte-modulated synaptic efficacy laws.
//
// All three state equations are linear leaks toward a (piecewise-constant)
// drive, so each step uses the exponential-Euler update
//
//     x <- x_inf + (x - x_inf) * exp(-dt / tau_eff)
//
// which is the exact solution over the step. Time is in milliseconds and
// rates are in 1/ms throughout; Hz values at the API boundary are converted
// with hz_to_per_ms()/per_ms_to_hz().
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lifa/error.hpp"

namespace lifa {

constexpr double hz_to_per_ms(double hz) { return hz / 1000.0; }
constexpr double per_ms_to_hz(double per_ms) { return per_ms * 1000.0; }

// Threshold values are clamped above this floor; a non-positive threshold
// would make every neuron fire unconditionally.
constexpr double kThresholdFloor = 1e-9;

constexpr std::int64_t kNeverSpiked = -1;

struct NeuronParams {
    double tau_n = 10.0;     // membrane time constant, ms
    double v_th_base = 1.0;  // baseline firing threshold
    double v_spk = 2.0;      // spike output level, propagated to targets
    double v_idle = 0.0;     // idle/reset level
    int refractory = 0;      // refractory period, steps

    void validate() const {
        if (!(tau_n > 0.0)) throw ConfigError("neuron tau_n must be > 0");
        if (!(v_spk > v_th_base && v_th_base > v_idle))
            throw ConfigError("neuron levels must satisfy v_spk > v_th_base > v_idle");
        if (refractory < 0) throw ConfigError("neuron refractory must be >= 0");
    }
};

struct NeuronState {
    double v_n = 0.0;   // membrane activity
    double v_th = 1.0;  // current threshold (starts at v_th_base)
    int refractory_left = 0;
    std::int64_t last_spike_step = kNeverSpiked;
};

struct AstrocyteParams {
    double tau_ca = 100.0;      // calcium time constant, ms
    double tau_glio = 50.0;     // gliotransmitter/receptor time constant, ms
    double release_gain = 2.0;  // gain on the release term of the glio ODE
    double binding_gain = 0.02; // postsynaptic receptor binding gain, 1/ms
    double base_activation = 0.5;  // baseline postsynaptic activation
    double astro_gain = 1.0;       // astrocyte contribution to activation
    double release_scale = 1.0;    // presynaptic release scale (constant)
    double ca_threshold = 0.0;     // calcium level gating gliotransmitter release

    void validate() const {
        if (!(tau_ca > 0.0) || !(tau_glio > 0.0))
            throw ConfigError("astrocyte time constants must be > 0");
        if (base_activation < 0.0 || astro_gain < 0.0 || release_scale < 0.0 ||
            release_gain < 0.0 || binding_gain < 0.0)
            throw ConfigError("astrocyte gains must be >= 0");
    }
};

struct AstrocyteState {
    double ca = 0.0;              // calcium activity
    double glio = 0.0;            // gliotransmitter availability, in [0, 1]
    double bound_fraction = 0.0;  // extrasynaptic receptor occupancy, in [0, 1]
};

// Per-step external drive for a full network step. Array lengths must match
// the network's neuron and astrocyte counts.
struct StepInputs {
    std::vector<double> neuron_input;
    std::vector<double> astro_input;
    std::vector<double> release_rate;  // gliotransmitter release drive, 1/ms
};

namespace detail {

inline void check_finite(double value, const char* label, std::int64_t index) {
    if (!std::isfinite(value))
        throw IntegrationError(std::string("non-finite ") + label, index);
}

inline void check_dt(double dt, double tau, const char* label) {
    if (!(dt > 0.0)) throw ContractError("dt must be > 0");
    if (dt > tau) throw ContractError(std::string("dt must not exceed ") + label);
}

// Exact solution of tau * dx/dt = -a*x + b over one step of length dt,
// written as decay toward the fixed point b/a with time constant tau/a.
inline double leak_step(double x, double a, double b, double tau, double dt) {
    const double x_inf = b / a;
    return x_inf + (x - x_inf) * std::exp(-dt * a / tau);
}

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

} // namespace detail

struct NeuronStepResult {
    NeuronState state;
    bool spiked = false;
};

// One step of the membrane equation with classic threshold-and-reset spiking.
// The threshold test runs on the incoming state: a neuron at or above its
// threshold (and out of refractory) fires, resets to v_idle and skips
// integration for the step. During refractory the membrane holds its value.
inline NeuronStepResult step_neuron(NeuronState state, const NeuronParams& params,
                                    double i_n, double dt, std::int64_t index = -1) {
    detail::check_finite(state.v_n, "membrane state", index);
    detail::check_finite(state.v_th, "threshold state", index);
    detail::check_finite(i_n, "neuron input", index);
    detail::check_dt(dt, params.tau_n, "tau_n");
    if (state.refractory_left < 0) throw ContractError("refractory_left must be >= 0");

    if (state.v_th < kThresholdFloor) state.v_th = kThresholdFloor;

    if (state.refractory_left > 0) {
        --state.refractory_left;
        return {state, false};
    }
    if (state.v_n >= state.v_th) {
        state.v_n = params.v_idle;
        state.refractory_left = params.refractory;
        return {state, true};
    }
    state.v_n = i_n + (state.v_n - i_n) * std::exp(-dt / params.tau_n);
    return {state, false};
}

// One step of the calcium equation: a plain leak toward the input.
inline AstrocyteState step_astrocyte(AstrocyteState state, const AstrocyteParams& params,
                                     double i_g, double dt, std::int64_t index = -1) {
    detail::check_finite(state.ca, "calcium state", index);
    detail::check_finite(i_g, "astrocyte input", index);
    detail::check_dt(dt, params.tau_ca, "tau_ca");
    state.ca = i_g + (state.ca - i_g) * std::exp(-dt / params.tau_ca);
    return state;
}

// One step of the gliotransmitter equation
//     tau_glio * dg/dt = -g + release_gain * (1 - g) * r
// where the release drive r is forced to zero while calcium sits below
// ca_threshold. The update is exact for constant r and keeps g in [0, 1].
inline AstrocyteState step_gliotransmitter(AstrocyteState state, const AstrocyteParams& params,
                                           double release_rate, double dt, std::int64_t index = -1) {
    detail::check_finite(state.glio, "gliotransmitter state", index);
    detail::check_finite(release_rate, "release rate", index);
    if (release_rate < 0.0) throw ContractError("release rate must be >= 0");
    detail::check_dt(dt, params.tau_glio, "tau_glio");

    const double r = state.ca >= params.ca_threshold ? release_rate : 0.0;
    const double k = params.release_gain * r;
    state.glio = detail::clamp01(detail::leak_step(state.glio, 1.0 + k, k, params.tau_glio, dt));
    return state;
}

// One step of the extrasynaptic receptor occupancy
//     tau_glio * dgamma/dt = -gamma + binding_gain * (1 - gamma) * g * tau_glio.
inline AstrocyteState step_receptor(AstrocyteState state, const AstrocyteParams& params,
                                    double dt, std::int64_t index = -1) {
    detail::check_finite(state.bound_fraction, "receptor state", index);
    detail::check_finite(state.glio, "gliotransmitter state", index);
    if (state.bound_fraction < 0.0 || state.bound_fraction > 1.0)
        throw ContractError("receptor occupancy must be in [0, 1]");
    detail::check_dt(dt, params.tau_glio, "tau_glio");

    const double k = params.binding_gain * state.glio * params.tau_glio;
    state.bound_fraction =
        detail::clamp01(detail::leak_step(state.bound_fraction, 1.0 + k, k, params.tau_glio, dt));
    return state;
}

// Main efficacy law: weights scale with postsynaptic activation
// base_activation + astro_gain * g, normalized so g = 0 preserves the base
// weight. Callers pass g = 0 (or skip the call) for uncovered neurons.
inline double effective_weight(double base_weight, const AstrocyteParams& params, double glio) {
    if (glio < 0.0 || glio > 1.0) throw ContractError("gliotransmitter level must be in [0, 1]");
    detail::check_finite(base_weight, "base weight", -1);
    if (params.astro_gain == 0.0) return base_weight;
    if (params.release_scale * params.base_activation == 0.0)
        throw ConfigError("efficacy law undefined: release_scale * base_activation = 0 with astro_gain > 0");
    return base_weight * ((params.base_activation + params.astro_gain * glio) / params.base_activation);
}

// Alternative efficacy law: a direct pathway component plus an indirect
// pathway driven by the receptor occupancy rate of change.
inline double indirect_pathway_weight(double direct_weight, double indirect_gain,
                                      double receptor_rate, double tau_glio) {
    if (!(tau_glio > 0.0)) throw ContractError("tau_glio must be > 0");
    detail::check_finite(direct_weight, "direct weight", -1);
    detail::check_finite(receptor_rate, "receptor rate", -1);
    if (indirect_gain == 0.0) return direct_weight;
    return direct_weight + (indirect_gain / tau_glio) * receptor_rate;
}

// Backward difference of the receptor occupancy, 1/ms; the rate input for
// indirect_pathway_weight.
inline double receptor_rate_of_change(double bound_before, double bound_after, double dt) {
    if (!(dt > 0.0)) throw ContractError("dt must be > 0");
    return (bound_after - bound_before) / dt;
}

} // namespace lifa
