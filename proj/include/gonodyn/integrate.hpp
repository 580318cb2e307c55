#ifndef GONODYN_INTEGRATE_HPP
#define GONODYN_INTEGRATE_HPP

#include <string>
#include <vector>

#include "gonodyn/model.hpp"

namespace gonodyn {

struct IntegrationSettings {
    double dt = 0.01;        ///< fixed RK4 step (years)
    double rtol = 1e-8;      ///< adaptive relative tolerance
    double atol = 1e-10;     ///< adaptive absolute tolerance
    double t0 = 0.0;
    double t_end = 10.0;
    double sample_dt = 0.05; ///< output sampling interval
    double max_step = 0.1;   ///< adaptive step clamp; bounds dense-output error

    /// Throws ConfigError on dt/rtol/atol/sample_dt/max_step <= 0 or t_end < t0.
    void validate() const;
};

struct StepStats {
    std::string integrator;
    long accepted = 0;
    long rejected = 0;
};

struct Trajectory {
    std::vector<double> times;  ///< strictly increasing, first == t0
    std::vector<State> states;  ///< aligned with times, first == y0 exactly
    StepStats meta;
};

/// Classical fixed-step RK4. Steps land exactly on every sample instant and
/// on t_end (last partial step shortened). Aborts with NumericError naming
/// the failing time if the state becomes non-finite.
Trajectory integrate_fixed(const ModelParams& p, const Controls& c, const State& y0,
                           const IntegrationSettings& s);

/// Embedded Dormand-Prince 5(4) with PI step control (safety 0.9, growth
/// clamp [0.2, 5]) and cubic Hermite dense output at the sample instants.
/// Steps whose state dips below -atol are rejected and retried; step
/// underflow (h < 1e-14) aborts with a diagnostic.
Trajectory integrate_adaptive(const ModelParams& p, const Controls& c, const State& y0,
                              const IntegrationSettings& s);

} // namespace gonodyn

#endif
