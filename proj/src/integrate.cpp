#include "gonodyn/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gonodyn/errors.hpp"

namespace gonodyn {

namespace {

using Vec6 = std::array<double, 6>;

Vec6 eval_rhs(const Vec6& y, const ModelParams& p, const Controls& c, double t) {
    const State d = rhs(State::from_array(y), p, c);
    if (!d.all_finite())
        throw NumericError("integration aborted: non-finite derivative at t = " +
                           std::to_string(t));
    return d.to_array();
}

void check_finite(const Vec6& y, double t) {
    for (double v : y)
        if (!std::isfinite(v))
            throw NumericError("integration aborted: non-finite state at t = " +
                               std::to_string(t));
}

/// Sample instants t0 + k*sample_dt plus t_end.
std::vector<double> sample_times(const IntegrationSettings& s) {
    std::vector<double> ts{s.t0};
    const double span = s.t_end - s.t0;
    if (span <= 0.0) return ts;
    const double tiny = 1e-12 * std::max(1.0, std::abs(s.t_end));
    for (long k = 1;; ++k) {
        const double t = s.t0 + static_cast<double>(k) * s.sample_dt;
        if (t >= s.t_end - tiny) break;
        ts.push_back(t);
    }
    ts.push_back(s.t_end);
    return ts;
}

} // namespace

void IntegrationSettings::validate() const {
    if (!(dt > 0.0)) throw ConfigError("integration 'dt' must be > 0");
    if (!(rtol > 0.0)) throw ConfigError("integration 'rtol' must be > 0");
    if (!(atol > 0.0)) throw ConfigError("integration 'atol' must be > 0");
    if (!(sample_dt > 0.0)) throw ConfigError("integration 'sample_dt' must be > 0");
    if (!(max_step > 0.0)) throw ConfigError("integration 'max_step' must be > 0");
    if (!(t_end >= t0)) throw ConfigError("integration 't_end' must be >= 't0'");
    if (!std::isfinite(t0) || !std::isfinite(t_end))
        throw ConfigError("integration horizon must be finite");
}

Trajectory integrate_fixed(const ModelParams& p, const Controls& c, const State& y0,
                           const IntegrationSettings& s) {
    s.validate();
    if (!y0.all_finite()) throw ConfigError("integrate_fixed: non-finite initial state");
    if (!y0.all_nonnegative()) throw ConfigError("integrate_fixed: negative initial state");

    Trajectory traj;
    traj.meta.integrator = "rk4";
    const auto samples = sample_times(s);
    traj.times = samples;
    traj.states.reserve(samples.size());
    traj.states.push_back(y0);

    Vec6 y = y0.to_array();
    const double tiny = 1e-12 * std::max(1.0, std::abs(s.t_end));

    for (std::size_t si = 1; si < samples.size(); ++si) {
        const double t_target = samples[si];
        double t = samples[si - 1];
        while (t < t_target - tiny) {
            double h = s.dt;
            if (t + h >= t_target - tiny) h = t_target - t;

            const Vec6 k1 = eval_rhs(y, p, c, t);
            Vec6 ytmp;
            for (int i = 0; i < 6; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
            const Vec6 k2 = eval_rhs(ytmp, p, c, t);
            for (int i = 0; i < 6; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
            const Vec6 k3 = eval_rhs(ytmp, p, c, t);
            for (int i = 0; i < 6; ++i) ytmp[i] = y[i] + h * k3[i];
            const Vec6 k4 = eval_rhs(ytmp, p, c, t);
            for (int i = 0; i < 6; ++i)
                y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

            t = (h == s.dt) ? t + s.dt : t_target;
            ++traj.meta.accepted;
            check_finite(y, t);
        }
        traj.states.push_back(State::from_array(y));
    }
    return traj;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

} // namespace

Trajectory integrate_adaptive(const ModelParams& p, const Controls& c, const State& y0,
                              const IntegrationSettings& s) {
    s.validate();
    if (!y0.all_finite()) throw ConfigError("integrate_adaptive: non-finite initial state");
    if (!y0.all_nonnegative()) throw ConfigError("integrate_adaptive: negative initial state");

    Trajectory traj;
    traj.meta.integrator = "dopri54";
    const auto samples = sample_times(s);
    traj.times = samples;
    traj.states.reserve(samples.size());
    traj.states.push_back(y0);
    if (samples.size() == 1) return traj;

    constexpr double safety = 0.9;
    constexpr double expo1 = 0.2 - 0.04 * 0.75; // PI error exponent
    constexpr double pi_beta = 0.04;

    Vec6 y = y0.to_array();
    double t = s.t0;
    Vec6 k1 = eval_rhs(y, p, c, t);
    double h = std::min({s.max_step, s.t_end - s.t0, 1e-2});
    double err_old = 1e-4;
    std::size_t next_sample = 1;
    const double tiny = 1e-12 * std::max(1.0, std::abs(s.t_end));

    while (t < s.t_end - tiny) {
        h = std::min({h, s.max_step, s.t_end - t});
        if (h < 1e-14)
            throw NumericError("integrate_adaptive: step size underflow at t = " +
                               std::to_string(t));

        Vec6 k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
        for (int i = 0; i < 6; ++i) ytmp[i] = y[i] + h * A21 * k1[i];
        k2 = eval_rhs(ytmp, p, c, t);
        for (int i = 0; i < 6; ++i) ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        k3 = eval_rhs(ytmp, p, c, t);
        for (int i = 0; i < 6; ++i)
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        k4 = eval_rhs(ytmp, p, c, t);
        for (int i = 0; i < 6; ++i)
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        k5 = eval_rhs(ytmp, p, c, t);
        for (int i = 0; i < 6; ++i)
            ytmp[i] = y[i] +
                      h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        k6 = eval_rhs(ytmp, p, c, t);
        for (int i = 0; i < 6; ++i)
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        k7 = eval_rhs(ynew, p, c, t + h); // FSAL stage
        for (int i = 0; i < 6; ++i)
            yerr[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                           E7 * k7[i]);

        double err = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double scale = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(yerr[i]) / scale);
        }

        bool negative = false;
        for (int i = 0; i < 6; ++i)
            if (ynew[i] < -s.atol) negative = true;

        if (err <= 1.0 && !negative) {
            const double t_new = t + h;
            // Dense output: cubic Hermite over the accepted step.
            while (next_sample < samples.size() && samples[next_sample] <= t_new + tiny) {
                const double ts = samples[next_sample];
                if (ts >= t_new - tiny) {
                    traj.states.push_back(State::from_array(ynew));
                } else {
                    const double th = (ts - t) / h;
                    const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
                    const double h10 = th * (1.0 - th) * (1.0 - th);
                    const double h01 = th * th * (3.0 - 2.0 * th);
                    const double h11 = th * th * (th - 1.0);
                    Vec6 yi;
                    for (int i = 0; i < 6; ++i)
                        yi[i] = h00 * y[i] + h10 * h * k1[i] + h01 * ynew[i] + h11 * h * k7[i];
                    traj.states.push_back(State::from_array(yi));
                }
                ++next_sample;
            }
            t = t_new;
            y = ynew;
            k1 = k7;
            ++traj.meta.accepted;
            check_finite(y, t);

            const double err_clamped = std::max(err, 1e-16);
            double factor = safety * std::pow(err_clamped, -expo1) * std::pow(err_old, pi_beta);
            factor = std::clamp(factor, 0.2, 5.0);
            h *= factor;
            err_old = std::max(err_clamped, 1e-4);
        } else {
            ++traj.meta.rejected;
            if (negative && err <= 1.0) {
                h *= 0.5;
            } else {
                double factor = safety * std::pow(std::max(err, 1e-16), -expo1);
                h *= std::clamp(factor, 0.2, 0.9);
            }
        }
    }

    // t_end sample is emitted inside the loop when the final step lands on it.
    if (traj.states.size() != traj.times.size())
        throw NumericError("integrate_adaptive: internal sampling inconsistency");
    return traj;
}

} // namespace gonodyn
