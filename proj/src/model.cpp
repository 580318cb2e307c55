#include "gonodyn/model.hpp"

#include <cmath>
#include <string>

#include "gonodyn/errors.hpp"

namespace gonodyn {

namespace {

void check_rate(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw ConfigError(std::string("parameter '") + name +
                          "' must be a finite nonnegative rate, got " + std::to_string(v));
}

} // namespace

void ModelParams::validate() const {
    check_rate(sigma, "sigma");
    check_rate(upsilon, "upsilon");
    check_rate(mu, "mu");
    check_rate(lambda, "lambda");
    check_rate(eta, "eta");
    check_rate(gamma, "gamma");
    check_rate(alpha, "alpha");
    check_rate(beta, "beta");
    check_rate(omega, "omega");
    check_rate(delta, "delta");
    check_rate(theta, "theta");
    if (!std::isfinite(f) || f < 0.0 || f > 1.0)
        throw ConfigError("parameter 'f' must lie in [0,1], got " + std::to_string(f));
}

void Controls::validate() const {
    if (!std::isfinite(k1) || k1 < 0.0)
        throw ConfigError("control 'k1' must be finite and >= 0, got " + std::to_string(k1));
    if (!std::isfinite(k2) || k2 < 0.0 || k2 > 1.0)
        throw ConfigError("control 'k2' must lie in [0,1], got " + std::to_string(k2));
}

bool State::all_finite() const {
    for (double v : to_array())
        if (!std::isfinite(v)) return false;
    return true;
}

bool State::all_nonnegative() const {
    for (double v : to_array())
        if (v < 0.0) return false;
    return true;
}

DerivedRates aggregate_rates(const ModelParams& p, const Controls& c) {
    DerivedRates r;
    r.aQ = p.mu + p.upsilon;
    r.aL = p.mu + p.beta + p.eta * (1.0 + c.k1);
    r.aI = p.mu + p.gamma + p.alpha * (1.0 + c.k2);
    r.aR = p.mu + p.delta;
    r.aT = p.mu + p.omega;
    return r;
}

State rhs(const State& y, const ModelParams& p, const Controls& c) {
    if (!y.all_finite())
        throw NumericError("rhs: non-finite state component");

    // Inter-compartment flows, each computed once so the pair of occurrences
    // cancels exactly in the population balance.
    const double recruit_Q = p.f * p.sigma;
    const double recruit_S = (1.0 - p.f) * p.sigma;
    const double wane_QS   = p.upsilon * y.Q;
    const double infect_SL = p.theta * y.S * y.I;
    const double direct_SI = p.theta * y.S * (1.0 - c.k2);
    const double relapse_RS = p.delta * y.R;
    const double prog_LI   = p.beta * y.L;
    const double treat_LT  = p.eta * (1.0 + c.k1) * y.L;
    const double treat_IT  = p.alpha * (1.0 + c.k2) * y.I;
    const double recover_TR = p.omega * y.T;

    State d;
    d.Q = recruit_Q - wane_QS - p.mu * y.Q;
    d.S = wane_QS + recruit_S - direct_SI + relapse_RS - p.mu * y.S - infect_SL;
    d.L = infect_SL - prog_LI - p.mu * y.L - treat_LT;
    d.I = prog_LI + direct_SI - (p.mu + p.gamma) * y.I - treat_IT;
    d.R = recover_TR - p.mu * y.R - relapse_RS;
    d.T = treat_LT + treat_IT - p.mu * y.T - recover_TR;
    return d;
}

double total_population(const State& y) {
    return y.Q + y.S + y.L + y.I + y.R + y.T;
}

double force_of_infection(const State& y, const ModelParams& p) {
    return p.theta * y.I;
}

} // namespace gonodyn
