#include "gonodyn/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gonodyn/errors.hpp"

namespace gonodyn {

const char* to_string(EquilibriumClass c) {
    switch (c) {
        case EquilibriumClass::disease_free: return "disease-free";
        case EquilibriumClass::endemic: return "endemic";
        default: return "boundary";
    }
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "marginal";
    }
}

State dfe_paper(const ModelParams& p) {
    const double mq = p.mu + p.upsilon;
    const double tm = p.theta + p.mu;
    if (mq <= 0.0) throw ConfigError("dfe_paper: mu + upsilon must be positive");
    if (tm <= 0.0) throw ConfigError("dfe_paper: theta + mu must be positive");
    State e;
    e.Q = p.f * p.sigma / mq;
    e.S = (p.upsilon * p.f * p.sigma + mq * (1.0 - p.f) * p.sigma) / (mq * tm);
    return e;
}

State endemic_paper(const ModelParams& p) {
    const double mq = p.mu + p.upsilon;
    const double mr = p.mu + p.delta;
    const double mt = p.mu + p.omega;
    const double ml = p.mu + p.beta + p.eta;
    const double mi = p.mu + p.alpha + p.gamma;
    if (mq <= 0.0 || mr <= 0.0 || mt <= 0.0 || ml <= 0.0 || mi <= 0.0)
        throw ConfigError("endemic_paper: zero denominator in closed form");

    State e;
    e.Q = p.f * p.sigma / mq;
    e.S = (mr * mt * p.f * p.sigma + mq * mr * mt * p.sigma * (1.0 - p.f) +
           mq * p.delta * p.omega * (p.alpha + p.eta)) /
          (mq * mr * mt);
    e.L = (p.lambda * mr * mt * p.f * p.sigma + mq * mr * mt * p.sigma * (1.0 - p.f) +
           mq * p.delta * p.omega * (p.alpha + p.eta)) /
          (ml * mq * mr * mt);
    e.I = (mr * mt * p.f * p.sigma + mq * mr * mt * p.sigma * (1.0 - p.f) +
           mq * p.delta * p.omega * (p.alpha + p.eta) * (p.beta * p.lambda + ml * p.theta)) /
          (mi * ml * mq * mr * mt);
    e.R = p.omega * (p.alpha + p.eta) / (mr * mt);
    e.T = (p.alpha + p.eta) / mt;
    return e;
}

State residual(const State& y, const ModelParams& p, const Controls& c) {
    return rhs(y, p, c);
}

namespace {

linalg::Matrix fd_jacobian(const SystemFn& f, const std::array<double, 6>& x) {
    linalg::Matrix J(6);
    const auto f0 = f(x);
    for (int j = 0; j < 6; ++j) {
        auto pert = x;
        const double h = std::max(1e-7, 1e-7 * std::abs(x[static_cast<std::size_t>(j)]));
        pert[static_cast<std::size_t>(j)] += h;
        const auto f1 = f(pert);
        for (int i = 0; i < 6; ++i)
            J(i, j) = (f1[static_cast<std::size_t>(i)] - f0[static_cast<std::size_t>(i)]) / h;
    }
    return J;
}

double max_norm(const std::array<double, 6>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool finite6(const std::array<double, 6>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

EquilibriumClass classify(const State& y) {
    const double scale = 1e-9 * std::max(1.0, total_population(y));
    const double infected = std::max({std::abs(y.L), std::abs(y.I), std::abs(y.R), std::abs(y.T)});
    if (infected < scale) return EquilibriumClass::disease_free;
    if (y.I > scale) return EquilibriumClass::endemic;
    return EquilibriumClass::boundary;
}

} // namespace

linalg::Matrix numerical_jacobian(const State& y, const ModelParams& p, const Controls& c) {
    const SystemFn f = [&](const std::array<double, 6>& x) {
        return rhs(State::from_array(x), p, c).to_array();
    };
    return fd_jacobian(f, y.to_array());
}

NewtonResult newton_solve(const SystemFn& f, const std::array<double, 6>& guess, double tol,
                          int max_iter) {
    if (!finite6(guess)) throw ConfigError("newton_solve: non-finite guess");
    if (!(tol > 0.0)) throw ConfigError("newton_solve: tol must be positive");

    NewtonResult res;
    res.x = guess;
    auto r = f(res.x);
    double rn = max_norm(r);
    res.residual_history.push_back(rn);

    while (rn >= tol && res.iterations < max_iter) {
        const linalg::Matrix J = fd_jacobian(f, res.x);
        std::vector<double> neg_r(6);
        for (int i = 0; i < 6; ++i)
            neg_r[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
        const auto step = linalg::lu_solve(J, neg_r);

        double damp = 1.0;
        bool improved = false;
        for (int halving = 0; halving <= 20; ++halving) {
            auto cand = res.x;
            for (int i = 0; i < 6; ++i)
                cand[static_cast<std::size_t>(i)] += damp * step[static_cast<std::size_t>(i)];
            if (finite6(cand)) {
                const auto rc = f(cand);
                const double rcn = max_norm(rc);
                if (rcn < rn) {
                    res.x = cand;
                    r = rc;
                    rn = rcn;
                    improved = true;
                    break;
                }
            }
            damp *= 0.5;
        }
        ++res.iterations;
        if (!improved) break; // stalled; reported non-converged
        res.residual_history.push_back(rn);
    }

    res.residual_norm = rn;
    res.converged = rn < tol;
    return res;
}

EquilibriumReport solve_steady_state(const ModelParams& p, const Controls& c, const State& guess,
                                     double tol, int max_iter) {
    const SystemFn f = [&](const std::array<double, 6>& x) {
        return rhs(State::from_array(x), p, c).to_array();
    };
    const NewtonResult nr = newton_solve(f, guess.to_array(), tol, max_iter);

    EquilibriumReport rep;
    rep.state = State::from_array(nr.x);
    rep.residual_norm = nr.residual_norm;
    rep.iterations = nr.iterations;
    rep.converged = nr.converged;
    rep.residual_history = nr.residual_history;
    rep.classification = classify(rep.state);
    if (rep.converged) {
        const linalg::Matrix J = numerical_jacobian(rep.state, p, c);
        rep.spectral_abscissa = linalg::spectral_abscissa(J);
        const double margin = 1e-8;
        if (rep.spectral_abscissa < -margin)
            rep.stable = Stability::stable;
        else if (rep.spectral_abscissa > margin)
            rep.stable = Stability::unstable;
        else
            rep.stable = Stability::marginal;
    }
    return rep;
}

} // namespace gonodyn
