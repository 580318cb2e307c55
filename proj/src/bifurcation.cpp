#include "gonodyn/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gonodyn/equilibria.hpp"
#include "gonodyn/errors.hpp"

namespace gonodyn {

double psi_critical(const ModelParams& p, const Controls& c) {
    if (p.beta <= 0.0)
        throw ConfigError("psi_critical: beta must be positive");
    return aggregate_rates(p, c).aI / p.beta;
}

double psi_jacobian_critical(const ModelParams& p, const Controls& c) {
    if (p.beta <= 0.0)
        throw ConfigError("psi_jacobian_critical: beta must be positive");
    const DerivedRates a = aggregate_rates(p, c);
    return a.aL * a.aI / p.beta;
}

State rhs_psi(const State& y, const ModelParams& p, const Controls& c, double psi) {
    if (!y.all_finite())
        throw NumericError("rhs_psi: non-finite state component");
    const DerivedRates a = aggregate_rates(p, c);
    State d;
    d.Q = p.f * p.sigma - a.aQ * y.Q;
    d.S = (1.0 - p.f) * p.sigma + p.upsilon * y.Q + p.delta * y.R - psi * (1.0 - c.k2) -
          psi * y.I - p.mu * y.S;
    d.L = psi * y.I - a.aL * y.L;
    d.I = p.beta * y.L + psi * (1.0 - c.k2) - a.aI * y.I;
    d.R = p.omega * y.T - a.aR * y.R;
    d.T = p.eta * (1.0 + c.k1) * y.L + p.alpha * (1.0 + c.k2) * y.I - a.aT * y.T;
    return d;
}

linalg::Matrix jacobian_psi(const ModelParams& p, const Controls& c, double psi) {
    const DerivedRates a = aggregate_rates(p, c);
    linalg::Matrix J(6);
    J(0, 0) = -a.aQ;
    J(1, 0) = p.upsilon;
    J(1, 1) = -p.mu;
    J(1, 3) = -psi;
    J(1, 4) = p.delta;
    J(2, 2) = -a.aL;
    J(2, 3) = psi;
    J(3, 2) = p.beta;
    J(3, 3) = -a.aI;
    J(4, 4) = -a.aR;
    J(4, 5) = p.omega;
    J(5, 2) = p.eta * (1.0 + c.k1);
    J(5, 3) = p.alpha * (1.0 + c.k2);
    J(5, 5) = -a.aT;
    return J;
}

BifurcationSetup make_bifurcation_setup(const ModelParams& p, const Controls& c) {
    BifurcationSetup s;
    s.psi_star = psi_critical(p, c);
    s.psi_jacobian_critical = psi_jacobian_critical(p, c);
    s.base_point = dfe_paper(p);
    s.fd_step = 1e-4;
    return s;
}

const char* to_string(BifurcationClass c) {
    switch (c) {
        case BifurcationClass::transcritical_forward: return "transcritical-forward";
        case BifurcationClass::backward: return "backward";
        default: return "degenerate";
    }
}

namespace {

using Vec6 = std::array<double, 6>;

// Central second partials at a fixed step; d2f[k][i][j].
SecondPartials hessians_at_step(const VectorField6& f, const Vec6& x, const Vec6& steps) {
    SecondPartials out;
    const auto f0 = f(x);
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
            const double hi = steps[static_cast<std::size_t>(i)];
            const double hj = steps[static_cast<std::size_t>(j)];
            Vec6 d2{};
            if (i == j) {
                auto xp = x, xm = x;
                xp[static_cast<std::size_t>(i)] += hi;
                xm[static_cast<std::size_t>(i)] -= hi;
                const auto fp = f(xp), fm = f(xm);
                for (int k = 0; k < 6; ++k)
                    d2[static_cast<std::size_t>(k)] =
                        (fp[static_cast<std::size_t>(k)] - 2.0 * f0[static_cast<std::size_t>(k)] +
                         fm[static_cast<std::size_t>(k)]) /
                        (hi * hi);
            } else {
                auto xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[static_cast<std::size_t>(i)] += hi; xpp[static_cast<std::size_t>(j)] += hj;
                xpm[static_cast<std::size_t>(i)] += hi; xpm[static_cast<std::size_t>(j)] -= hj;
                xmp[static_cast<std::size_t>(i)] -= hi; xmp[static_cast<std::size_t>(j)] += hj;
                xmm[static_cast<std::size_t>(i)] -= hi; xmm[static_cast<std::size_t>(j)] -= hj;
                const auto fpp = f(xpp), fpm = f(xpm), fmp = f(xmp), fmm = f(xmm);
                for (int k = 0; k < 6; ++k)
                    d2[static_cast<std::size_t>(k)] =
                        (fpp[static_cast<std::size_t>(k)] - fpm[static_cast<std::size_t>(k)] -
                         fmp[static_cast<std::size_t>(k)] + fmm[static_cast<std::size_t>(k)]) /
                        (4.0 * hi * hj);
            }
            for (int k = 0; k < 6; ++k) {
                out.d2[k][i][j] = d2[static_cast<std::size_t>(k)];
                out.d2[k][j][i] = d2[static_cast<std::size_t>(k)];
            }
        }
    }
    return out;
}

} // namespace

SecondPartials fd_hessians(const VectorField6& f, const Vec6& x, double fd_step) {
    if (!(fd_step > 1e-12))
        throw ConfigError("fd_hessians: finite-difference step underflow");
    Vec6 steps, half;
    for (int i = 0; i < 6; ++i) {
        steps[static_cast<std::size_t>(i)] =
            fd_step * std::max(1.0, std::abs(x[static_cast<std::size_t>(i)]));
        half[static_cast<std::size_t>(i)] = 0.5 * steps[static_cast<std::size_t>(i)];
    }
    const SecondPartials d_h = hessians_at_step(f, x, steps);
    const SecondPartials d_h2 = hessians_at_step(f, x, half);
    SecondPartials out;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                out.d2[k][i][j] = (4.0 * d_h2.d2[k][i][j] - d_h.d2[k][i][j]) / 3.0;
    return out;
}

BifurcationReport bifurcation_coefficients(const ModelParams& p, const Controls& c) {
    BifurcationReport rep;
    rep.setup = make_bifurcation_setup(p, c);
    const double psi = rep.setup.psi_jacobian_critical;
    const Vec6 x0 = rep.setup.base_point.to_array();

    const linalg::Matrix J = jacobian_psi(p, c, psi);
    const double tol = 1e-7 * J.inf_norm();
    const auto nv = linalg::null_vectors(J, tol);
    rep.h = nv.right;
    rep.v = nv.left;

    // Pin the expansion direction: infectious component of h nonnegative.
    // Flipping both h and v preserves v.h = 1.
    if (rep.h[3] < 0.0) {
        for (double& x : rep.h) x = -x;
        for (double& x : rep.v) x = -x;
    }

    {
        const auto spec = linalg::eigenvalues(J);
        double zmin = std::numeric_limits<double>::infinity();
        for (const auto& e : spec.values) zmin = std::min(zmin, std::hypot(e.re, e.im));
        rep.zero_eigenvalue = zmin;
    }

    const VectorField6 f_state = [&](const Vec6& x) {
        return rhs_psi(State::from_array(x), p, c, psi).to_array();
    };
    const SecondPartials d2 = fd_hessians(f_state, x0, rep.setup.fd_step);
    double a = 0.0;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                a += rep.v[static_cast<std::size_t>(k)] * rep.h[static_cast<std::size_t>(i)] *
                     rep.h[static_cast<std::size_t>(j)] * d2.d2[k][i][j];
    rep.a = a;

    // d2 f_k / dx_i dpsi by central differences in both arguments, with one
    // Richardson refinement in the state step.
    const double hp = rep.setup.fd_step * std::max(1.0, std::abs(psi));
    const auto dpsi_gradient = [&](double state_step) {
        std::array<std::array<double, 6>, 6> g{};
        for (int i = 0; i < 6; ++i) {
            const double hi = state_step * std::max(1.0, std::abs(x0[static_cast<std::size_t>(i)]));
            auto xp = x0, xm = x0;
            xp[static_cast<std::size_t>(i)] += hi;
            xm[static_cast<std::size_t>(i)] -= hi;
            const auto fpp = rhs_psi(State::from_array(xp), p, c, psi + hp).to_array();
            const auto fpm = rhs_psi(State::from_array(xp), p, c, psi - hp).to_array();
            const auto fmp = rhs_psi(State::from_array(xm), p, c, psi + hp).to_array();
            const auto fmm = rhs_psi(State::from_array(xm), p, c, psi - hp).to_array();
            for (int k = 0; k < 6; ++k)
                g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                    (fpp[static_cast<std::size_t>(k)] - fpm[static_cast<std::size_t>(k)] -
                     fmp[static_cast<std::size_t>(k)] + fmm[static_cast<std::size_t>(k)]) /
                    (4.0 * hi * hp);
        }
        return g;
    };
    const auto g_h = dpsi_gradient(rep.setup.fd_step);
    const auto g_h2 = dpsi_gradient(0.5 * rep.setup.fd_step);
    double b = 0.0;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i) {
            const double gki = (4.0 * g_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] -
                                g_h[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) / 3.0;
            b += rep.v[static_cast<std::size_t>(k)] * rep.h[static_cast<std::size_t>(i)] * gki;
        }
    rep.b = b;

    rep.classification = classify_bifurcation(rep.a, rep.b);
    return rep;
}

BifurcationClass classify_bifurcation(double a, double b) {
    constexpr double tol = 1e-8;
    if (std::abs(a) <= tol || std::abs(b) <= tol) return BifurcationClass::degenerate;
    if (a * b > 0.0) return BifurcationClass::backward;
    return BifurcationClass::transcritical_forward;
}

BifurcationClass classify_bifurcation(const BifurcationReport& r) {
    if (!std::isfinite(r.a) || !std::isfinite(r.b))
        throw NumericError("classify_bifurcation: non-finite coefficients");
    return classify_bifurcation(r.a, r.b);
}

namespace {

std::vector<BranchPoint> sweep_point(const ModelParams& p, const Controls& c, double psi,
                                     std::size_t grid_index) {
    const auto f = [&](const std::array<double, 6>& x) {
        return rhs_psi(State::from_array(x), p, c, psi).to_array();
    };

    std::vector<std::array<double, 6>> seeds;
    seeds.push_back(dfe_paper(p).to_array());
    seeds.push_back(endemic_paper(p).to_array());
    const double n_dfe = total_population(dfe_paper(p));
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (grid_index * 0xbf58476d1ce4e5b9ULL + 1));
    std::uniform_real_distribution<double> unif(0.0, 10.0 * std::max(n_dfe, 1.0));
    for (int s = 0; s < 5; ++s) {
        std::array<double, 6> seed{};
        for (int i = 0; i < 6; ++i) seed[static_cast<std::size_t>(i)] = unif(rng);
        seeds.push_back(seed);
    }

    std::vector<BranchPoint> roots;
    bool any_converged = false;
    for (const auto& seed : seeds) {
        NewtonResult nr;
        try {
            nr = newton_solve(f, seed, 1e-10, 100);
        } catch (const NumericError&) {
            continue; // singular Jacobian from this seed: recorded as non-convergence
        }
        if (!nr.converged) continue;
        any_converged = true;

        const State root = State::from_array(nr.x);
        const double scale = 1e-6 * std::max(1.0, std::abs(*std::max_element(
                                                      nr.x.begin(), nr.x.end(),
                                                      [](double a, double b) {
                                                          return std::abs(a) < std::abs(b);
                                                      })));
        bool duplicate = false;
        for (const auto& existing : roots) {
            double dist = 0.0;
            const auto ea = existing.root.to_array();
            for (int i = 0; i < 6; ++i)
                dist = std::max(dist, std::abs(ea[static_cast<std::size_t>(i)] -
                                               nr.x[static_cast<std::size_t>(i)]));
            if (dist < scale) { duplicate = true; break; }
        }
        if (duplicate) continue;

        BranchPoint bp;
        bp.psi = psi;
        bp.root = root;
        bp.converged = true;
        bp.spectral_abscissa = linalg::spectral_abscissa(jacobian_psi(p, c, psi));
        bp.stable = bp.spectral_abscissa < 0.0;
        roots.push_back(bp);
    }
    if (!any_converged) {
        BranchPoint bp;
        bp.psi = psi;
        bp.converged = false;
        roots.push_back(bp);
    }
    return roots;
}

void validate_grid(const ModelParams& p, const Controls& c, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("sweep_branches: empty psi grid");
    const double cap = 2.0 * psi_critical(p, c);
    double prev = -1.0;
    for (double psi : grid) {
        if (!std::isfinite(psi) || psi < 0.0 || psi > cap)
            throw ConfigError("sweep_branches: grid value " + std::to_string(psi) +
                              " outside [0, 2*psi_star]");
        if (psi <= prev) throw ConfigError("sweep_branches: grid must be strictly ascending");
        prev = psi;
    }
}

} // namespace

std::vector<BranchPoint> sweep_branches_serial(const ModelParams& p, const Controls& c,
                                               const std::vector<double>& psi_grid) {
    validate_grid(p, c, psi_grid);
    std::vector<std::vector<BranchPoint>> per_point(psi_grid.size());
    for (std::size_t g = 0; g < psi_grid.size(); ++g)
        per_point[g] = sweep_point(p, c, psi_grid[g], g);
    std::vector<BranchPoint> out;
    for (auto& v : per_point)
        for (auto& bp : v) out.push_back(bp);
    return out;
}

std::vector<BranchPoint> sweep_branches(const ModelParams& p, const Controls& c,
                                        const std::vector<double>& psi_grid) {
    validate_grid(p, c, psi_grid);
    std::vector<std::vector<BranchPoint>> per_point(psi_grid.size());
    const long n = static_cast<long>(psi_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long g = 0; g < n; ++g)
        per_point[static_cast<std::size_t>(g)] =
            sweep_point(p, c, psi_grid[static_cast<std::size_t>(g)], static_cast<std::size_t>(g));
    std::vector<BranchPoint> out;
    for (auto& v : per_point)
        for (auto& bp : v) out.push_back(bp);
    return out;
}

PerturbationSpec PerturbationSpec::make(const ModelParams& p, const Controls& c,
                                        PerturbationKind kind, double amplitude, double eps,
                                        bool control_inclusive) {
    PerturbationSpec s;
    s.amplitude = amplitude;
    s.eps = eps;
    s.kind = kind;
    if (control_inclusive) {
        const DerivedRates a = aggregate_rates(p, c);
        s.rate = (kind == PerturbationKind::latent) ? a.aL : a.aI;
    } else {
        s.rate = (kind == PerturbationKind::latent) ? p.mu + p.beta + p.eta
                                                    : p.mu + p.alpha + p.gamma;
    }
    s.validate();
    return s;
}

void PerturbationSpec::validate() const {
    if (!std::isfinite(amplitude) || !std::isfinite(eps) || !std::isfinite(rate))
        throw ConfigError("PerturbationSpec: non-finite field");
    if (eps < 0.0) throw ConfigError("PerturbationSpec: eps must be >= 0");
    if (rate < 0.0) throw ConfigError("PerturbationSpec: rate must be >= 0");
}

std::vector<double> linearized_decay(const PerturbationSpec& spec,
                                     const std::vector<double>& times) {
    spec.validate();
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        if (!(t > prev)) throw ConfigError("linearized_decay: times must be ascending");
        prev = t;
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(spec.amplitude * std::exp(-spec.rate * spec.eps * t));
    return out;
}

double fit_decay_rate(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 3)
        throw ConfigError("fit_decay_rate: need at least 3 points, got " +
                          std::to_string(series.size()));
    double mean_t = 0.0, mean_ln = 0.0;
    for (const auto& [t, v] : series) {
        if (!(v > 0.0))
            throw ConfigError("fit_decay_rate: nonpositive value " + std::to_string(v) +
                              " at t = " + std::to_string(t));
        mean_t += t;
        mean_ln += std::log(v);
    }
    const double n = static_cast<double>(series.size());
    mean_t /= n;
    mean_ln /= n;
    double num = 0.0, den = 0.0;
    for (const auto& [t, v] : series) {
        const double dt = t - mean_t;
        num += dt * (std::log(v) - mean_ln);
        den += dt * dt;
    }
    if (den == 0.0) throw ConfigError("fit_decay_rate: degenerate time axis");
    return num / den;
}

} // namespace gonodyn
