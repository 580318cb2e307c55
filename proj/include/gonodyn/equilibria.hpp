#ifndef GONODYN_EQUILIBRIA_HPP
#define GONODYN_EQUILIBRIA_HPP

#include <array>
#include <functional>
#include <vector>

#include "gonodyn/linalg.hpp"
#include "gonodyn/model.hpp"

namespace gonodyn {

enum class EquilibriumClass { disease_free, endemic, boundary };
enum class Stability { stable, unstable, marginal };

const char* to_string(EquilibriumClass c);
const char* to_string(Stability s);

struct EquilibriumReport {
    State state{};
    double residual_norm = 0.0;          ///< max-norm of rhs at state
    int iterations = 0;
    bool converged = false;
    EquilibriumClass classification = EquilibriumClass::boundary;
    Stability stable = Stability::marginal;
    double spectral_abscissa = 0.0;
    std::vector<double> residual_history; ///< max-norm per Newton iteration
};

/// The axis-ordered closed form the source analysis displays for the
/// disease-free state: (f*sigma/(mu+upsilon), S0, 0, 0, 0, 0) with
/// S0 = (upsilon*f*sigma + (mu+upsilon)(1-f)*sigma) / ((mu+upsilon)(theta+mu)).
/// Note: this is an exact root of the dynamics only when theta = 0; the
/// (theta+mu) denominator and the theta*S*(1-k2) inflow otherwise leave a
/// nonzero residual. residual() makes that inspectable.
State dfe_paper(const ModelParams& p);

/// The displayed endemic closed forms, evaluated verbatim (the lambda factor
/// in L*/I* reads the stored lambda parameter). Dimensionally irregular as
/// printed; cross-check against solve_steady_state rather than trusting.
State endemic_paper(const ModelParams& p);

/// rhs evaluated at a candidate equilibrium.
State residual(const State& y, const ModelParams& p, const Controls& c);

/// Forward-difference Jacobian of rhs at y (step max(1e-7, 1e-7*|x_i|)).
linalg::Matrix numerical_jacobian(const State& y, const ModelParams& p, const Controls& c);

/// Damped Newton on rhs = 0. Converged when ||rhs||_inf < tol; the step is
/// halved up to 20 times while the residual fails to decrease. A singular
/// Jacobian throws; exceeding max_iter returns a non-converged report.
EquilibriumReport solve_steady_state(const ModelParams& p, const Controls& c, const State& guess,
                                     double tol = 1e-10, int max_iter = 100);

using SystemFn = std::function<std::array<double, 6>(const std::array<double, 6>&)>;

struct NewtonResult {
    std::array<double, 6> x{};
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
};

/// The same damped Newton over an arbitrary 6-dim system (forward-difference
/// Jacobian, step max(1e-7, 1e-7*|x_i|)). Shared by the steady-state solver
/// and the bifurcation branch sweep.
NewtonResult newton_solve(const SystemFn& f, const std::array<double, 6>& guess,
                          double tol = 1e-10, int max_iter = 100);

} // namespace gonodyn

#endif
