#ifndef GONODYN_BIFURCATION_HPP
#define GONODYN_BIFURCATION_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "gonodyn/linalg.hpp"
#include "gonodyn/model.hpp"

namespace gonodyn {

/// The source analysis substitutes psi = theta*S for every theta*S occurrence,
/// which makes the system affine in the state. psi_critical() returns the
/// displayed closed form aI/beta; the Jacobian of the substituted system is
/// singular at psi_jacobian_critical() = aL*aI/beta instead, which is exactly
/// where Re(psi) = psi*beta/(aL*aI) crosses 1. Both are reported; the
/// center-manifold machinery operates at the singular point.
double psi_critical(const ModelParams& p, const Controls& c);
double psi_jacobian_critical(const ModelParams& p, const Controls& c);

/// Right-hand side of the psi-substituted system (theta*S -> psi everywhere).
State rhs_psi(const State& y, const ModelParams& p, const Controls& c, double psi);

/// Jacobian of rhs_psi; state-independent because the substituted system is
/// affine. At psi = theta*S0 this is the displayed Jacobian-at-DFE.
linalg::Matrix jacobian_psi(const ModelParams& p, const Controls& c, double psi);

struct BifurcationSetup {
    double psi_star = 0.0;          ///< displayed closed form aI/beta
    double psi_jacobian_critical = 0.0; ///< aL*aI/beta, where Re(psi)=1 and J is singular
    State base_point{};             ///< disease-free base point for the expansion
    double fd_step = 1e-4;          ///< finite-difference scale for second partials
};

BifurcationSetup make_bifurcation_setup(const ModelParams& p, const Controls& c);

enum class BifurcationClass { transcritical_forward, backward, degenerate };
const char* to_string(BifurcationClass c);

struct BifurcationReport {
    double a = 0.0;                 ///< sum v_k h_i h_j d2f_k/dx_i dx_j
    double b = 0.0;                 ///< sum v_k h_i d2f_k/dx_i dpsi
    std::vector<double> h;          ///< right null vector (I-component >= 0)
    std::vector<double> v;          ///< left null vector, v.h = 1
    BifurcationClass classification = BifurcationClass::degenerate;
    BifurcationSetup setup{};
    double zero_eigenvalue = 0.0;   ///< modulus of the near-zero eigenvalue
};

/// Center-manifold coefficients at criticality. Null vectors from the
/// Jacobian's simple zero eigenvalue; second partials by central finite
/// differences with one Richardson refinement; the sums run over all index
/// triples. Throws when the zero eigenvalue is absent or not simple.
BifurcationReport bifurcation_coefficients(const ModelParams& p, const Controls& c);

/// Sign rules: |a| or |b| below 1e-8 -> degenerate; a and b of opposite
/// sign -> transcritical-forward; same sign -> backward.
BifurcationClass classify_bifurcation(double a, double b);
BifurcationClass classify_bifurcation(const BifurcationReport& r);

struct BranchPoint {
    double psi = 0.0;
    State root{};
    double spectral_abscissa = 0.0;
    bool stable = false;
    bool converged = false;
};

/// Multi-seed Newton roots of the psi-substituted system along an ascending
/// psi grid (seeds: paper DFE, endemic closed form, 5 deterministic random
/// draws). Roots de-duplicated per grid point; non-convergence is recorded,
/// never fatal. Grid points are independent; the OpenMP variant merges in
/// grid order so output is identical to the serial reference.
std::vector<BranchPoint> sweep_branches(const ModelParams& p, const Controls& c,
                                        const std::vector<double>& psi_grid);
std::vector<BranchPoint> sweep_branches_serial(const ModelParams& p, const Controls& c,
                                               const std::vector<double>& psi_grid);

enum class PerturbationKind { latent, infectious };

/// Carrier for the displayed perturbation solutions L(t) = B e^{-aL*eps*t}
/// and I(t) = A e^{-aI*eps*t}. Control-inclusive aggregates by default;
/// control_inclusive=false restores the uncontrolled mu1/mu0 reading.
struct PerturbationSpec {
    double amplitude = 1.0;
    double eps = 0.0;
    double rate = 0.0;
    PerturbationKind kind = PerturbationKind::latent;

    static PerturbationSpec make(const ModelParams& p, const Controls& c, PerturbationKind kind,
                                 double amplitude, double eps, bool control_inclusive = true);
    void validate() const;
};

/// Pointwise evaluation of amplitude * exp(-rate*eps*t) at ascending times.
std::vector<double> linearized_decay(const PerturbationSpec& spec,
                                     const std::vector<double>& times);

/// Least-squares slope of log(value) against t. Requires >= 3 points and
/// strictly positive values.
double fit_decay_rate(const std::vector<std::pair<double, double>>& series);

/// Central-difference Hessians of a 6-dim vector field, d2f[k][i][j], with a
/// single Richardson refinement. Steps scale as fd_step*max(1,|x_i|).
struct SecondPartials {
    double d2[6][6][6] = {};
};
using VectorField6 = std::function<std::array<double, 6>(const std::array<double, 6>&)>;
SecondPartials fd_hessians(const VectorField6& f, const std::array<double, 6>& x,
                           double fd_step = 1e-4);

} // namespace gonodyn

#endif
