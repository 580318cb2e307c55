#ifndef GONODYN_REPRODUCTION_HPP
#define GONODYN_REPRODUCTION_HPP

#include "gonodyn/linalg.hpp"
#include "gonodyn/model.hpp"

namespace gonodyn {

/// Next-generation pair over the infected classes in order (L, I, T).
/// F carries the single new-infection entry theta*S in row L / column I;
/// the theta*(1-k2)*S inflow is excluded, matching the displayed F matrix.
/// V is lower triangular with positive diagonal (aL, aI, aT).
struct NgmPair {
    linalg::Matrix F{3};
    linalg::Matrix V{3};
    linalg::Matrix V_inv{3};
    linalg::Matrix K{3}; ///< F * V^{-1}
};

NgmPair build_ngm(const ModelParams& p, const Controls& c, double S_at_dfe);

/// Exact forward-substitution inverse of the lower-triangular V.
/// Throws SingularMatrixError on a zero diagonal.
linalg::Matrix invert_V(const linalg::Matrix& V);

struct ReproductionReport {
    double re = 0.0;             ///< canonical value (closed form)
    double re_closed_form = 0.0; ///< beta*theta*S / (aL*aI)
    double re_ngm_spectral = 0.0;///< spectral radius of F V^{-1}
    double r0 = 0.0;             ///< closed form with k1 = k2 = 0, same S
    double s_used = 0.0;
};

/// Effective reproduction number at susceptible level S. Computes both the
/// NGM spectral radius and the closed form and enforces their agreement
/// (relative 1e-10); disagreement or eigenvalue non-convergence throws.
ReproductionReport effective_R(const ModelParams& p, const Controls& c, double S);

/// The printed Table-formula expression, evaluated verbatim (uncontrolled
/// aggregates): sigma*beta*theta*((mu+upsilon)-mu*f) /
/// (mu*(mu+alpha+gamma)*(mu+beta+eta)*(mu+upsilon)). Kept alongside the
/// other two methods so their disagreement stays inspectable.
double re_paper_table_formula(const ModelParams& p, const Controls& c);

} // namespace gonodyn

#endif
