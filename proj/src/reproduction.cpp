#include "gonodyn/reproduction.hpp"

#include <cmath>
#include <string>

#include "gonodyn/errors.hpp"

namespace gonodyn {

NgmPair build_ngm(const ModelParams& p, const Controls& c, double S_at_dfe) {
    if (!(S_at_dfe >= 0.0))
        throw ConfigError("build_ngm: S_at_dfe must be nonnegative");
    const DerivedRates a = aggregate_rates(p, c);

    NgmPair ngm;
    ngm.F(0, 1) = p.theta * S_at_dfe;

    ngm.V(0, 0) = a.aL;
    ngm.V(1, 0) = -p.beta;
    ngm.V(1, 1) = a.aI;
    ngm.V(2, 0) = -p.eta * (1.0 + c.k1);
    ngm.V(2, 1) = -p.alpha * (1.0 + c.k2);
    ngm.V(2, 2) = a.aT;

    ngm.V_inv = invert_V(ngm.V);
    ngm.K = ngm.F * ngm.V_inv;
    return ngm;
}

linalg::Matrix invert_V(const linalg::Matrix& V) {
    if (V.size() != 3) throw ConfigError("invert_V: expected a 3x3 matrix");
    for (int i = 0; i < 3; ++i)
        if (V(i, i) == 0.0)
            throw SingularMatrixError("invert_V: zero diagonal entry at index " +
                                      std::to_string(i), i);
    linalg::Matrix W(3);
    // Columns of W solve V w = e_j by forward substitution.
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            double s = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= V(i, k) * W(k, j);
            W(i, j) = s / V(i, i);
        }
    }
    return W;
}

ReproductionReport effective_R(const ModelParams& p, const Controls& c, double S) {
    if (!(S >= 0.0)) throw ConfigError("effective_R: S must be nonnegative");
    const DerivedRates a = aggregate_rates(p, c);
    const DerivedRates a0 = aggregate_rates(p, Controls{0.0, 0.0});

    ReproductionReport rep;
    rep.s_used = S;
    rep.re_closed_form = p.beta * p.theta * S / (a.aL * a.aI);
    rep.r0 = p.beta * p.theta * S / (a0.aL * a0.aI);

    const NgmPair ngm = build_ngm(p, c, S);
    rep.re_ngm_spectral = linalg::spectral_radius(ngm.K);

    const double scale = std::max({std::abs(rep.re_closed_form), std::abs(rep.re_ngm_spectral), 1e-300});
    if (std::abs(rep.re_closed_form - rep.re_ngm_spectral) > 1e-10 * scale)
        throw NumericError("effective_R: NGM spectral radius " +
                           std::to_string(rep.re_ngm_spectral) +
                           " disagrees with closed form " +
                           std::to_string(rep.re_closed_form));
    rep.re = rep.re_closed_form;
    return rep;
}

double re_paper_table_formula(const ModelParams& p, const Controls& /*controls unused in the printed expression*/) {
    const double denom = p.mu * (p.mu + p.alpha + p.gamma) * (p.mu + p.beta + p.eta) *
                         (p.mu + p.upsilon);
    if (denom <= 0.0)
        throw ConfigError("re_paper_table_formula: nonpositive denominator");
    return p.sigma * p.beta * p.theta * ((p.mu + p.upsilon) - p.mu * p.f) / denom;
}

} // namespace gonodyn
