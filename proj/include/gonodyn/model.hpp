#ifndef GONODYN_MODEL_HPP
#define GONODYN_MODEL_HPP

#include <array>
#include <cstddef>

namespace gonodyn {

/// Biological rate constants of the gonorrhoea transmission model.
/// All rates are per year; f is the immunized fraction of recruits.
struct ModelParams {
    double sigma  = 0.0; ///< recruitment level (individuals/year)
    double upsilon = 0.0; ///< waning rate of passive immunity (1/year)
    double mu     = 0.0; ///< natural mortality rate (1/year)
    double lambda = 0.0; ///< susceptible-latent contact rate (stored; dynamics use theta)
    double eta    = 0.0; ///< treatment rate of the latent class (1/year)
    double gamma  = 0.0; ///< disease-induced death rate (1/year)
    double alpha  = 0.0; ///< treatment rate of the infected class (1/year)
    double beta   = 0.0; ///< latent -> infectious progression rate (1/year)
    double omega  = 0.0; ///< recovery rate of the treated class (1/year)
    double delta  = 0.0; ///< recovered -> susceptible rate (1/year)
    double theta  = 0.0; ///< direct infection rate (bilinear term coefficient)
    double f      = 0.0; ///< immunized fraction of recruits, in [0,1]

    /// Throws ConfigError naming the offending field if any rate is negative,
    /// non-finite, or f is outside [0,1].
    void validate() const;
};

/// Control intensities applied to the latent (k1) and infected (k2) classes.
/// k2 is confined to [0,1] so the theta*S*(1-k2) channel stays nonnegative.
struct Controls {
    double k1 = 0.0;
    double k2 = 0.0;

    void validate() const;
};

/// Compartment populations. Also used for the right-hand-side value, in which
/// case the components are rates (individuals/year).
struct State {
    double Q = 0.0; ///< passive immune
    double S = 0.0; ///< susceptible
    double L = 0.0; ///< latent
    double I = 0.0; ///< infectious
    double R = 0.0; ///< recovered
    double T = 0.0; ///< treated

    static constexpr std::size_t size = 6;

    std::array<double, 6> to_array() const { return {Q, S, L, I, R, T}; }
    static State from_array(const std::array<double, 6>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    double operator[](std::size_t i) const { return to_array()[i]; }

    bool all_finite() const;
    bool all_nonnegative() const;
};

/// Aggregated outflow rates used throughout the analysis. Paper symbols:
///   aQ = mu+upsilon            (paper mu_2)
///   aL = mu+beta+eta(1+k1)     (paper mu_1 when k1=0)
///   aI = mu+gamma+alpha(1+k2)  (paper mu_0 when k2=0)
///   aR = mu+delta              (paper mu_3 in Theorem 1)
///   aT = mu+omega              (paper mu_4; Lemma 1 reuses mu_3 here)
struct DerivedRates {
    double aQ = 0.0;
    double aL = 0.0;
    double aI = 0.0;
    double aR = 0.0;
    double aT = 0.0;
};

DerivedRates aggregate_rates(const ModelParams& p, const Controls& c);

/// Right-hand side of the six model ODEs. Pure and reentrant; rejects
/// non-finite input with NumericError.
State rhs(const State& y, const ModelParams& p, const Controls& c);

/// N = Q+S+L+I+R+T.
double total_population(const State& y);

/// Force of infection lambda = theta * I.
double force_of_infection(const State& y, const ModelParams& p);

} // namespace gonodyn

#endif
