#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gbm/errors.hpp"

namespace gbm {

/// Rates of the dimensional system. Units: kappa in cm^2/day, rates in 1/day, K in cell/cm^3.
struct DimensionalParameters {
    double kappa1 = 1.0;
    double kappa0 = 1.0;
    double rho = 1.0;
    double alpha = 1.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double gamma = 1.0;
    double delta = 1.0;
    double K = 1.0;
};

/// Rates of the normalized system (K = rho = kappa0 = 1).
struct DimensionlessParameters {
    double kappa1 = 0.0;
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double gamma = 0.0;
    double delta = 0.0;

    friend bool operator==(const DimensionlessParameters&, const DimensionlessParameters&) = default;
};

/// Pointwise (T, N, Phi).
struct FieldTriple {
    double t_density = 0.0;
    double n_density = 0.0;
    double phi_density = 0.0;

    friend bool operator==(const FieldTriple&, const FieldTriple&) = default;
};

inline void validate(const DimensionlessParameters& p) {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidParameter(std::string(name) + " must be finite and nonnegative");
    };
    check(p.kappa1, "kappa1");
    check(p.alpha, "alpha");
    check(p.beta1, "beta1");
    check(p.beta2, "beta2");
    check(p.gamma, "gamma");
    check(p.delta, "delta");
}

namespace detail {
inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }
inline double negative_part(double v) { return v < 0.0 ? -v : 0.0; }
} // namespace detail

/// Vasculature volume fraction P = phi+ / ((phi+ + 1)/2 + t+), clamped to [0, 1].
inline double vascular_fraction(double phi, double t) {
    const double phi_pos = detail::positive_part(phi);
    if (phi_pos == 0.0) return 0.0;
    const double p = phi_pos / (0.5 * (phi_pos + 1.0) + detail::positive_part(t));
    return std::clamp(p, 0.0, 1.0);
}

/// sqrt(1 - P^2) for an already computed fraction.
inline double hypoxia_from_fraction(double fraction) {
    const double p = std::clamp(fraction, 0.0, 1.0);
    return std::sqrt(1.0 - p * p);
}

/// Lack-of-vasculature factor sqrt(1 - P^2).
inline double hypoxia_factor(double phi, double t) {
    return hypoxia_from_fraction(vascular_fraction(phi, t));
}

inline double reaction_tumor(const FieldTriple& s, const DimensionlessParameters& p) {
    const double T = s.t_density, N = s.n_density, Phi = s.phi_density;
    const double P = vascular_fraction(Phi, T);
    const double occupancy = 1.0 - (T + N + Phi);
    return T * P * occupancy - p.alpha * T * hypoxia_from_fraction(P) - p.beta1 * N * T;
}

inline double reaction_necrosis(const FieldTriple& s, const DimensionlessParameters& p) {
    const double T = s.t_density, N = s.n_density, Phi = s.phi_density;
    const double hyp = hypoxia_factor(Phi, T);
    return p.alpha * T * hyp + p.beta1 * N * T + p.delta * T * Phi + p.beta2 * N * Phi;
}

inline double reaction_vasculature(const FieldTriple& s, const DimensionlessParameters& p) {
    const double T = s.t_density, N = s.n_density, Phi = s.phi_density;
    const double hyp = hypoxia_factor(Phi, T);
    const double occupancy = 1.0 - (T + N + Phi);
    return p.gamma * T * hyp * Phi * occupancy - p.delta * T * Phi - p.beta2 * N * Phi;
}

/// Maps dimensional rates onto the normalized ones:
/// (kappa1/kappa0, alpha/rho, K beta1/rho, K beta2/rho, gamma/rho, K delta/rho).
inline DimensionlessParameters nondimensionalize(const DimensionalParameters& d) {
    if (!(d.kappa0 > 0.0)) throw InvalidParameter("kappa0 must be positive");
    if (!(d.rho > 0.0)) throw InvalidParameter("rho must be positive");
    if (!(d.K > 0.0)) throw InvalidParameter("K must be positive");
    return DimensionlessParameters{
        .kappa1 = d.kappa1 / d.kappa0,
        .alpha = d.alpha / d.rho,
        .beta1 = d.K * d.beta1 / d.rho,
        .beta2 = d.K * d.beta2 / d.rho,
        .gamma = d.gamma / d.rho,
        .delta = d.K * d.delta / d.rho,
    };
}

struct ScaledCoordinates {
    double y = 0.0; ///< dimensionless length
    double s = 0.0; ///< dimensionless time
};

/// s = rho t, y = sqrt(rho / kappa0) x.
inline ScaledCoordinates rescale_spacetime(double x, double t, double kappa0, double rho) {
    if (!(kappa0 > 0.0)) throw InvalidParameter("kappa0 must be positive");
    if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
    return {std::sqrt(rho / kappa0) * x, rho * t};
}

} // namespace gbm
