#pragma once

#include <optional>

#include "qmspec/errors.hpp"

namespace qmspec {

/// Even-power polynomial potential V(x) = mu x^2 + sigma x^4 + eta x^6,
/// optionally radial with an ell(ell+1)/x^2 centrifugal barrier.
/// Units: hbar = 2m = 1 throughout.
struct PolynomialPotential {
    double mu = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    std::optional<int> ell;  ///< present => radial problem on [0, inf)

    static PolynomialPotential one_dimensional(double mu, double sigma, double eta);
    static PolynomialPotential radial(double mu, double sigma, double eta, int ell);

    bool is_radial() const { return ell.has_value(); }

    /// Polynomial part only.
    double operator()(double x) const {
        const double x2 = x * x;
        return (mu + (sigma + eta * x2) * x2) * x2;
    }

    /// Polynomial part plus centrifugal barrier (if radial).
    double effective(double x) const {
        double v = (*this)(x);
        if (ell && *ell > 0) v += static_cast<double>(*ell) * (*ell + 1) / (x * x);
        return v;
    }
};

}  // namespace qmspec
