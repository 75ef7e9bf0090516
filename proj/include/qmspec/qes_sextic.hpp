#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "qmspec/potential.hpp"

namespace qmspec {

/// Quasi-exactly solvable sextic oscillator family
/// V(x) = (2s-1/2)(2s-3/2)/x^2 + [a^2 - 4b(s + 1/2 + M)] x^2 + 2ab x^4 + b^2 x^6
/// with s = l/2 + 3/4 for a non-negative integer l, and M in {0, 1}.
struct QESSextic {
    double a = 0.0;
    double b = 0.0;
    double s = 0.75;
    int M = 0;

    /// Validates a > 0, b >= 0, M in {0,1}, and s = l/2 + 3/4 with integer l >= 0.
    static QESSextic make(double a, double b, double s, int M);
    static QESSextic from_ell(double a, double b, int ell, int M);

    int ell() const;  ///< l = 2s - 3/2
};

/// Algebraic level of the M-sector.
struct QESLevel {
    int n = 0;
    std::optional<double> lambda;  ///< polynomial-factor scale, present iff M = 1
    double energy = 0.0;
    std::function<double(double)> psi;  ///< unnormalized
};

/// Induced polynomial potential (radial flavor, centrifugal l(l+1)/x^2).
PolynomialPotential qes_potential(const QESSextic& spec);

/// lambda_-,+ = (a -+ sqrt(a^2 + 8bs))/2, ordered.  Throws on negative discriminant.
std::pair<double, double> lambda_roots(double a, double b, double s);

/// Closed-form level: M=0 ground state (E = 4as) or M=1 with the lambda
/// branch tied to the level (lambda_- for n=0, lambda_+ for n=1).
QESLevel qes_solve(const QESSextic& spec, int n);

}  // namespace qmspec
