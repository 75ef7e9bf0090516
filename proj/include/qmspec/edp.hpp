#pragma once

#include <functional>

#include "qmspec/errors.hpp"

namespace qmspec {

enum class EDPFamily { Harmonic, Coulomb };

/// Linearly energy-dependent potential family with quantum state (n, l).
///
/// Harmonic: V(x,E) = (w^2 x^2 / 4)(1 + gamma E) + l(l+1)/x^2, coherent for gamma <= 0.
/// Coulomb:  V(x,E) = (lambda/x)(1 + gamma E)    + l(l+1)/x^2, lambda < 0, coherent for gamma >= 0.
struct EDPSpec {
    EDPFamily family = EDPFamily::Harmonic;
    double w = 0.0;       ///< oscillator frequency (harmonic)
    double lambda = 0.0;  ///< Coulomb strength (coulomb)
    double gamma = 0.0;   ///< energy coupling
    int n = 0;            ///< radial quantum number
    int l = 0;            ///< angular momentum
    bool noncoherent = false;  ///< set when constructed with the coherence override

    static EDPSpec harmonic(double w, double gamma, int n, int l,
                            bool allow_noncoherent = false);
    static EDPSpec coulomb(double lambda, double gamma, int n, int l,
                           bool allow_noncoherent = false);

    /// Energy of the underlying exactly solvable (gamma = 0) problem.
    double es_energy() const;

    /// Static potential at frozen energy E, centrifugal included.
    double potential(double x, double E) const;
};

/// Closed-form solution of the energy-dependent eigenproblem.
struct EDPResult {
    double energy_plus = 0.0;   ///< physical root
    double energy_minus = 0.0;  ///< discarded root, kept for diagnostics
    double delta_e = 0.0;       ///< energy correction at E+, recomputed from the series form
    bool noncoherent = false;
    std::function<double(double)> h;            ///< moderating factor at E+
    std::function<double(double)> g_effective;  ///< energy-dressed internal variable
    std::function<double(double)> psi;          ///< full unnormalized wavefunction at E+
};

/// Both quadratic roots plus the moderating factor and wavefunction at E+.
/// Throws breakdown_error when 1 + gamma*E+ <= 0 (harmonic square-root domain).
EDPResult edp_energy(const EDPSpec& spec);

/// Unnormalized Psi(x, E) built from the result's dressed variable.
double edp_wavefunction(const EDPSpec& spec, const EDPResult& result, double x);

/// |E - (2n+l+3/2) w sqrt(1+gamma E)| (harmonic) or |E - E_ES - dE(E)| (coulomb).
double self_consistency_residual(const EDPSpec& spec, double E);

/// Coulomb physical root in the two algebraically equivalent published forms.
double edp_coulomb_root_quadratic(double lambda, double gamma, int n, int l);
double edp_coulomb_root_resolvent(double lambda, double gamma, int n, int l);

}  // namespace qmspec
