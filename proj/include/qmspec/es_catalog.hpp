#pragma once

#include <functional>
#include <span>

#include "qmspec/errors.hpp"

namespace qmspec {

enum class ESKind { Oscillator1D, OscillatorRadial, CoulombRadial };

/// Exactly solvable base problem: 1-D harmonic oscillator, radial harmonic
/// oscillator, or radial Coulomb potential, with its quantum state.
struct ESFamily {
    ESKind kind = ESKind::Oscillator1D;
    double a = 0.0;       ///< oscillator scale, a = w/2 > 0
    double lambda = 0.0;  ///< Coulomb strength, < 0
    int n = 0;
    int ell = 0;  ///< ignored for the 1-D flavor

    static ESFamily oscillator_1d(double a, int n);
    static ESFamily oscillator_radial(double w, int n, int ell);
    static ESFamily coulomb_radial(double lambda, int n, int ell);

    double w() const { return 2.0 * a; }
    /// Potential including the centrifugal barrier (radial kinds).
    double effective_potential(double x) const;
};

/// Factorized wavefunction Psi(x) = f(x) F(g(x)) h(x); h == 1 for the
/// exactly solvable catalog.
struct WavefunctionFactors {
    std::function<double(double)> g;
    std::function<double(double)> f;
    std::function<double(double)> F;  ///< special-function factor, evaluated in g
    std::function<double(double)> h;
    std::function<double(double)> psi;
};

struct ESolution {
    double energy = 0.0;
    WavefunctionFactors factors;
};

/// Closed-form energy and unnormalized wavefunction factors.
ESolution es_solution(const ESFamily& family);

/// max |Psi''/Psi - V_eff + E| over the (node-excluded) grid.
double es_residual(const ESFamily& family, std::span<const double> grid);

/// L2 norm by trapezoid quadrature on [lo, hi], for optional reporting.
double l2_norm(const std::function<double(double)>& psi, double lo, double hi,
               int points = 4001);

}  // namespace qmspec
