#include "qmspec/es_catalog.hpp"

#include <cmath>

#include "qmspec/oracle.hpp"
#include "qmspec/special.hpp"

namespace qmspec {

ESFamily ESFamily::oscillator_1d(double a, int n) {
    if (a <= 0.0) throw validation_error("es: oscillator scale a must be positive");
    if (n < 0) throw validation_error("es: n must be non-negative");
    ESFamily f;
    f.kind = ESKind::Oscillator1D;
    f.a = a;
    f.n = n;
    return f;
}

ESFamily ESFamily::oscillator_radial(double w, int n, int ell) {
    if (w <= 0.0) throw validation_error("es: frequency w must be positive");
    if (n < 0 || ell < 0) throw validation_error("es: n and ell must be non-negative");
    ESFamily f;
    f.kind = ESKind::OscillatorRadial;
    f.a = 0.5 * w;
    f.n = n;
    f.ell = ell;
    return f;
}

ESFamily ESFamily::coulomb_radial(double lambda, int n, int ell) {
    if (lambda >= 0.0) throw validation_error("es: Coulomb strength must be negative");
    if (n < 0 || ell < 0) throw validation_error("es: n and ell must be non-negative");
    ESFamily f;
    f.kind = ESKind::CoulombRadial;
    f.lambda = lambda;
    f.n = n;
    f.ell = ell;
    return f;
}

double ESFamily::effective_potential(double x) const {
    switch (kind) {
        case ESKind::Oscillator1D:
            return a * a * x * x;
        case ESKind::OscillatorRadial:
            return a * a * x * x + static_cast<double>(ell) * (ell + 1) / (x * x);
        case ESKind::CoulombRadial:
            return lambda / x + static_cast<double>(ell) * (ell + 1) / (x * x);
    }
    return 0.0;
}

ESolution es_solution(const ESFamily& family) {
    ESolution sol;
    const auto one = [](double) { return 1.0; };
    switch (family.kind) {
        case ESKind::Oscillator1D: {
            const double a = family.a;
            const int n = family.n;
            sol.energy = 2.0 * a * (n + 0.5);
            sol.factors.g = [a](double x) { return std::sqrt(a) * x; };
            sol.factors.f = one;
            sol.factors.F = [n](double t) { return std::exp(-0.5 * t * t) * hermite(n, t); };
            sol.factors.h = one;
            break;
        }
        case ESKind::OscillatorRadial: {
            const double a = family.a;
            const double w = family.w();
            const int n = family.n, l = family.ell;
            sol.energy = (2.0 * n + l + 1.5) * w;
            sol.factors.g = [a](double x) { return a * x * x; };
            sol.factors.f = [w, l](double x) {
                const double g = 0.5 * w * x * x;
                return std::pow(2.0 * w, -0.25) * std::pow(g, 0.5 * (l + 1)) *
                       std::exp(-0.5 * g);
            };
            sol.factors.F = [n, l](double t) { return laguerre(n, l + 0.5, t); };
            sol.factors.h = one;
            break;
        }
        case ESKind::CoulombRadial: {
            const double lam = family.lambda;
            const int n = family.n, l = family.ell;
            const int p = n + l + 1;
            sol.energy = -lam * lam / (4.0 * p * p);
            sol.factors.g = [lam, p](double x) { return -lam * x / p; };
            sol.factors.f = one;
            sol.factors.F = [n, l](double t) {
                return std::pow(t, l + 1) * std::exp(-0.5 * t) * laguerre(n, 2 * l + 1, t);
            };
            sol.factors.h = one;
            break;
        }
    }
    const auto g = sol.factors.g;
    const auto f = sol.factors.f;
    const auto F = sol.factors.F;
    const auto h = sol.factors.h;
    sol.factors.psi = [g, f, F, h](double x) { return f(x) * F(g(x)) * h(x); };
    return sol;
}

double es_residual(const ESFamily& family, std::span<const double> grid) {
    const ESolution sol = es_solution(family);
    auto v = [&family](double x) { return family.effective_potential(x); };
    return schrodinger_residual(sol.factors.psi, v, sol.energy, grid);
}

double l2_norm(const std::function<double(double)>& psi, double lo, double hi,
               int points) {
    const auto grid = uniform_grid(lo, hi, points);
    const double h = grid[1] - grid[0];
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = psi(grid[i]);
        const double w = (i == 0 || i + 1 == grid.size()) ? 0.5 : 1.0;
        acc += w * p * p;
    }
    return std::sqrt(acc * h);
}

}  // namespace qmspec
