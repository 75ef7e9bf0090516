#include "qmspec/qes_sextic.hpp"

#include <cmath>

namespace qmspec {

QESSextic QESSextic::make(double a, double b, double s, int M) {
    if (a <= 0.0) throw validation_error("qes: scale a must be positive");
    if (b < 0.0) throw validation_error("qes: scale b must be non-negative");
    if (M != 0 && M != 1) throw validation_error("qes: M must be 0 or 1");
    const double ell = 2.0 * s - 1.5;
    const double rounded = std::round(ell);
    if (rounded < 0.0 || std::abs(ell - rounded) > 1e-9)
        throw validation_error("qes: s must equal l/2 + 3/4 for an integer l >= 0");
    QESSextic q;
    q.a = a;
    q.b = b;
    q.s = s;
    q.M = M;
    return q;
}

QESSextic QESSextic::from_ell(double a, double b, int ell, int M) {
    if (ell < 0) throw validation_error("qes: ell must be non-negative");
    return make(a, b, 0.5 * ell + 0.75, M);
}

int QESSextic::ell() const { return static_cast<int>(std::round(2.0 * s - 1.5)); }

PolynomialPotential qes_potential(const QESSextic& spec) {
    const double mu = spec.a * spec.a - 4.0 * spec.b * (spec.s + 0.5 + spec.M);
    const double sigma = 2.0 * spec.a * spec.b;
    const double eta = spec.b * spec.b;
    if (spec.b == 0.0) return PolynomialPotential::radial(mu, 0.0, 0.0, spec.ell());
    return PolynomialPotential::radial(mu, sigma, eta, spec.ell());
}

std::pair<double, double> lambda_roots(double a, double b, double s) {
    const double disc = a * a + 8.0 * b * s;
    if (disc < 0.0) throw validation_error("qes: negative discriminant a^2 + 8bs");
    const double root = std::sqrt(disc);
    return {0.5 * (a - root), 0.5 * (a + root)};
}

QESLevel qes_solve(const QESSextic& spec, int n) {
    if (n < 0 || n > spec.M)
        throw validation_error("qes: level must satisfy 0 <= n <= M");
    QESLevel level;
    level.n = n;
    const double a = spec.a, b = spec.b, s = spec.s;
    const double power = 2.0 * (s - 0.25);  // = l + 1
    if (spec.M == 0) {
        level.energy = 4.0 * a * s;
        level.psi = [power, a, b](double x) {
            return std::pow(x, power) *
                   std::exp(-0.25 * b * x * x * x * x - 0.5 * a * x * x);
        };
        return level;
    }
    const auto [lm, lp] = lambda_roots(a, b, s);
    const double lambda = n == 0 ? lm : lp;
    level.lambda = lambda;
    level.energy = 4.0 * (a * s + lambda);
    level.psi = [power, a, b, lambda, s](double x) {
        return (1.0 - lambda * x * x / (2.0 * s)) * std::pow(x, power) *
               std::exp(-0.25 * b * x * x * x * x - 0.5 * a * x * x);
    };
    return level;
}

}  // namespace qmspec
