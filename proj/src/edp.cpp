#include "qmspec/edp.hpp"

#include <cmath>
#include <limits>

#include "qmspec/special.hpp"

namespace qmspec {

namespace {

double nu_of(const EDPSpec& s) { return 2.0 * s.n + s.l + 1.5; }
int principal_of(const EDPSpec& s) { return s.n + s.l + 1; }

}  // namespace

EDPSpec EDPSpec::harmonic(double w, double gamma, int n, int l, bool allow_noncoherent) {
    if (w <= 0.0) throw validation_error("edp: frequency w must be positive");
    if (n < 0 || l < 0) throw validation_error("edp: n and l must be non-negative");
    const bool coherent = gamma <= 0.0;
    if (!coherent && !allow_noncoherent)
        throw validation_error("edp: harmonic coupling requires gamma <= 0 "
                               "(pass the override for exploratory use)");
    EDPSpec s;
    s.family = EDPFamily::Harmonic;
    s.w = w;
    s.gamma = gamma;
    s.n = n;
    s.l = l;
    s.noncoherent = !coherent;
    return s;
}

EDPSpec EDPSpec::coulomb(double lambda, double gamma, int n, int l,
                         bool allow_noncoherent) {
    if (lambda >= 0.0) throw validation_error("edp: Coulomb strength must be negative");
    if (n < 0 || l < 0) throw validation_error("edp: n and l must be non-negative");
    const bool coherent = gamma >= 0.0;
    if (!coherent && !allow_noncoherent)
        throw validation_error("edp: Coulomb coupling requires gamma >= 0 "
                               "(pass the override for exploratory use)");
    EDPSpec s;
    s.family = EDPFamily::Coulomb;
    s.lambda = lambda;
    s.gamma = gamma;
    s.n = n;
    s.l = l;
    s.noncoherent = !coherent;
    return s;
}

double EDPSpec::es_energy() const {
    if (family == EDPFamily::Harmonic) return nu_of(*this) * w;
    const int p = principal_of(*this);
    return -lambda * lambda / (4.0 * p * p);
}

double EDPSpec::potential(double x, double E) const {
    const double cf = static_cast<double>(l) * (l + 1) / (x * x);
    if (family == EDPFamily::Harmonic)
        return 0.25 * w * w * x * x * (1.0 + gamma * E) + cf;
    return (lambda / x) * (1.0 + gamma * E) + cf;
}

double edp_coulomb_root_quadratic(double lambda, double gamma, int n, int l) {
    const double p = n + l + 1;
    const double g2l2 = gamma * gamma * lambda * lambda;
    return (-2.0 * p * p - gamma * lambda * lambda +
            2.0 * p * std::sqrt(p * p + gamma * lambda * lambda)) /
           g2l2;
}

double edp_coulomb_root_resolvent(double lambda, double gamma, int n, int l) {
    const double p = n + l + 1;
    return -1.0 / (gamma + (2.0 / (lambda * lambda)) * p *
                               (p + std::sqrt(p * p + gamma * lambda * lambda)));
}

EDPResult edp_energy(const EDPSpec& spec) {
    EDPResult res;
    res.noncoherent = spec.noncoherent;
    const double es = spec.es_energy();
    if (spec.family == EDPFamily::Harmonic) {
        const double nu = nu_of(spec), w = spec.w, g = spec.gamma;
        const double disc = w * w * g * g * nu * nu + 4.0;
        const double first = 0.5 * w * w * g * nu * nu;
        const double second = 0.5 * nu * w * std::sqrt(disc);
        res.energy_plus = first + second;
        res.energy_minus = first - second;
        const double arg = 1.0 + g * res.energy_plus;
        if (arg <= 0.0)
            throw breakdown_error("edp: spectrum breakdown, 1 + gamma E+ <= 0");
        res.delta_e = (std::sqrt(arg) - 1.0) * nu * w;
        if (std::abs(res.energy_plus - es - res.delta_e) >
            1e-10 * std::max(1.0, std::abs(res.energy_plus)))
            throw not_converged_error("edp: closed form failed the dE cross-check");
        const double tau = std::sqrt(arg);
        const double wq = 0.25 * w;
        res.h = [wq, tau](double x) { return std::exp(wq * x * x * (1.0 - tau)); };
        res.g_effective = [w, tau](double x) { return 0.5 * w * x * x * tau; };
    } else {
        const double g = spec.gamma;
        if (g == 0.0) {
            res.energy_plus = es;
            // limit of the quadratic pair as gamma -> 0: the partner recedes
            res.energy_minus = -std::numeric_limits<double>::infinity();
        } else {
            res.energy_plus = edp_coulomb_root_quadratic(spec.lambda, g, spec.n, spec.l);
            const double p = principal_of(spec);
            res.energy_minus = (-2.0 * p * p - g * spec.lambda * spec.lambda -
                                2.0 * p * std::sqrt(p * p + g * spec.lambda * spec.lambda)) /
                               (g * g * spec.lambda * spec.lambda);
        }
        const double E = res.energy_plus;
        const double p = principal_of(spec);
        res.delta_e = -spec.lambda * spec.lambda * g * E * (1.0 + 0.5 * g * E) /
                      (2.0 * p * p);
        if (std::abs(E - es - res.delta_e) > 1e-10 * std::max(1.0, std::abs(E)))
            throw not_converged_error("edp: closed form failed the dE cross-check");
        const double lam = spec.lambda;
        res.h = [g, E, lam, p](double x) {
            return std::exp(g * E * lam * x / (2.0 * p));
        };
        res.g_effective = [lam, g, E, p](double x) {
            return -lam * (1.0 + g * E) * x / p;
        };
    }
    const auto geff = res.g_effective;
    if (spec.family == EDPFamily::Harmonic) {
        const int n = spec.n, l = spec.l;
        res.psi = [n, l, geff](double x) {
            const double g = geff(x);
            return std::pow(x, l + 1) * std::exp(-0.5 * g) * laguerre(n, l + 0.5, g);
        };
    } else {
        const int n = spec.n, l = spec.l;
        const int p = principal_of(spec);
        const double lam = spec.lambda, g = spec.gamma, E = res.energy_plus;
        res.psi = [n, l, p, lam, g, E, geff](double x) {
            return std::pow(x, l + 1) *
                   std::exp(lam * (1.0 + g * E) * x / (2.0 * p)) *
                   laguerre(n, 2 * l + 1, geff(x));
        };
    }
    return res;
}

double edp_wavefunction(const EDPSpec& spec, const EDPResult& result, double x) {
    if (x <= 0.0) throw validation_error("edp: wavefunction domain is x > 0");
    (void)spec;
    return result.psi(x);
}

double self_consistency_residual(const EDPSpec& spec, double E) {
    if (spec.family == EDPFamily::Harmonic) {
        const double arg = 1.0 + spec.gamma * E;
        if (arg <= 0.0)
            throw breakdown_error("edp: residual outside domain, 1 + gamma E <= 0");
        return std::abs(E - nu_of(spec) * spec.w * std::sqrt(arg));
    }
    const double p = principal_of(spec);
    const double de = -spec.lambda * spec.lambda * spec.gamma * E *
                      (1.0 + 0.5 * spec.gamma * E) / (2.0 * p * p);
    return std::abs(E - spec.es_energy() - de);
}

}  // namespace qmspec
