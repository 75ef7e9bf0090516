#include "qmspec/potential.hpp"

namespace qmspec {

namespace {

void check_confining(double mu, double sigma, double eta) {
    if (mu == 0.0 && sigma == 0.0 && eta == 0.0)
        throw validation_error("potential: at least one of mu, sigma, eta must be nonzero");
    if (eta < 0.0)
        throw validation_error("potential: eta must be non-negative");
    if (eta == 0.0 && sigma < 0.0)
        throw validation_error("potential: sigma must be non-negative when eta = 0");
    if (eta == 0.0 && sigma == 0.0 && mu <= 0.0)
        throw validation_error("potential: mu must be positive for a pure quadratic well");
}

}  // namespace

PolynomialPotential PolynomialPotential::one_dimensional(double mu, double sigma,
                                                          double eta) {
    check_confining(mu, sigma, eta);
    return {mu, sigma, eta, std::nullopt};
}

PolynomialPotential PolynomialPotential::radial(double mu, double sigma, double eta,
                                                int ell) {
    check_confining(mu, sigma, eta);
    if (ell < 0) throw validation_error("potential: ell must be non-negative");
    return {mu, sigma, eta, ell};
}

}  // namespace qmspec
