#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmspec/potential.hpp"

namespace qmspec {

/// State constant of the coefficient recurrence:
/// alpha_0 = 1, alpha_n = (n-1) + alpha_{n-1}.
double alpha(int n);

/// Perturbation coefficients j_0..j_N for a trial scale a > 0:
/// j_0 = a,
/// j_N = (2N + 2n + alpha_n)^{-1} (sum_{k<N} j_k j_{N-1-k}
///        - mu d_{N1} - sigma d_{N2} - eta d_{N3}).
std::vector<double> coefficients(const PolynomialPotential& potential, int n,
                                 double a, int order);

/// Order-N eigenvalue condition.  The two modes carry identical roots:
/// the top-order convolution sum_{k<=N} j_k j_{N-k} - sigma d_{N1} - eta d_{N2}
/// equals (2(N+1) + 2n + alpha_n) j_{N+1}, so JnZero evaluates the next
/// coefficient j_{N+1} and TopOrder the convolution form.
enum class ClosureMode { JnZero, TopOrder };

double closure_value(const PolynomialPotential& potential, int n, double a,
                     int order, ClosureMode mode);

struct ScanWindow {
    double lo = 0.01;
    double hi = 5.0;
    int samples = 1024;
};

/// Default window: (0.01, max(5, 2(1 + sigma^{1/3} + eta^{1/4})(n+1))], 1024 samples.
ScanWindow default_scan(const PolynomialPotential& potential, int n);

/// All sign-change-bracketed roots of the closure condition in (lo, hi],
/// bisected to relative 1e-12, ascending, deduplicated at relative 1e-9.
/// Local |closure| minima without a sign change are re-scanned at finer
/// resolution so nearly-merged root pairs are still caught.
/// Throws no_root_error when the window contains no root.
std::vector<double> order_roots(const PolynomialPotential& potential, int n,
                                int order, ClosureMode mode, const ScanWindow& scan);

/// E(N, n) = (2n+1) a* with a* the largest positive root ("upper root").
double energy_at_order(const PolynomialPotential& potential, int n, int order,
                       ClosureMode mode = ClosureMode::JnZero);
double energy_at_order(const PolynomialPotential& potential, int n, int order,
                       ClosureMode mode, const ScanWindow& scan);

/// Solved hierarchy state at one order.
struct HierarchyState {
    PolynomialPotential potential;
    int n = 0;
    int order = 0;
    double alpha_n = 1.0;
    std::vector<double> coefficients;  ///< j_0..j_order at the selected root
    double root = 0.0;                 ///< a* (= j_0)
    double energy = 0.0;               ///< (2n+1) a*
};

HierarchyState solve_state(const PolynomialPotential& potential, int n, int order,
                           ClosureMode mode = ClosureMode::JnZero);
HierarchyState solve_state(const PolynomialPotential& potential, int n, int order,
                           ClosureMode mode, const ScanWindow& scan);

/// Per-order energy estimates with oscillation diagnostics.
struct ConvergenceTrace {
    struct Estimate {
        int order = 0;
        bool found = false;
        double energy = 0.0;
    };
    struct Delta {
        int order = 0;        ///< later order of the pair (orders order-1, order)
        double value = 0.0;   ///< |E(order) - E(order-1)|
        int sign = 0;         ///< sign of E(order) - E(order-1)
    };
    std::vector<Estimate> estimates;
    std::vector<Delta> deltas;
    std::vector<int> missing_orders;
    int best_order = 0;
    double best_energy = 0.0;
    std::pair<int, int> stable_window{0, 0};  ///< order range, inclusive
};

/// Sweep N = 1..n_max; best_order is the order whose arrival produced the
/// smallest |E(N) - E(N-1)| (first minimum on ties).  Orders without a root
/// are flagged and skipped.  Throws no_root_error if no order had a root.
ConvergenceTrace sweep(const PolynomialPotential& potential, int n, int n_max,
                       ClosureMode mode = ClosureMode::JnZero);
ConvergenceTrace sweep(const PolynomialPotential& potential, int n, int n_max,
                       ClosureMode mode, const ScanWindow& scan);

/// Unnormalized Psi(x) = H_n(sqrt(a*) x) exp(-sum_M j_M x^{2M+2}/(2M+2)),
/// valid for n = 0 and n = 1 only.
double ground_wavefunction(const HierarchyState& state, double x);

/// max over the grid of |dQ(x) + 2 dW(x)/g'| where dW = -h'/h comes from a
/// numerical log-derivative of the moderating factor and dQ from its series.
double susy_bridge_residual(const HierarchyState& state, std::span<const double> grid);

}  // namespace qmspec
