#include "qmspec/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmspec {

namespace {

void require_1d(const PolynomialPotential& potential) {
    if (potential.is_radial())
        throw validation_error("hierarchy: only the 1-D potential flavor is supported");
}

double closure_from_coefficients(const std::vector<double>& j,
                                 const PolynomialPotential& p, int order,
                                 ClosureMode mode) {
    if (mode == ClosureMode::JnZero) return j[order + 1];
    double conv = 0.0;
    for (int k = 0; k <= order; ++k) conv += j[k] * j[order - k];
    if (order == 1) conv -= p.sigma;
    if (order == 2) conv -= p.eta;
    return conv;
}

using ClosureFn = std::function<double(double)>;

double bisect(const ClosureFn& f, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fa * fm <= 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a <= 1e-13 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (a + b);
}

/// Sign-change scan with recursive refinement of |f| dips (no sign change but
/// a local minimum of |f|), catching nearly-merged root pairs.
void scan_roots(const ClosureFn& f, double lo, double hi, int samples, int depth,
                std::vector<double>& out) {
    std::vector<double> xs(samples), vals(samples);
    const double step = (hi - lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        xs[i] = lo + i * step;
        vals[i] = f(xs[i]);
    }
    for (int i = 0; i + 1 < samples; ++i) {
        if (vals[i] == 0.0)
            out.push_back(xs[i]);
        else if (vals[i] * vals[i + 1] < 0.0)
            out.push_back(bisect(f, xs[i], xs[i + 1], vals[i]));
    }
    if (vals.back() == 0.0) out.push_back(xs.back());
    if (depth >= 2) return;
    for (int i = 1; i + 1 < samples; ++i) {
        const double am = std::abs(vals[i - 1]), ac = std::abs(vals[i]),
                     ap = std::abs(vals[i + 1]);
        if (ac < am && ac < ap && vals[i - 1] * vals[i] > 0.0 &&
            vals[i] * vals[i + 1] > 0.0)
            scan_roots(f, xs[i - 1], xs[i + 1], 65, depth + 1, out);
    }
}

}  // namespace

double alpha(int n) {
    if (n < 0) throw validation_error("hierarchy: n must be non-negative");
    double a = 1.0;
    for (int k = 1; k <= n; ++k) a += k - 1;
    return a;
}

std::vector<double> coefficients(const PolynomialPotential& potential, int n, double a,
                                 int order) {
    require_1d(potential);
    if (a <= 0.0) throw validation_error("hierarchy: trial scale a must be positive");
    if (n < 0 || order < 0) throw validation_error("hierarchy: n, order must be >= 0");
    const double an = alpha(n);
    std::vector<double> j(order + 1);
    j[0] = a;
    for (int m = 1; m <= order; ++m) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += j[k] * j[m - 1 - k];
        if (m == 1) s -= potential.mu;
        if (m == 2) s -= potential.sigma;
        if (m == 3) s -= potential.eta;
        j[m] = s / (2.0 * m + 2.0 * n + an);
    }
    return j;
}

double closure_value(const PolynomialPotential& potential, int n, double a, int order,
                     ClosureMode mode) {
    if (order < 1) throw validation_error("hierarchy: closure order must be >= 1");
    const auto j = coefficients(potential, n, a,
                                mode == ClosureMode::JnZero ? order + 1 : order);
    return closure_from_coefficients(j, potential, order, mode);
}

ScanWindow default_scan(const PolynomialPotential& potential, int n) {
    ScanWindow w;
    w.hi = std::max(5.0, 2.0 *
                             (1.0 + std::cbrt(std::abs(potential.sigma)) +
                              std::pow(std::abs(potential.eta), 0.25)) *
                             (n + 1));
    return w;
}

std::vector<double> order_roots(const PolynomialPotential& potential, int n, int order,
                                ClosureMode mode, const ScanWindow& scan) {
    require_1d(potential);
    if (!(0.0 < scan.lo && scan.lo < scan.hi))
        throw validation_error("hierarchy: scan window requires 0 < lo < hi");
    if (scan.samples < 64) throw validation_error("hierarchy: need >= 64 scan samples");
    ClosureFn f = [&](double a) { return closure_value(potential, n, a, order, mode); };
    std::vector<double> roots;
    scan_roots(f, scan.lo, scan.hi, scan.samples, 0, roots);
    std::sort(roots.begin(), roots.end());
    std::vector<double> dedup;
    for (double r : roots) {
        if (r <= 0.0) continue;
        if (dedup.empty() || r - dedup.back() > 1e-9 * std::max(1.0, std::abs(r)))
            dedup.push_back(r);
    }
    if (dedup.empty())
        throw no_root_error("hierarchy: no closure root in the scan window");
    return dedup;
}

double energy_at_order(const PolynomialPotential& potential, int n, int order,
                       ClosureMode mode) {
    return energy_at_order(potential, n, order, mode, default_scan(potential, n));
}

double energy_at_order(const PolynomialPotential& potential, int n, int order,
                       ClosureMode mode, const ScanWindow& scan) {
    const auto roots = order_roots(potential, n, order, mode, scan);
    return (2.0 * n + 1.0) * roots.back();
}

HierarchyState solve_state(const PolynomialPotential& potential, int n, int order,
                           ClosureMode mode) {
    return solve_state(potential, n, order, mode, default_scan(potential, n));
}

HierarchyState solve_state(const PolynomialPotential& potential, int n, int order,
                           ClosureMode mode, const ScanWindow& scan) {
    const auto roots = order_roots(potential, n, order, mode, scan);
    HierarchyState st;
    st.potential = potential;
    st.n = n;
    st.order = order;
    st.alpha_n = alpha(n);
    st.root = roots.back();
    st.coefficients = coefficients(potential, n, st.root, order);
    st.energy = (2.0 * n + 1.0) * st.root;
    return st;
}

ConvergenceTrace sweep(const PolynomialPotential& potential, int n, int n_max,
                       ClosureMode mode) {
    return sweep(potential, n, n_max, mode, default_scan(potential, n));
}

ConvergenceTrace sweep(const PolynomialPotential& potential, int n, int n_max,
                       ClosureMode mode, const ScanWindow& scan) {
    if (n_max < 3) throw validation_error("hierarchy: sweep needs n_max >= 3");
    ConvergenceTrace trace;
    for (int order = 1; order <= n_max; ++order) {
        ConvergenceTrace::Estimate est;
        est.order = order;
        try {
            est.energy = energy_at_order(potential, n, order, mode, scan);
            est.found = true;
        } catch (const no_root_error&) {
            est.found = false;
            trace.missing_orders.push_back(order);
        }
        trace.estimates.push_back(est);
    }
    for (std::size_t i = 1; i < trace.estimates.size(); ++i) {
        const auto& prev = trace.estimates[i - 1];
        const auto& cur = trace.estimates[i];
        if (!prev.found || !cur.found) continue;
        ConvergenceTrace::Delta d;
        d.order = cur.order;
        const double diff = cur.energy - prev.energy;
        d.value = std::abs(diff);
        d.sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        trace.deltas.push_back(d);
    }
    if (trace.deltas.empty()) {
        // fewer than two usable orders: fall back to the last found estimate
        for (const auto& est : trace.estimates)
            if (est.found) {
                trace.best_order = est.order;
                trace.best_energy = est.energy;
            }
        if (trace.best_order == 0)
            throw no_root_error("hierarchy: sweep found no roots at any order");
        trace.stable_window = {trace.best_order, trace.best_order};
        return trace;
    }
    const auto best = std::min_element(
        trace.deltas.begin(), trace.deltas.end(),
        [](const auto& a, const auto& b) { return a.value < b.value; });
    trace.best_order = best->order;
    for (const auto& est : trace.estimates)
        if (est.order == trace.best_order) trace.best_energy = est.energy;
    const double threshold =
        std::max(10.0 * best->value, 1e-12 * std::abs(trace.best_energy));
    int lo = trace.best_order, hi = trace.best_order;
    for (auto it = best; it != trace.deltas.begin();) {
        --it;
        if (it->value > threshold || it->order + 1 != lo) break;
        lo = it->order;
    }
    for (auto it = best + 1; it != trace.deltas.end(); ++it) {
        if (it->value > threshold || it->order != hi + 1) break;
        hi = it->order;
    }
    trace.stable_window = {lo, hi};
    return trace;
}

double ground_wavefunction(const HierarchyState& state, double x) {
    if (state.n > 1)
        throw validation_error(
            "hierarchy: wavefunctions are assembled for n = 0 and n = 1 only");
    double s = 0.0;
    for (std::size_t m = 0; m < state.coefficients.size(); ++m)
        s += state.coefficients[m] * std::pow(x, 2.0 * m + 2.0) / (2.0 * m + 2.0);
    const double envelope = std::exp(-s);
    if (state.n == 0) return envelope;
    return 2.0 * std::sqrt(state.root) * x * envelope;  // H_1(sqrt(a) x)
}

double susy_bridge_residual(const HierarchyState& state,
                            std::span<const double> grid) {
    if (grid.size() < 5)
        throw validation_error("hierarchy: bridge residual needs >= 5 grid points");
    const double h = grid[1] - grid[0];
    const double gp = std::sqrt(state.root);  // g' for g = sqrt(a) x
    auto log_h = [&state](double x) {
        double s = 0.0;
        for (std::size_t m = 1; m < state.coefficients.size(); ++m)
            s += state.coefficients[m] * std::pow(x, 2.0 * m + 2.0) / (2.0 * m + 2.0);
        return -s;
    };
    auto dq_series = [&state, gp](double x) {
        double s = 0.0;
        for (std::size_t m = 1; m < state.coefficients.size(); ++m)
            s += state.coefficients[m] * std::pow(x, 2.0 * m + 1.0);
        return -2.0 * s / gp;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        // 5-point first derivative of ln h
        const double d = (log_h(x - 2 * h) - 8.0 * log_h(x - h) + 8.0 * log_h(x + h) -
                          log_h(x + 2 * h)) /
                         (12.0 * h);
        const double dw = -d;  // dW = -h'/h
        worst = std::max(worst, std::abs(dq_series(x) + 2.0 * dw / gp));
    }
    return worst;
}

}  // namespace qmspec
