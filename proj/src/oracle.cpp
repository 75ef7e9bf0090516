#include "qmspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmspec {

namespace {

constexpr double kRescaleLimit = 1e250;

struct Shot {
    int nodes = 0;
    double defect = 0.0;  ///< u at the outer boundary (sign meaningful only)
};

/// Numerov march on a uniform grid of nodes x_0..x_{m-1}.  The left boundary
/// condition is folded into the seed pair (u_0, u_1), so the potential is
/// only ever evaluated at the stored nodes.
struct Integrator {
    std::vector<double> v;  ///< V at the nodes
    double h = 0.0;
    LeftBC bc = LeftBC::Dirichlet;
    bool origin_series = false;  ///< Dirichlet with x_min = 0
    double seed0 = 0.0, seed1 = 0.0;  ///< series seeds (origin case)

    Shot shoot(double E) const {
        const int m = static_cast<int>(v.size());
        const double h2 = h * h / 12.0;
        auto t = [&](int j) { return h2 * (v[j] - E); };
        double u0, u1;
        if (origin_series) {
            u0 = seed0;
            u1 = seed1;
        } else if (bc == LeftBC::EvenParity) {
            u0 = 1.0;
            u1 = (1.0 + 5.0 * t(0)) * u0 / (1.0 - t(1));
        } else {
            // u vanishes one step left of node 0 (hard wall / odd parity)
            u0 = h;
            u1 = (2.0 + 10.0 * t(0)) * u0 / (1.0 - t(1));
        }
        Shot shot;
        if (u1 * u0 < 0.0) ++shot.nodes;
        double t_prev = t(0), t_cur = t(1);
        for (int j = 2; j < m; ++j) {
            const double t_next = t(j);
            double u2 = ((2.0 + 10.0 * t_cur) * u1 - (1.0 - t_prev) * u0) /
                        (1.0 - t_next);
            if (u2 * u1 < 0.0) ++shot.nodes;
            if (std::abs(u2) > kRescaleLimit) {
                u2 *= 1e-250;
                u1 *= 1e-250;
            }
            u0 = u1;
            u1 = u2;
            t_prev = t_cur;
            t_cur = t_next;
        }
        shot.defect = u1;
        return shot;
    }
};

/// Residue of the regular potential part at the origin (coefficient of 1/x),
/// by linear extrapolation of x*(V - centrifugal) to x = 0.
double origin_residue(const std::function<double(double)>& V, int ell, double h) {
    const double cf = static_cast<double>(ell) * (ell + 1);
    auto reg = [&](double x) { return x * (V(x) - cf / (x * x)); };
    const double xa = h / 8.0, xb = h / 4.0;
    const double fa = reg(xa), fb = reg(xb);
    return fa - xa * (fb - fa) / (xb - xa);
}

Integrator make_integrator(const std::function<double(double)>& V,
                           const Discretization& disc, int points) {
    Integrator in;
    in.bc = disc.bc_left;
    if (disc.bc_left == LeftBC::EvenParity) {
        in.h = disc.x_max / (points - 1);
        in.v.resize(points);
        for (int i = 0; i < points; ++i) in.v[i] = V(i * in.h);
        return in;
    }
    // Dirichlet and odd parity: nodes at x_min + (i+1) h, wall one step left
    in.h = (disc.x_max - disc.x_min) / points;
    in.v.resize(points);
    for (int i = 0; i < points; ++i) in.v[i] = V(disc.x_min + (i + 1) * in.h);
    if (disc.bc_left == LeftBC::Dirichlet && disc.x_min == 0.0) {
        in.origin_series = true;
        const double c1 = origin_residue(V, disc.ell, in.h) / (2.0 * (disc.ell + 1));
        in.seed0 = std::pow(in.h, disc.ell + 1) * (1.0 + c1 * in.h);
        in.seed1 = std::pow(2.0 * in.h, disc.ell + 1) * (1.0 + c1 * 2.0 * in.h);
    }
    return in;
}

double solve_single_grid(const std::function<double(double)>& V,
                         const Discretization& disc, int points, int k) {
    const Integrator in = make_integrator(V, disc, points);
    auto nodes = [&](double E) { return in.shoot(E).nodes; };
    auto defect = [&](double E) { return in.shoot(E).defect; };

    double e_lo = *std::min_element(in.v.begin(), in.v.end());
    e_lo = std::min(e_lo, 0.0) - 1.0;
    double e_hi = e_lo + 1.0;
    int guard = 0;
    while (nodes(e_hi) <= k) {
        e_hi += std::max(1.0, 0.5 * std::abs(e_hi));
        if (++guard > 400)
            throw not_converged_error("numerov: node-count bracket not established");
    }
    double lo = e_lo, hi = e_hi;
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (nodes(mid) <= k)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-10 * std::max(1.0, std::abs(mid))) break;
    }
    double a = lo, b = hi;
    double fa = defect(a);
    for (int it = 0; it < 140; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = defect(mid);
        if (fa * fm <= 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a < 1e-14 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (a + b);
}

int sturm_count_below(const std::vector<double>& d, double off_sq, double lambda,
                      double pivmin) {
    int count = 0;
    double q = d[0] - lambda;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (std::abs(q) < pivmin) q = -pivmin;
        q = (d[i] - lambda) - off_sq / q;
        if (q < 0.0) ++count;
    }
    return count;
}

struct FdGrid {
    std::vector<double> d;
    double e = 0.0;
    double h = 0.0;
};

FdGrid make_fd(const std::function<double(double)>& V, const Discretization& disc,
               int m) {
    FdGrid g;
    g.d.resize(m);
    if (disc.bc_left == LeftBC::Dirichlet) {
        g.h = (disc.x_max - disc.x_min) / (m + 1);
        for (int i = 0; i < m; ++i)
            g.d[i] = 2.0 / (g.h * g.h) + V(disc.x_min + (i + 1) * g.h);
    } else {
        // staggered half-integer grid keeps the parity-reduced matrix symmetric
        g.h = disc.x_max / (m + 0.5);
        for (int i = 0; i < m; ++i)
            g.d[i] = 2.0 / (g.h * g.h) + V((i + 0.5) * g.h);
        g.d[0] = (disc.bc_left == LeftBC::EvenParity ? 1.0 : 3.0) / (g.h * g.h) +
                 V(0.5 * g.h);
    }
    g.e = -1.0 / (g.h * g.h);
    return g;
}

std::vector<double> fd_levels(const FdGrid& g, int count) {
    const double off = std::abs(g.e);
    const double dmin = *std::min_element(g.d.begin(), g.d.end());
    const double dmax = *std::max_element(g.d.begin(), g.d.end());
    const double pivmin =
        std::numeric_limits<double>::epsilon() * off * off * 1e-3 + 1e-300;
    const double off_sq = g.e * g.e;
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) {
        double lo = dmin - 2.0 * off, hi = dmax + 2.0 * off;
        while (hi - lo > 1e-12 + 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(lo), std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count_below(g.d, off_sq, mid, pivmin) <= k)
                lo = mid;
            else
                hi = mid;
        }
        out[k] = 0.5 * (lo + hi);
    }
    return out;
}

/// Interior sign changes of the eigenvector belonging to lambda,
/// from two inverse-iteration sweeps with a fixed deterministic seed.
int fd_node_count(const FdGrid& g, double lambda) {
    const int m = static_cast<int>(g.d.size());
    const double shift = lambda + std::max(1e-9, 1e-9 * std::abs(lambda));
    std::vector<double> v(m), diag(m), mul(m);
    for (int i = 0; i < m; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i);
    for (int sweep = 0; sweep < 2; ++sweep) {
        diag[0] = g.d[0] - shift;
        for (int i = 1; i < m; ++i) {
            const double w = g.e / (diag[i - 1] == 0.0 ? 1e-300 : diag[i - 1]);
            mul[i] = w;
            diag[i] = (g.d[i] - shift) - w * g.e;
        }
        for (int i = 1; i < m; ++i) v[i] -= mul[i] * v[i - 1];
        v[m - 1] /= (diag[m - 1] == 0.0 ? 1e-300 : diag[m - 1]);
        for (int i = m - 2; i >= 0; --i)
            v[i] = (v[i] - g.e * v[i + 1]) / (diag[i] == 0.0 ? 1e-300 : diag[i]);
        double vmax = 0.0;
        for (double x : v) vmax = std::max(vmax, std::abs(x));
        for (double& x : v) x /= vmax;
    }
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    int nodes = 0;
    double last = 0.0;
    for (double x : v) {
        if (std::abs(x) < 1e-10 * vmax) continue;
        if (last != 0.0 && x * last < 0.0) ++nodes;
        last = x;
    }
    return nodes;
}

}  // namespace

Discretization Discretization::radial(double x_max, int points, int ell) {
    Discretization d;
    d.x_min = 0.0;
    d.x_max = x_max;
    d.points = points;
    d.bc_left = LeftBC::Dirichlet;
    d.ell = ell;
    d.validate();
    return d;
}

Discretization Discretization::one_dimensional(double x_max, bool even, int points) {
    Discretization d;
    d.x_min = 0.0;
    d.x_max = x_max;
    d.points = points;
    d.bc_left = even ? LeftBC::EvenParity : LeftBC::OddParity;
    d.validate();
    return d;
}

void Discretization::validate() const {
    if (points < 201) throw validation_error("discretization: points must be >= 201");
    if (!(x_max > x_min))
        throw validation_error("discretization: x_max must exceed x_min");
    if (x_min < 0.0) throw validation_error("discretization: x_min must be >= 0");
    if (bc_left != LeftBC::Dirichlet && x_min != 0.0)
        throw validation_error("discretization: parity conditions require x_min = 0");
    if (ell < 0) throw validation_error("discretization: ell must be >= 0");
}

double numerov_eigenvalue(const std::function<double(double)>& V,
                          const Discretization& disc, int k) {
    disc.validate();
    if (k < 0) throw validation_error("numerov: level index must be >= 0");
    const double e1 = solve_single_grid(V, disc, disc.points, k);
    const int fine = disc.bc_left == LeftBC::EvenParity ? 2 * disc.points - 1
                                                        : 2 * disc.points;
    const double e2 = solve_single_grid(V, disc, fine, k);
    const double extrapolated = e2 + (e2 - e1) / 15.0;
    const double err = std::abs(e2 - e1) / 15.0;
    if (err > std::max(1e-7, 1e-9 * std::abs(extrapolated)))
        throw not_converged_error("numerov: two-grid check above tolerance");
    return extrapolated;
}

OracleResult fd_spectrum(const std::function<double(double)>& V,
                         const Discretization& disc, int count) {
    disc.validate();
    if (count < 1) throw validation_error("fd_spectrum: count must be >= 1");
    if (count > disc.points / 10)
        throw validation_error("fd_spectrum: count must be <= points/10");
    const FdGrid coarse = make_fd(V, disc, disc.points);
    const FdGrid fine = make_fd(V, disc, 2 * disc.points);
    OracleResult res;
    res.coarse_eigenvalues = fd_levels(coarse, count);
    res.fine_eigenvalues = fd_levels(fine, count);
    const double r = fine.h * fine.h / (coarse.h * coarse.h - fine.h * fine.h);
    for (int k = 0; k < count; ++k) {
        const double ext = res.fine_eigenvalues[k] +
                           (res.fine_eigenvalues[k] - res.coarse_eigenvalues[k]) * r;
        res.eigenvalues.push_back(ext);
        const double shift = std::abs(ext - res.fine_eigenvalues[k]);
        res.extrapolation_shifts.push_back(shift);
        if (shift > 1e-5) res.coarse_warning = true;
        res.node_counts.push_back(fd_node_count(fine, res.fine_eigenvalues[k]));
    }
    return res;
}

double numerov_1d_level(const std::function<double(double)>& V, double x_max, int n,
                        int points) {
    return numerov_eigenvalue(
        V, Discretization::one_dimensional(x_max, n % 2 == 0, points), n / 2);
}

double fd_1d_level(const std::function<double(double)>& V, double x_max, int n,
                   int points) {
    const auto disc = Discretization::one_dimensional(x_max, n % 2 == 0, points);
    return fd_spectrum(V, disc, n / 2 + 1).eigenvalues[n / 2];
}

double suppression_radius(const std::function<double(double)>& V, double e_guess,
                          double pad) {
    // outer turning point, stepping over any inner centrifugal barrier
    double x = 0.25;
    double v_min = V(x);
    for (double t = x; t < 1e4; t *= 1.1) {
        const double vt = V(t);
        if (vt < v_min) {
            v_min = vt;
            x = t;
        }
    }
    int guard = 0;
    while (V(x) < e_guess) {
        x *= 1.1;
        if (++guard > 400)
            throw not_converged_error("suppression_radius: no turning point found");
    }
    const double dx = 0.01 * x;
    double action = 0.0;
    while (action < pad) {
        const double v = V(x + 0.5 * dx) - e_guess;
        if (v > 0.0) action += std::sqrt(v) * dx;
        x += dx;
    }
    while (V(x) < e_guess + 25.0) x *= 1.05;
    return x;
}

double edp_selfconsistent(const EDPSpec& spec, double theta, double tol, int max_iter,
                          FixedPointTrace* trace) {
    if (theta <= 0.0 || theta > 1.0)
        throw validation_error("edp_selfconsistent: theta must lie in (0, 1]");
    double E = spec.es_energy();
    if (trace) {
        trace->energies.assign(1, E);
        trace->iterations = 0;
    }
    for (int it = 0; it < max_iter; ++it) {
        if (spec.family == EDPFamily::Harmonic && 1.0 + spec.gamma * E <= 0.0)
            throw breakdown_error("edp_selfconsistent: 1 + gamma E <= 0");
        auto dressed = [&spec, E](double x) { return spec.potential(x, E); };
        const double guess =
            spec.family == EDPFamily::Harmonic ? std::max(E, spec.es_energy()) : E;
        const double x_max = suppression_radius(dressed, guess);
        const auto disc = Discretization::radial(x_max, 3001, spec.l);
        const double inner = numerov_eigenvalue(dressed, disc, spec.n);
        const double next = (1.0 - theta) * E + theta * inner;
        const double step = std::abs(next - E);
        E = next;
        if (trace) {
            trace->energies.push_back(E);
            trace->iterations = it + 1;
        }
        if (step < tol) return E;
    }
    throw not_converged_error("edp_selfconsistent: max_iter exceeded");
}

double schrodinger_residual(const std::function<double(double)>& psi,
                            const std::function<double(double)>& V, double E,
                            std::span<const double> grid) {
    if (grid.size() < 8) throw validation_error("residual: grid too small");
    const double h = grid[1] - grid[0];
    std::vector<double> vals(grid.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = psi(grid[i]);
        vmax = std::max(vmax, std::abs(vals[i]));
    }
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (vals[i] * vals[i + 1] < 0.0) nodes.push_back(i);
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bool excluded = std::abs(vals[i]) < 1e-13 * vmax;
        for (std::size_t nd : nodes) {
            const auto d = i > nd ? i - nd : nd - i;
            if (d <= 10) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        const double x = grid[i];
        const double second = (-psi(x - 2 * h) + 16.0 * psi(x - h) - 30.0 * vals[i] +
                               16.0 * psi(x + h) - psi(x + 2 * h)) /
                              (12.0 * h * h);
        worst = std::max(worst, std::abs(second / vals[i] - V(x) + E));
        ++used;
    }
    if (used == 0)
        throw grid_error("residual: every grid point fell in a node-exclusion zone");
    return worst;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw validation_error("uniform_grid: bad range");
    std::vector<double> g(points);
    const double h = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = lo + i * h;
    return g;
}

}  // namespace qmspec
