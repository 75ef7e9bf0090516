#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qmspec/edp.hpp"
#include "qmspec/errors.hpp"

namespace qmspec {

enum class LeftBC { Dirichlet, EvenParity, OddParity };

/// Shooting/finite-difference grid description.
///
/// Radial problems use x_min = 0 with a Dirichlet left condition; the
/// integrators never evaluate the potential at the origin (the wavefunction
/// is started from its power-series behaviour x^{l+1}).  1-D problems live
/// on the half line [0, x_max] with a parity condition at 0.
struct Discretization {
    double x_min = 0.0;
    double x_max = 0.0;
    int points = 2001;  ///< >= 201
    LeftBC bc_left = LeftBC::Dirichlet;
    int ell = 0;  ///< angular momentum of the radial problem (series start)

    static Discretization radial(double x_max, int points = 3001, int ell = 0);
    static Discretization one_dimensional(double x_max, bool even, int points = 2001);
    void validate() const;
};

struct OracleResult {
    std::vector<double> eigenvalues;           ///< ascending, Richardson-extrapolated
    std::vector<double> coarse_eigenvalues;    ///< values on the coarse grid
    std::vector<double> fine_eigenvalues;      ///< values on the refined grid
    std::vector<double> extrapolation_shifts;  ///< |extrapolated - fine| per level
    std::vector<int> node_counts;              ///< interior nodes per eigenvector
    bool coarse_warning = false;               ///< extrapolated change exceeded 1e-5
};

/// k-th eigenvalue under the given boundary conditions by Numerov shooting:
/// node-counting bisection brackets the level, the outer-boundary defect is
/// then bisected to convergence, and an (h, h/2) Richardson step removes the
/// leading O(h^4) error.  Throws not_converged_error when no bracket can be
/// established or the二 two-grid check exceeds the 1e-7 accuracy promise.
double numerov_eigenvalue(const std::function<double(double)>& V,
                          const Discretization& disc, int k);

/// Lowest `count` eigenvalues of the symmetric tridiagonal finite-difference
/// Hamiltonian via Sturm-sequence bisection (no external solver), on two
/// grids with Richardson extrapolation; node counts from inverse iteration.
OracleResult fd_spectrum(const std::function<double(double)>& V,
                         const Discretization& disc, int count);

/// Level n of a symmetric 1-D potential on the full line, dispatching parity.
double numerov_1d_level(const std::function<double(double)>& V, double x_max,
                        int n, int points = 2001);
double fd_1d_level(const std::function<double(double)>& V, double x_max,
                   int n, int points = 2000);

/// Smallest x such that the WKB action from the classical turning point
/// reaches `pad` (at least the point where V >= E_guess + 25).
double suppression_radius(const std::function<double(double)>& V, double e_guess,
                          double pad = 28.0);

struct FixedPointTrace {
    std::vector<double> energies;  ///< iterates, starting at E_ES
    int iterations = 0;
};

/// Self-consistent eigenvalue of an energy-dependent potential by damped
/// fixed-point iteration E_{k+1} = (1-theta) E_k + theta eig(V(., E_k)).
double edp_selfconsistent(const EDPSpec& spec, double theta = 0.5,
                          double tol = 1e-10, int max_iter = 60,
                          FixedPointTrace* trace = nullptr);

/// max over the grid of |Psi''/Psi - V + E| with a 5-point stencil whose step
/// equals the grid spacing; points within 10 spacings of a sign change of Psi
/// are excluded.  V must include the centrifugal term where applicable.
double schrodinger_residual(const std::function<double(double)>& psi,
                            const std::function<double(double)>& V, double E,
                            std::span<const double> grid);

/// Uniform grid helper.
std::vector<double> uniform_grid(double lo, double hi, int points);

}  // namespace qmspec
