#pragma once

#include <string>
#include <vector>

#include "diracres/jost.hpp"
#include "diracres/potential.hpp"

namespace diracres {

enum class StateClass { Eigenvalue, Resonance, Antibound, Virtual };

std::string to_string(StateClass c);

struct StateRecord {
    Cplx lambda;
    Cplx k;
    StateClass cls;
    int multiplicity = 1;
    double residual = 0.0;  // |F| at the refined root
    int newton_iters = 0;
    bool unresolved_cluster = false;  // winding > 1 below the separation floor
};

struct Rect {
    double x0, x1, y0, y1;
    bool contains(Cplx z, double pad = 0.0) const {
        return z.real() >= x0 - pad && z.real() <= x1 + pad && z.imag() >= y0 - pad &&
               z.imag() <= y1 + pad;
    }
};

struct FindOptions {
    double newton_tol = 1e-11;
    double ode_tol = 1e-11;
    double separation_floor_scale = 1e-6;  // pairs closer than this * (1+r) merge
    int max_subdivisions = 60;
    double boundary_nudge = 1e-6;
};

struct CountingReport {
    std::vector<double> radii;
    std::vector<long> counts;          // N(r): zeros of f1 with Im < 0
    std::vector<double> predicted;     // 2 r gamma / pi
    std::vector<long> sector_counts;   // zeros inside the two delta-sectors
    std::vector<long> sector_outliers; // counts - sector_counts
    double delta = 0.2;
};

/// F(lambda) = (lambda+m) theta~_1(0)^2 + (lambda-m) phi~_1(0)^2, entire; its
/// zeros are exactly the states (with multiplicity).
Cplx F_eval(Cplx lambda, const Potential& P, double tol = 1e-11);

/// F and dF/dlambda via the variational ODE.
void F_eval_with_derivative(Cplx lambda, const Potential& P, Cplx& F, Cplx& dF,
                            double tol = 1e-11);

/// dF/dlambda at a located real eigenvalue, by Richardson-extrapolated central
/// differences (independent of the variational route); must be negative.
double F_derivative_at(double lambda, const Potential& P, double tol = 1e-11);

/// Winding number of F along the rectangle boundary (counterclockwise),
/// with adaptive phase tracking. Throws on irreducible phase jumps.
int winding_number_F(const Rect& r, const Potential& P, double ode_tol = 1e-11,
                     int initial_per_edge = 16);

/// All states of H in the closed region: zeros of F located by recursive
/// subdivision + Newton, classified per the rim values of f1 and the
/// z-chart probes at +-m. Zeros strictly in C_+ are conjugate mirrors of
/// resonances and are dropped after the symmetry check.
std::vector<StateRecord> find_states(const Potential& P, const Rect& region,
                                     const FindOptions& opt = {});

/// Number of antibound states strictly between two consecutive eigenvalues
/// (counted on the lower rim g-); parity theorem says this is odd.
int antibound_parity(const Potential& P, double eig1, double eig2,
                     double tol = 1e-11);

/// N(r) by boundary winding of f1 over the lower half-disk (no interior
/// evaluation), plus per-sector counts at the given half-angle delta.
CountingReport counting_report(const Potential& P, const std::vector<double>& radii,
                               double delta = 0.2, double ode_tol = 1e-10);

struct ForbiddenDomainReport {
    double C1 = 0.0;            // grid estimate of the Theorem constant
    double C1_refined = 0.0;    // same on a doubled grid (reported gap)
    struct Entry {
        Cplx lambda;
        double lhs;     // |l^2 (l + (m-p0) + (|B|^2-4mp0)/(4l))|
        double rhs;     // C1 e^{-2 gamma Im l}
        double margin;  // rhs - lhs
    };
    std::vector<Entry> entries;
    bool all_pass = true;
};

/// Checks the forbidden-domain inequality for every supplied resonance.
ForbiddenDomainReport forbidden_domain_check(const Potential& P,
                                             const std::vector<StateRecord>& states,
                                             double grid_R = 80.0,
                                             int grid_points = 1600);

}  // namespace diracres
