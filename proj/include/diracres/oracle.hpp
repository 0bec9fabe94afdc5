#pragma once

#include <functional>
#include <vector>

#include "diracres/plane.hpp"
#include "diracres/potential.hpp"

namespace diracres {
namespace oracle {

/// Piecewise-constant specialization used as independent ground truth.
struct PiecewiseConstantPotential {
    struct Cell {
        double lo, hi;
        double p1, p2, q;
    };
    double m;
    double gamma;
    std::vector<Cell> cells;

    Potential to_potential(bool is_free = false) const;
};

/// Transfer matrix from gamma down to x=0 by closed-form cell exponentials
/// (cosh/sinh of the constant-coefficient system, written in even-in-k form),
/// plus the Jost value f1(0,lambda) assembled on the point's branch.
/// Shares no integration code with the ODE route.
struct TransferResult {
    Mat2c T;        // propagator y(0) = T y(gamma)
    Vec2c theta0;   // T * theta(gamma)
    Vec2c phi0;     // T * phi(gamma)
    Cplx f1;
    Cplx f2;
};
TransferResult transfer_matrix_closed_form(const PiecewiseConstantPotential& P,
                                           const SpectralPoint& pt);

/// Grid scan for zero candidates of |f|: strict local minima below
/// `threshold_factor` times the median grid value, plus real-axis sign
/// changes when the function is real there.
struct Candidate {
    Cplx z;
    double absf;
};
std::vector<Candidate> brute_force_zero_scan(const std::function<Cplx(Cplx)>& f,
                                             double x0, double x1, double y0,
                                             double y1, double grid_step,
                                             double threshold_factor = 1e-2);

}  // namespace oracle
}  // namespace diracres
