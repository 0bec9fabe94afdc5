#pragma once

#include <vector>

#include "diracres/jost.hpp"
#include "diracres/potential.hpp"

namespace diracres {

/// Scattering data along a ray of the continuous spectrum.
struct PhaseTrace {
    std::vector<double> lambda;
    std::vector<Cplx> S;          // unimodular
    std::vector<double> phi_sc;   // continuous branch, anchored by Omega0 at
                                  // the largest |lambda|
    std::vector<double> omega;    // Omega(lambda)
};

/// Omega(lambda) = int_0^gamma [ p1 (l+m)/k sin^2 kt + p2 k/(l+m) cos^2 kt
///                              + q sin 2kt ] dt for |lambda| > m, 0 on the
/// gap; exact trig-polynomial antiderivatives per segment.
double omega(double lambda, const Potential& P);

/// S(l) = -conj(f1(0,l+i0))/f1(0,l+i0) for real |l| > m.
Cplx scattering_matrix(double lambda, const Potential& P, double tol = 1e-11);

/// Phase trace on a grid along one spectral ray (all entries of `grid` must
/// have the same sign and |l| > m). Unwrapping is anchored at the largest
/// |lambda| by phi_sc -> Omega0 and propagated inward.
PhaseTrace scattering_phase(const std::vector<double>& grid, const Potential& P,
                            double tol = 1e-11);

}  // namespace diracres
