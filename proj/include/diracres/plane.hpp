#pragma once

#include "diracres/types.hpp"

namespace diracres {

/// Chart of the two-sheeted surface over the cut plane C \ [-m,m].
/// PhysicalUpper covers C_+ together with the upper rim g+ of the gap,
/// NonPhysical covers C_- together with the lower rim g-.
enum class Sheet { PhysicalUpper, NonPhysical };

/// Energy lambda with its sheet tag and the consistent quasi-momentum
/// k = sqrt(lambda^2 - m^2), branch fixed by k > 0 for lambda > m,
/// k < 0 for lambda < -m, Im k > 0 exactly on the physical sheet.
struct SpectralPoint {
    Cplx lambda;
    Sheet sheet;
    Cplx k;
    double m;
};

/// Branch of k analytic on C \ [-m,m] (principal-sqrt product form).
/// For real lambda inside the gap this returns the C_+ limit +i sqrt(m^2-l^2).
Cplx k_branch(Cplx lambda, double m);

/// Build a SpectralPoint. Throws at the branch points lambda = +-m unless
/// virtual_probe is set (then a point offset is accepted as-is).
/// For lambda in the open gap (-m,m) the sheet selects the rim:
/// k = +i sqrt(m^2-l^2) on g+, -i sqrt(m^2-l^2) on g-. For nonreal lambda the
/// sheet must agree with the half-plane.
SpectralPoint quasimomentum(Cplx lambda, double m, Sheet sheet,
                            bool virtual_probe = false);

/// k0 = (lambda+m)/(i k): Wronskian of the free Jost pair; 1/k0 is the
/// Titchmarsh-Weyl function m0.
Cplx k0_of(const SpectralPoint& pt);
Cplx m0_of(const SpectralPoint& pt);

/// sin(k x)/k as an even (hence entire in lambda) function of k; switches to
/// the Taylor form for |k x| < 1e-3.
Cplx sin_kx_over_k(Cplx k, double x);
/// cos(k x), series-guarded the same way.
Cplx cos_kx(Cplx k, double x);

/// Free fundamental matrix M0(x,lambda), columns theta and phi, M0(0)=I,
/// det M0 = 1. Entries are even in k, so only lambda and m are needed.
///   M0 = [ cos kx              (lambda+m) sin(kx)/k ]
///        [ (m-lambda) sin(kx)/k   cos kx            ]
Mat2c free_fundamental(double x, Cplx lambda, double m);

/// d/dlambda of M0(x,lambda), entire (used by the variational equation).
Mat2c free_fundamental_dlambda(double x, Cplx lambda, double m);

/// Free Jost solution psi^+(x) = e^{ikx} (k0, 1)^T on the point's branch.
Vec2c free_jost(double x, const SpectralPoint& pt);

/// Kernel of the free resolvent on the point's branch (analytic continuation
/// when the point lies on the non-physical sheet). The off-diagonal entries
/// carry the sgn(x-y) jump; at x == y they take the mean value.
Mat2c free_resolvent_kernel(double x, double y, const SpectralPoint& pt);

/// Same kernel with Im k >= 0 forced: the true resolvent of the self-adjoint
/// free operator for Im lambda != 0 (both half-planes).
Mat2c free_resolvent_kernel_physical(double x, double y, Cplx lambda, double m);

/// Spectral weight rho'(s) = k(s)/(pi (s+m)) for |s| > m.
double spectral_weight(double s, double m);

}  // namespace diracres
