#include "diracres/plane.hpp"

#include <stdexcept>

namespace diracres {

namespace {
constexpr double SERIES_SWITCH = 1e-3;
const Cplx I1(0.0, 1.0);
}  // namespace

Cplx k_branch(Cplx lambda, double m) {
    // sqrt(l-m)*sqrt(l+m) with principal square roots: analytic off [-m,m],
    // positive for l > m, negative for l < -m, Im k > 0 on C_+.
    return std::sqrt(lambda - m) * std::sqrt(lambda + m);
}

SpectralPoint quasimomentum(Cplx lambda, double m, Sheet sheet, bool virtual_probe) {
    if (!(m > 0.0)) throw std::invalid_argument("quasimomentum: m > 0 required");
    double edge = std::min(std::abs(lambda - m), std::abs(lambda + m));
    if (edge == 0.0 && !virtual_probe)
        throw std::invalid_argument("quasimomentum: lambda at a branch point +-m");

    Cplx k;
    if (lambda.imag() == 0.0) {
        double x = lambda.real();
        if (x > m) {
            k = std::sqrt(x * x - m * m);
        } else if (x < -m) {
            k = -std::sqrt(x * x - m * m);
        } else {
            double r = std::sqrt(std::max(0.0, m * m - x * x));
            k = (sheet == Sheet::PhysicalUpper) ? Cplx(0.0, r) : Cplx(0.0, -r);
        }
    } else {
        k = k_branch(lambda, m);
        bool upper = lambda.imag() > 0.0;
        if (upper != (sheet == Sheet::PhysicalUpper))
            throw std::invalid_argument(
                "quasimomentum: sheet tag inconsistent with the half-plane of lambda");
    }
    return SpectralPoint{lambda, sheet, k, m};
}

Cplx k0_of(const SpectralPoint& pt) {
    if (pt.k == Cplx(0.0))
        throw std::invalid_argument("k0: k = 0 at a branch point");
    return (pt.lambda + pt.m) / (I1 * pt.k);
}

Cplx m0_of(const SpectralPoint& pt) {
    return (I1 * pt.k) / (pt.lambda + pt.m);
}

Cplx sin_kx_over_k(Cplx k, double x) {
    Cplx z = k * x;
    if (std::abs(z) < SERIES_SWITCH) {
        Cplx z2 = z * z;
        // x * (1 - z^2/6 + z^4/120 - z^6/5040)
        return x * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0)));
    }
    return std::sin(z) / k;
}

Cplx cos_kx(Cplx k, double x) {
    Cplx z = k * x;
    if (std::abs(z) < SERIES_SWITCH) {
        Cplx z2 = z * z;
        return 1.0 - z2 / 2.0 * (1.0 - z2 / 12.0 * (1.0 - z2 / 30.0));
    }
    return std::cos(z);
}

Mat2c free_fundamental(double x, Cplx lambda, double m) {
    Cplx k = k_branch(lambda, m);  // entries even in k: branch immaterial
    Cplx c = cos_kx(k, x);
    Cplx s = sin_kx_over_k(k, x);
    return {c, (lambda + m) * s, (m - lambda) * s, c};
}

Mat2c free_fundamental_dlambda(double x, Cplx lambda, double m) {
    // With z = k^2 = l^2 - m^2:  d/dl = 2l d/dz.
    //   d cos(kx)/dz = -x sin(kx)/(2k),  d(sin(kx)/k)/dz = (x cos kx - sin(kx)/k)/(2z).
    Cplx k = k_branch(lambda, m);
    Cplx z = lambda * lambda - m * m;
    Cplx s = sin_kx_over_k(k, x);
    Cplx c = cos_kx(k, x);
    Cplx dc = -lambda * x * s;
    Cplx ds;
    if (std::abs(k * x) < 1e-2) {
        // Taylor of (x cos kx - sin(kx)/k)/(2 z) = -x^3/6 + z x^5/60 - z^2 x^7 /1008 ...
        Cplx zx2 = z * x * x;
        ds = 2.0 * lambda *
             (x * x * x) * (-1.0 / 6.0 + zx2 / 60.0 - zx2 * zx2 / 1680.0);
    } else {
        ds = 2.0 * lambda * (x * c - s) / (2.0 * z);
    }
    return {dc, s + (lambda + m) * ds, -s + (m - lambda) * ds, dc};
}

Vec2c free_jost(double x, const SpectralPoint& pt) {
    Cplx e = std::exp(I1 * pt.k * x);
    return {e * k0_of(pt), e};
}

namespace {

Mat2c resolvent_kernel_impl(double x, double y, Cplx lambda, double m, Cplx k) {
    // R0(x,y) = (1/2) e^{ik|x-y|} [ k0 (E-1)      E + sgn(x-y) ]
    //                             [ E + sgn(y-x)  (E+1)/k0     ],  E = e^{2ik r_<}.
    Cplx k0 = (lambda + m) / (I1 * k);
    double rless = std::min(x, y);
    double sg = (x > y) ? 1.0 : (x < y ? -1.0 : 0.0);
    Cplx eo = std::exp(I1 * k * std::abs(x - y));
    Cplx E = std::exp(2.0 * I1 * k * rless);
    return {0.5 * eo * k0 * (E - 1.0), 0.5 * eo * (E + sg),
            0.5 * eo * (E - sg), 0.5 * eo * (E + 1.0) / k0};
}

}  // namespace

Mat2c free_resolvent_kernel(double x, double y, const SpectralPoint& pt) {
    if (pt.k == Cplx(0.0))
        throw std::invalid_argument("free_resolvent_kernel: branch point");
    return resolvent_kernel_impl(x, y, pt.lambda, pt.m, pt.k);
}

Mat2c free_resolvent_kernel_physical(double x, double y, Cplx lambda, double m) {
    Cplx k = k_branch(lambda, m);
    if (lambda.imag() < 0.0) k = -k;  // decaying Jost branch below the axis
    if (k == Cplx(0.0))
        throw std::invalid_argument("free_resolvent_kernel: branch point");
    return resolvent_kernel_impl(x, y, lambda, m, k);
}

double spectral_weight(double s, double m) {
    if (std::abs(s) <= m)
        throw std::invalid_argument("spectral_weight: |s| > m required");
    double k = (s > 0 ? 1.0 : -1.0) * std::sqrt(s * s - m * m);
    return k / (PI * (s + m));
}

}  // namespace diracres
