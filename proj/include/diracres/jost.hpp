#pragma once

#include <vector>

#include "diracres/plane.hpp"
#include "diracres/potential.hpp"

namespace diracres {

/// theta~, phi~: solutions of the full Dirac system matching the free
/// fundamental solutions at x = gamma; entire in lambda.
struct FundamentalValues {
    Vec2c theta;    // theta~(0,lambda)
    Vec2c phi;      // phi~(0,lambda)
    Vec2c theta_d;  // d/dlambda theta~(0,lambda), filled if requested
    Vec2c phi_d;
    double achieved_tol = 0.0;
};

struct JostEvaluation {
    SpectralPoint point;
    Cplx f1{0.0}, f2{0.0};      // components of f^+(0,lambda)
    Cplx theta1{0.0}, phi1{0.0};  // theta~_1(0), phi~_1(0)
    double wronskian_residual = -1.0;  // |det(f+,f-) - 2 k0| on sigma_ac, else -1
    double ode_tolerance = 0.0;
    bool used_high_energy_route = false;
};

struct JostOptions {
    double tol = 1e-11;
    /// |lambda| above which the high-energy route is preferred for smooth V;
    /// negative = max(50, 20/gamma) * (1+m) (can be overridden in tests).
    double lambda_switch = -1.0;
    bool force_ode_route = false;
};

/// Backward integration of the Dirac system from x=gamma with free data
/// M0(gamma,lambda); works for every lambda in C (no sheet logic inside).
FundamentalValues fundamental_tilde(Cplx lambda, const Potential& P, double tol,
                                    bool with_derivative = false);

/// Jost function f1 = k0 theta~_1(0) + phi~_1(0) on the point's branch.
JostEvaluation jost_function(const SpectralPoint& pt, const Potential& P,
                             const JostOptions& opt = {});

/// f^+(x) at the sorted sample points xs in [0,gamma] (backward sweep from
/// gamma where f^+ = psi^+ exactly).
std::vector<Vec2c> jost_samples(const SpectralPoint& pt, const Potential& P,
                                const std::vector<double>& xs, double tol = 1e-11);

/// Iterates of the Volterra series for chi(x) = e^{-ikx} f^+(x) together with
/// the certified bounds |chi^n| <= e^{(gamma-x)(|eta|-eta)} K2/n! (K1 int|V|)^n.
struct VolterraResult {
    std::vector<Vec2c> terms;       // chi^0 .. chi^n at x
    std::vector<double> term_bounds;  // certified bound per term
    Vec2c sum;
    double tail_bound = 0.0;  // bound on the discarded remainder
    int n_used = 0;
};
VolterraResult volterra_series(double x, const SpectralPoint& pt, const Potential& P,
                               int n_max, double tol = 1e-12);

/// High-energy expansion Y = Y^0 + sum Y^n of the transformed Jost system
///   Y' = (ik s3 - (N + M)) Y,  Y|_{x>=gamma} = e^{ikx s3} (1,0)^T,
/// with per-order certified bounds; valid for |k| >= 2 sup|M| and V' in L1.
struct YExpansion {
    Vec2c Y;                     // total at x
    std::vector<Vec2c> orders;   // Y^0 .. Y^n at x
    double tail_bound = 0.0;
    double W_l1 = 0.0;           // int_x^gamma |W(s)| ds of the kernel
    Cplx f1{0.0}, f2{0.0};       // Jost components reconstructed at this x
};
YExpansion high_energy_Y(double x, const SpectralPoint& pt, const Potential& P,
                         int order);

/// B(lambda) = B0 + int_0^gamma e^{2i(kx - int_0^x v)} (conjugated w-flux) dx
/// entering f1(0,l) = k0 e^{i Omega0} (1 - B/(2 i l) + O(l^-2)). Requires a
/// potential with integrable derivative (smooth()).
Cplx asymptotic_B(Cplx lambda, const Potential& P);

/// Least-squares slope of log|f1(0, -ir)| (lower=true, expected 2*gamma) or
/// log|f1(0, +ir)| (lower=false, expected 0) against r.
double exponential_type_estimate(const Potential& P, bool lower,
                                 const std::vector<double>& radii,
                                 double tol = 1e-10);

/// Default high-energy switch radius.
double default_lambda_switch(const Potential& P);

}  // namespace diracres
