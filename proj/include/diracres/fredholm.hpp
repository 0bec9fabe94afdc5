#pragma once

#include <vector>

#include "diracres/plane.hpp"
#include "diracres/potential.hpp"

namespace diracres {

struct DetEvaluation {
    Cplx lambda;
    int nodes = 0;
    Cplx value{1.0, 0.0};        // D(lambda) = det(I+A) e^{-Tr A}
    Cplx trace_correction{0.0};  // Tr A
    double hs_norm = 0.0;        // Frobenius estimate of ||V R0||_HS
    double bound_margin = 0.0;   // e^{hs^2/2} - |D|
    double condition_indicator = 0.0;  // ~1/sigma_min(I+A)
};

/// Modified Fredholm determinant via a Nystrom discretization of V R0(lambda)
/// on composite Gauss-Legendre nodes respecting the potential breakpoints,
/// square-root-symmetrized in the weights. For Im lambda < 0 the kernel of
/// the true resolvent is used (so D(conj l) = conj D(l)); boundary values on
/// the spectrum are taken by epsilon-extrapolation elsewhere.
DetEvaluation det2(Cplx lambda, const Potential& P, int N);

/// -log D via the trace series sum_{n>=2} Tr(-A)^n / n with the geometric-
/// factorial remainder certificate; requires eps_lambda < 1.
struct TraceSeriesResult {
    Cplx log_det{0.0};           // log D from the series
    Cplx det_value{1.0};
    double remainder_bound = 0.0;
    double eps_lambda = 0.0;
    int terms = 0;
};
TraceSeriesResult det2_trace_series(Cplx lambda, const Potential& P, int N,
                                    int n_max);

/// Discretized ||V R0||_HS^2 against the closed-form bound
///   [4 pi/|Im l| |Re(l/sqrt(l^2-m^2))| + slack] ||V||_2^2,
/// slack = 2 C_cal max(1/|l|^2, 1/|l+-m|^2) with C_cal calibrated once on the
/// free relativistic integral.
struct HsCertificate {
    double hs_norm_sq = 0.0;
    double paper_bound = 0.0;
    double margin = 0.0;  // paper_bound - hs_norm_sq
};
HsCertificate hs_norm_certificate(Cplx lambda, const Potential& P, int N,
                                  double C_cal = 8.0);

/// D(l +- i0) by Richardson extrapolation over eps in {1e-2..1e-5}.
Cplx det2_boundary(double lambda, bool from_above, const Potential& P, int N);

/// S(l) vs D(l-i0)/D(l+i0) e^{-2 i Omega(l)}.
struct IdentityCheck {
    Cplx lhs{0.0};
    Cplx rhs{0.0};
    double diff = 0.0;
};
IdentityCheck identity_S_from_D(double lambda, const Potential& P, int N);

/// f1(0,l) vs k0 D(l) exp(i Omega0 + (1/pi) int (Omega(t)-Omega0)/(t-l) dt),
/// Im l > 0; the principal-value-free Cauchy integral is truncated at |t|=T
/// with a fitted 1/t tail correction.
IdentityCheck identity_a_eq_D(Cplx lambda, const Potential& P, int N, double T);

/// int_R dk/|sqrt(k^2+m^2)-l|^2 by adaptive quadrature vs the closed form
/// 2 pi/|Im l| |Re(l/sqrt(l^2-m^2))|.
struct RelativisticIntegral {
    double numeric = 0.0;
    double closed_form = 0.0;
    double diff = 0.0;
    double remainder_scale = 0.0;  // max(1/|l|^2, 1/|l+-m|^2)
};
RelativisticIntegral relativistic_integral(Cplx lambda, double m,
                                           double quad_tol = 1e-10);

}  // namespace diracres
