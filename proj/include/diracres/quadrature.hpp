#pragma once

#include <functional>
#include <vector>

#include "diracres/types.hpp"

namespace diracres {

/// Gauss-Legendre rule on [-1,1]; nodes ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n and cached.
const GaussLegendre& gauss_legendre(int n);

/// Nodes/weights of an n-point rule mapped to [a,b].
void mapped_gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w);

/// Adaptive Simpson quadrature for real integrands.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 50);

/// Adaptive Simpson for complex integrands.
Cplx adaptive_simpson_c(const std::function<Cplx(double)>& f, double a, double b,
                        double tol, int max_depth = 50);

// ---------------------------------------------------------------------------
// Polynomials in the monomial basis, p(u) = sum_j c[j] u^j.
// Potential segments store coefficients relative to u = x - lo.
// ---------------------------------------------------------------------------

double poly_eval(const std::vector<double>& c, double u);
Cplx poly_eval(const std::vector<Cplx>& c, double u);

/// Coefficients of dp/du.
std::vector<double> poly_derivative(const std::vector<double>& c);
std::vector<Cplx> poly_derivative(const std::vector<Cplx>& c);

/// Exact integral of p over [0,u].
double poly_integral(const std::vector<double>& c, double u);

/// Antiderivative coefficients with constant term 0.
std::vector<double> poly_antiderivative(const std::vector<double>& c);

/// integral_{0}^{u1} p(u) e^{i w u} du, exact up to roundoff.
/// Uses the integration-by-parts recurrence for |w|*u1 >= 0.5 and a Taylor
/// series in w below that (the recurrence is unstable for small phases).
Cplx poly_times_exp_integral(const std::vector<Cplx>& c, double u1, Cplx w);

/// integral_{0}^{u1} p(u) (e^{i w u} - 1) du.
/// Stable for small |w| (no cancellation against the constant term).
Cplx poly_times_expm1_integral(const std::vector<Cplx>& c, double u1, Cplx w);

// ---------------------------------------------------------------------------
// Chebyshev interpolation on [a,b]: used to tabulate smooth non-polynomial
// factors (gauge rotations, high-energy kernels) as piecewise polynomials.
// ---------------------------------------------------------------------------

/// Interpolate f on [a,b] by a degree-(n-1) polynomial in the monomial basis
/// centered at a (coefficients of (x-a)^j). n <= 24.
std::vector<double> chebyshev_fit_monomial(const std::function<double(double)>& f,
                                           double a, double b, int n);

std::vector<Cplx> chebyshev_fit_monomial_c(const std::function<Cplx(double)>& f,
                                           double a, double b, int n);

}  // namespace diracres
