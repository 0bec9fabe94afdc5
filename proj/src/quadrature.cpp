#include "diracres/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace diracres {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

std::map<int, GaussLegendre> gl_cache;
std::mutex gl_mutex;

double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

Cplx simpson_step_c(const std::function<Cplx(double)>& f, double a, double b, Cplx fa,
                    Cplx fm, Cplx fb, Cplx whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    Cplx flm = f(lm), frm = f(rm);
    Cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    Cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    Cplx delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step_c(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step_c(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    std::lock_guard<std::mutex> lock(gl_mutex);
    auto it = gl_cache.find(n);
    if (it == gl_cache.end()) it = gl_cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

void mapped_gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
    const GaussLegendre& rule = gauss_legendre(n);
    x.resize(n);
    w.resize(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        x[i] = c + h * rule.nodes[i];
        w[i] = h * rule.weights[i];
    }
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

Cplx adaptive_simpson_c(const std::function<Cplx(double)>& f, double a, double b,
                        double tol, int max_depth) {
    Cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    Cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step_c(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double poly_eval(const std::vector<double>& c, double u) {
    double r = 0.0;
    for (size_t j = c.size(); j-- > 0;) r = r * u + c[j];
    return r;
}

Cplx poly_eval(const std::vector<Cplx>& c, double u) {
    Cplx r = 0.0;
    for (size_t j = c.size(); j-- > 0;) r = r * u + c[j];
    return r;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {};
    std::vector<double> d(c.size() - 1);
    for (size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * static_cast<double>(j);
    return d;
}

std::vector<Cplx> poly_derivative(const std::vector<Cplx>& c) {
    if (c.size() <= 1) return {};
    std::vector<Cplx> d(c.size() - 1);
    for (size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * static_cast<double>(j);
    return d;
}

double poly_integral(const std::vector<double>& c, double u) {
    double r = 0.0;
    double up = u;
    for (size_t j = 0; j < c.size(); ++j) {
        r += c[j] * up / (j + 1.0);
        up *= u;
    }
    return r;
}

std::vector<double> poly_antiderivative(const std::vector<double>& c) {
    std::vector<double> a(c.size() + 1, 0.0);
    for (size_t j = 0; j < c.size(); ++j) a[j + 1] = c[j] / (j + 1.0);
    return a;
}

Cplx poly_times_exp_integral(const std::vector<Cplx>& c, double u1, Cplx w) {
    if (c.empty() || u1 == 0.0) return 0.0;
    const Cplx iw = Cplx(0.0, 1.0) * w;
    if (std::abs(w) * std::abs(u1) >= 0.5) {
        // I_j = int_0^{u1} u^j e^{iwu} du = (u1^j E - j I_{j-1}) / (iw),  E = e^{iw u1}.
        const Cplx E = std::exp(iw * u1);
        Cplx I = (E - 1.0) / iw;  // I_0
        Cplx total = c[0] * I;
        double ujp = 1.0;
        for (size_t j = 1; j < c.size(); ++j) {
            ujp *= u1;
            I = (ujp * E - static_cast<double>(j) * I) / iw;
            total += c[j] * I;
        }
        return total;
    }
    // Small phase: e^{iwu} Taylor series, term-by-term exact integration.
    // int_0^{u1} u^j (iwu)^n/n! du = (iw)^n u1^{j+n+1} / (n! (j+n+1)).
    Cplx total = 0.0;
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] == Cplx(0.0)) continue;
        Cplx term = 0.0;
        Cplx pw = 1.0;  // (iw)^n u1^{n} / n!
        double u1p = std::pow(u1, static_cast<double>(j) + 1.0);
        for (int n = 0; n < 30; ++n) {
            Cplx add = pw * u1p / (static_cast<double>(j) + n + 1.0);
            term += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(term)) && n > 2) break;
            pw *= iw * u1 / (n + 1.0);
        }
        total += c[j] * term;
    }
    return total;
}

Cplx poly_times_expm1_integral(const std::vector<Cplx>& c, double u1, Cplx w) {
    if (c.empty() || u1 == 0.0) return 0.0;
    const Cplx iw = Cplx(0.0, 1.0) * w;
    if (std::abs(w) * std::abs(u1) >= 0.5) {
        Cplx plain = poly_times_exp_integral(c, u1, w);
        Cplx sub = 0.0;
        double up = u1;
        for (size_t j = 0; j < c.size(); ++j) {
            sub += c[j] * up / (j + 1.0);
            up *= u1;
        }
        return plain - sub;
    }
    // Series starting at n=1 keeps the small-w difference exact.
    Cplx total = 0.0;
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] == Cplx(0.0)) continue;
        Cplx term = 0.0;
        Cplx pw = iw * u1;  // (iw)^n u1^n / n!, n starting at 1
        double u1p = std::pow(u1, static_cast<double>(j) + 1.0);
        for (int n = 1; n < 32; ++n) {
            Cplx add = pw * u1p / (static_cast<double>(j) + n + 1.0);
            term += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(term)) && n > 2) break;
            pw *= iw * u1 / (n + 1.0);
        }
        total += c[j] * term;
    }
    return total;
}

namespace {

template <typename T>
std::vector<T> cheb_fit(const std::function<T(double)>& f, double a, double b, int n) {
    if (n < 1 || n > 24) throw std::invalid_argument("chebyshev_fit: 1 <= n <= 24");
    // Chebyshev points of the second kind, values -> Newton form -> monomials in (x-a).
    std::vector<double> t(n);
    std::vector<T> fv(n);
    for (int i = 0; i < n; ++i) {
        double ci = (n == 1) ? 0.0 : std::cos(PI * i / (n - 1));
        t[i] = 0.5 * (a + b) + 0.5 * (b - a) * ci;
        fv[i] = f(t[i]);
    }
    // Divided differences.
    std::vector<T> dd = fv;
    for (int k = 1; k < n; ++k)
        for (int i = n - 1; i >= k; --i) dd[i] = (dd[i] - dd[i - 1]) / (t[i] - t[i - k]);
    // Expand Newton form into monomials of u = x-a.
    std::vector<T> coeff(n, T(0.0));
    std::vector<T> basis(n, T(0.0));  // current product prod (u - (t_i - a))
    basis[0] = T(1.0);
    int basis_deg = 0;
    coeff[0] = dd[0];
    for (int k = 1; k < n; ++k) {
        double root = t[k - 1] - a;
        for (int j = basis_deg + 1; j >= 1; --j)
            basis[j] = basis[j - 1] - root * basis[j];
        basis[0] = -root * basis[0];
        ++basis_deg;
        for (int j = 0; j <= basis_deg; ++j) coeff[j] += dd[k] * basis[j];
    }
    return coeff;
}

}  // namespace

std::vector<double> chebyshev_fit_monomial(const std::function<double(double)>& f,
                                           double a, double b, int n) {
    return cheb_fit<double>(f, a, b, n);
}

std::vector<Cplx> chebyshev_fit_monomial_c(const std::function<Cplx(double)>& f,
                                           double a, double b, int n) {
    return cheb_fit<Cplx>(f, a, b, n);
}

}  // namespace diracres
