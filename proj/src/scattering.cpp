#include "diracres/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diracres/quadrature.hpp"

namespace diracres {

namespace {
const Cplx I1(0.0, 1.0);

std::vector<Cplx> pad_to(const std::vector<double>& c, size_t n) {
    std::vector<Cplx> out(n, Cplx(0.0));
    for (size_t i = 0; i < c.size() && i < n; ++i) out[i] = c[i];
    return out;
}

}  // namespace

double omega(double lambda, const Potential& P) {
    const double m = P.mass();
    if (std::abs(std::abs(lambda) - m) < 1e-14 * (1.0 + m))
        throw std::invalid_argument("omega: lambda at a band edge");
    if (std::abs(lambda) < m) return 0.0;

    double k = (lambda > 0 ? 1.0 : -1.0) * std::sqrt(lambda * lambda - m * m);
    double A = (lambda + m) / k;  // (l+m)/k = i k0
    double total = 0.0;
    for (const Segment& seg : P.segments()) {
        double len = seg.hi - seg.lo;
        size_t n = std::max({seg.p1.size(), seg.p2.size(), seg.q.size(), size_t(1)});
        std::vector<Cplx> p1c = pad_to(seg.p1, n), p2c = pad_to(seg.p2, n),
                          qc = pad_to(seg.q, n);
        // shift to absolute t: poly in u with t = lo + u; phases referenced to
        // t = 0 via e^{2ik lo}.
        Cplx ph = std::exp(2.0 * I1 * k * seg.lo);
        // p1 (l+m)/k sin^2 kt = p1 A (1 - cos 2kt)/2; the one-minus-cos form
        // int p1 (cos 2kt - 1) dt = Re[ ph int p1 (e^{2iku}-1) du + (ph-1) int p1 du ]
        // avoids the k -> 0 cancellation against the divergent prefactor A.
        std::vector<double> p1r(seg.p1);
        double ip1 = poly_integral(p1r.empty() ? std::vector<double>{0.0} : p1r, len);
        Cplx em1 = ph * poly_times_expm1_integral(p1c, len, 2.0 * k) + (ph - 1.0) * ip1;
        total += A * 0.5 * (-em1.real());
        // p2 k/(l+m) cos^2 kt = p2/A (1 + cos 2kt)/2
        std::vector<double> p2r(seg.p2);
        double ip2 = poly_integral(p2r.empty() ? std::vector<double>{0.0} : p2r, len);
        Cplx e2 = ph * poly_times_exp_integral(p2c, len, 2.0 * k);
        total += (0.5 / A) * (ip2 + e2.real());
        // q sin 2kt
        Cplx e3 = ph * poly_times_exp_integral(qc, len, 2.0 * k);
        total += e3.imag();
    }
    return total;
}

Cplx scattering_matrix(double lambda, const Potential& P, double tol) {
    const double m = P.mass();
    if (std::abs(lambda) <= m)
        throw std::invalid_argument("scattering_matrix: |lambda| > m required");
    SpectralPoint pt = quasimomentum(lambda, m, Sheet::PhysicalUpper);
    JostOptions jo;
    jo.tol = tol;
    JostEvaluation ev = jost_function(pt, P, jo);
    if (std::abs(ev.f1) == 0.0)
        throw std::runtime_error(
            "scattering_matrix: Jost function vanishes on the continuous spectrum");
    return -std::conj(ev.f1) / ev.f1;
}

PhaseTrace scattering_phase(const std::vector<double>& grid, const Potential& P,
                            double tol) {
    if (grid.empty()) return {};
    const double m = P.mass();
    for (double l : grid)
        if (std::abs(l) <= m || l * grid.front() <= 0.0)
            throw std::invalid_argument(
                "scattering_phase: grid must stay on one spectral ray");

    PhaseTrace tr;
    tr.lambda = grid;
    std::sort(tr.lambda.begin(), tr.lambda.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });

    const double omega0 = P.derived().omega0;
    JostOptions jo;
    jo.tol = tol;
    std::vector<double> raw(tr.lambda.size());
    tr.S.resize(tr.lambda.size());
    tr.omega.resize(tr.lambda.size());
    for (size_t i = 0; i < tr.lambda.size(); ++i) {
        double l = tr.lambda[i];
        SpectralPoint pt = quasimomentum(l, m, Sheet::PhysicalUpper);
        JostEvaluation ev = jost_function(pt, P, jo);
        raw[i] = std::arg(ev.f1) + 0.5 * PI;  // phi_sc up to 2 pi n
        tr.S[i] = -std::conj(ev.f1) / ev.f1;
        tr.omega[i] = omega(l, P);
    }
    // anchor at the largest |lambda|: phi_sc -> Omega0
    tr.phi_sc.assign(tr.lambda.size(), 0.0);
    size_t last = tr.lambda.size() - 1;
    double shifted = raw[last] +
                     2.0 * PI * std::round((omega0 - raw[last]) / (2.0 * PI));
    tr.phi_sc[last] = shifted;
    for (size_t i = last; i-- > 0;) {
        double cand = raw[i] +
                      2.0 * PI * std::round((tr.phi_sc[i + 1] - raw[i]) / (2.0 * PI));
        tr.phi_sc[i] = cand;
    }
    return tr;
}

}  // namespace diracres
