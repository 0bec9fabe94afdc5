#include "diracres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diracres {
namespace oracle {

namespace {

/// e^{A d} for the constant-coefficient cell matrix
///   A = [[-q, l+m-p2], [m+p1-l, q]]
/// via A^2 = (q^2 + beta delta) I:  e^{Ad} = cos(kc d) I + sin(kc d)/kc A,
/// kc = sqrt(-(q^2 + beta delta)), both factors even in kc.
Mat2c cell_exponential(double p1, double p2, double q, Cplx lambda, double m,
                       double d) {
    Cplx beta = lambda + m - p2;
    Cplx delta = m + p1 - lambda;
    Cplx kc = std::sqrt(-(q * q + beta * delta));
    Cplx c = cos_kx(kc, d);
    Cplx s = sin_kx_over_k(kc, d);
    return {c - q * s, beta * s, delta * s, c + q * s};
}

}  // namespace

Potential PiecewiseConstantPotential::to_potential(bool is_free) const {
    std::vector<Segment> segs;
    for (const Cell& c : cells) {
        Segment s;
        s.lo = c.lo;
        s.hi = c.hi;
        s.p1 = {c.p1};
        s.p2 = {c.p2};
        s.q = {c.q};
        segs.push_back(std::move(s));
    }
    return Potential(m, gamma, std::move(segs), is_free);
}

TransferResult transfer_matrix_closed_form(const PiecewiseConstantPotential& P,
                                           const SpectralPoint& pt) {
    if (P.cells.empty())
        throw std::invalid_argument("transfer_matrix_closed_form: no cells");
    Cplx lambda = pt.lambda;
    std::vector<PiecewiseConstantPotential::Cell> cells = P.cells;
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    // include implicit free gaps between cells
    std::vector<PiecewiseConstantPotential::Cell> full;
    double cursor = 0.0;
    for (const auto& c : cells) {
        if (c.lo > cursor + 1e-15) full.push_back({cursor, c.lo, 0.0, 0.0, 0.0});
        full.push_back(c);
        cursor = c.hi;
    }
    if (cursor < P.gamma - 1e-15) full.push_back({cursor, P.gamma, 0.0, 0.0, 0.0});
    // y(0) = e^{-A_1 d_1} e^{-A_2 d_2} ... e^{-A_n d_n} y(gamma), cell 1 leftmost
    Mat2c T = Mat2c::identity();
    for (const auto& c : full)
        T = T * cell_exponential(c.p1, c.p2, c.q, lambda, P.m, -(c.hi - c.lo));

    TransferResult res;
    res.T = T;
    Mat2c M0g = free_fundamental(P.gamma, lambda, P.m);
    res.theta0 = T * Vec2c(M0g.m11, M0g.m21);
    res.phi0 = T * Vec2c(M0g.m12, M0g.m22);
    Cplx k0 = k0_of(pt);
    res.f1 = k0 * res.theta0.a + res.phi0.a;
    res.f2 = k0 * res.theta0.b + res.phi0.b;
    return res;
}

std::vector<Candidate> brute_force_zero_scan(const std::function<Cplx(Cplx)>& f,
                                             double x0, double x1, double y0,
                                             double y1, double grid_step,
                                             double threshold_factor) {
    int nx = std::max(3, static_cast<int>(std::ceil((x1 - x0) / grid_step)) + 1);
    int ny = std::max(3, static_cast<int>(std::ceil((y1 - y0) / grid_step)) + 1);
    std::vector<double> mag(static_cast<size_t>(nx) * ny);
    auto at = [&](int i, int j) -> double& { return mag[static_cast<size_t>(j) * nx + i]; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Cplx z(x0 + (x1 - x0) * i / (nx - 1), y0 + (y1 - y0) * j / (ny - 1));
            at(i, j) = std::abs(f(z));
        }
    std::vector<double> sorted = mag;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    double thresh = threshold_factor * std::max(median, 1e-300);

    std::vector<Candidate> out;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double v = at(i, j);
            if (v >= thresh) continue;
            bool is_min = true;
            for (int dj = -1; dj <= 1 && is_min; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    if (at(ii, jj) < v) {
                        is_min = false;
                        break;
                    }
                }
            if (is_min)
                out.push_back({Cplx(x0 + (x1 - x0) * i / (nx - 1),
                                    y0 + (y1 - y0) * j / (ny - 1)),
                               v});
        }
    return out;
}

}  // namespace oracle
}  // namespace diracres
