#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "diracres/types.hpp"

namespace diracres {

struct OdeStats {
    int steps = 0;
    int rejected = 0;
    double max_err = 0.0;
};

struct OdeOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double h_max = 1e300;   // oscillation ceiling, set by the caller from |k|
    double h_init = 0.0;    // 0 = automatic
    long max_steps = 40000000;
};

/// Dormand-Prince 5(4) for y' = f(x,y), y in C^N, integrating from x0 to x1
/// (either direction). Dense output is not kept; callers needing samples
/// integrate piecewise. Throws on step-count exhaustion or underflow of h.
template <std::size_t N, typename Rhs>
OdeStats integrate_rk45(const Rhs& rhs, double x0, double x1,
                        std::array<Cplx, N>& y, const OdeOptions& opt) {
    using V = std::array<Cplx, N>;
    if (x0 == x1) return {};
    const double dir = (x1 > x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeStats stats;
    double h = (opt.h_init > 0.0 ? opt.h_init : std::min(opt.h_max, span / 64.0));
    h = std::min(h, span);
    double x = x0;
    V k1, k2, k3, k4, k5, k6, k7, yt, y1;
    rhs(x, y, k1);

    while (dir * (x1 - x) > 1e-15 * (1.0 + std::abs(x1))) {
        h = std::min(h, opt.h_max);
        h = std::min(h, std::abs(x1 - x));
        if (h < 1e-14 * (1.0 + std::abs(x)))
            throw std::runtime_error("integrate_rk45: step size underflow");
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        rhs(x + hs * 0.2, yt, k2);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + hs * 0.3, yt, k3);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + hs * 0.8, yt, k4);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + hs * (8.0 / 9.0), yt, k5);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                 a64 * k4[i] + a65 * k5[i]);
        rhs(x + hs, yt, k6);
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                 a75 * k5[i] + a76 * k6[i]);
        rhs(x + hs, y1, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            Cplx e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                           e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            x += hs;
            y = y1;
            k1 = k7;  // FSAL
            ++stats.steps;
            stats.max_err = std::max(stats.max_err, err);
        } else {
            ++stats.rejected;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (stats.steps + stats.rejected > opt.max_steps)
            throw std::runtime_error("integrate_rk45: step budget exhausted");
    }
    return stats;
}

}  // namespace diracres
