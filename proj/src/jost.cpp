#include "diracres/jost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diracres/ode.hpp"
#include "diracres/quadrature.hpp"

namespace diracres {

namespace {

const Cplx I1(0.0, 1.0);

double step_ceiling(Cplx lambda, double m, double gamma) {
    double kabs = std::abs(k_branch(lambda, m));
    return std::min(0.1 / (1.0 + kabs), gamma / 50.0);
}

/// System matrix of the full Dirac system,
///   f1' = -q f1 + (lambda + m - p2) f2,
///   f2' = (m + p1 - lambda) f1 + q f2.
struct DiracRhs {
    const Segment* seg;  // active segment, nullptr = free region
    Cplx lambda;
    double m;

    void coeffs(double x, Cplx& a11, Cplx& a12, Cplx& a21, Cplx& a22) const {
        double p1v = 0.0, p2v = 0.0, qv = 0.0;
        if (seg) {
            double u = x - seg->lo;
            p1v = poly_eval(seg->p1, u);
            p2v = poly_eval(seg->p2, u);
            qv = poly_eval(seg->q, u);
        }
        a11 = -qv;
        a12 = lambda + m - p2v;
        a21 = m + p1v - lambda;
        a22 = qv;
    }
};

/// Two columns (theta~, phi~) integrated together.
struct TwoColumnRhs : DiracRhs {
    void operator()(double x, const std::array<Cplx, 4>& y,
                    std::array<Cplx, 4>& dy) const {
        Cplx a11, a12, a21, a22;
        coeffs(x, a11, a12, a21, a22);
        dy[0] = a11 * y[0] + a12 * y[1];
        dy[1] = a21 * y[0] + a22 * y[1];
        dy[2] = a11 * y[2] + a12 * y[3];
        dy[3] = a21 * y[2] + a22 * y[3];
    }
};

/// Columns plus their lambda-derivatives (variational equation,
/// dA/dlambda = [[0,1],[-1,0]]).
struct TwoColumnVarRhs : DiracRhs {
    void operator()(double x, const std::array<Cplx, 8>& y,
                    std::array<Cplx, 8>& dy) const {
        Cplx a11, a12, a21, a22;
        coeffs(x, a11, a12, a21, a22);
        dy[0] = a11 * y[0] + a12 * y[1];
        dy[1] = a21 * y[0] + a22 * y[1];
        dy[2] = a11 * y[2] + a12 * y[3];
        dy[3] = a21 * y[2] + a22 * y[3];
        dy[4] = a11 * y[4] + a12 * y[5] + y[1];
        dy[5] = a21 * y[4] + a22 * y[5] - y[0];
        dy[6] = a11 * y[6] + a12 * y[7] + y[3];
        dy[7] = a21 * y[6] + a22 * y[7] - y[2];
    }
};

const Segment* segment_covering(const Potential& P, double a, double b) {
    double mid = 0.5 * (a + b);
    for (const Segment& s : P.segments())
        if (mid >= s.lo && mid <= s.hi) return &s;
    return nullptr;
}

template <std::size_t N, typename Rhs>
double integrate_backward(Rhs rhs, const Potential& P, Cplx lambda,
                          std::array<Cplx, N>& y, double tol, double from,
                          double to) {
    OdeOptions opt;
    opt.abs_tol = tol;
    opt.rel_tol = tol;
    opt.h_max = step_ceiling(lambda, P.mass(), P.gamma());
    double worst = 0.0;
    const std::vector<double>& bks = P.breakpoints();
    // walk breakpoints from 'from' down to 'to'
    double x = from;
    for (size_t i = bks.size(); i-- > 0;) {
        double b = std::min(bks[i], from);
        if (b >= x) continue;
        double lo = std::max(b, to);
        rhs.seg = segment_covering(P, lo, x);
        rhs.lambda = lambda;
        rhs.m = P.mass();
        OdeStats st = integrate_rk45<N>(rhs, x, lo, y, opt);
        worst = std::max(worst, st.max_err * tol);
        x = lo;
        if (x <= to) break;
    }
    if (x > to) {
        rhs.seg = segment_covering(P, to, x);
        rhs.lambda = lambda;
        rhs.m = P.mass();
        integrate_rk45<N>(rhs, x, to, y, opt);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Panel grid for the series routes: composite Gauss-Legendre panels on
// [x0, gamma] aligned with table pieces, sized to resolve e^{i omega t}.
// ---------------------------------------------------------------------------

constexpr int PANEL_N = 16;

struct PanelGrid {
    std::vector<double> edges;            // panel boundaries ascending
    std::vector<std::vector<double>> xs;  // nodes per panel
    std::vector<std::vector<double>> ws;  // weights per panel
};

/// S_ref[i][j] = integral over [node_i, 1] of the j-th Lagrange basis on the
/// PANEL_N Gauss-Legendre nodes of [-1,1]; computed once by quadrature of the
/// barycentric interpolant.
const std::vector<std::vector<double>>& cumulative_matrix() {
    static std::vector<std::vector<double>> S = [] {
        const GaussLegendre& rule = gauss_legendre(PANEL_N);
        const std::vector<double>& t = rule.nodes;
        // barycentric weights
        std::vector<double> bw(PANEL_N, 1.0);
        for (int j = 0; j < PANEL_N; ++j)
            for (int l = 0; l < PANEL_N; ++l)
                if (l != j) bw[j] /= (t[j] - t[l]);
        auto lag = [&](int j, double x) {
            double prod = 1.0;
            for (int l = 0; l < PANEL_N; ++l)
                if (l != j) prod *= (x - t[l]);
            return bw[j] * prod;
        };
        std::vector<std::vector<double>> out(PANEL_N,
                                             std::vector<double>(PANEL_N, 0.0));
        for (int i = 0; i < PANEL_N; ++i)
            for (int j = 0; j < PANEL_N; ++j)
                out[i][j] = adaptive_simpson([&](double x) { return lag(j, x); },
                                             t[i], 1.0, 1e-14);
        return out;
    }();
    return S;
}

PanelGrid build_panels(const Potential& P, double x0, double omega_max) {
    PanelGrid g;
    double gamma = P.gamma();
    if (x0 >= gamma) {
        g.edges = {gamma, gamma};
        return g;
    }
    double hmax = 4.5 / std::max(1.0, omega_max);
    std::vector<double> base{x0};
    for (double b : P.breakpoints())
        if (b > x0 + 1e-15 && b < gamma - 1e-15) base.push_back(b);
    base.push_back(gamma);
    g.edges.push_back(base[0]);
    for (size_t i = 0; i + 1 < base.size(); ++i) {
        double a = base[i], b = base[i + 1];
        int np = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
        for (int p = 1; p <= np; ++p) g.edges.push_back(a + (b - a) * p / np);
    }
    const GaussLegendre& rule = gauss_legendre(PANEL_N);
    size_t npan = g.edges.size() - 1;
    g.xs.resize(npan);
    g.ws.resize(npan);
    for (size_t p = 0; p < npan; ++p) {
        double a = g.edges[p], b = g.edges[p + 1];
        g.xs[p].resize(PANEL_N);
        g.ws[p].resize(PANEL_N);
        for (int i = 0; i < PANEL_N; ++i) {
            g.xs[p][i] = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
            g.ws[p][i] = 0.5 * (b - a) * rule.weights[i];
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// High-energy kernel tables: lambda-independent piecewise polynomials so that
//   M(t,l)  = m0(t) + a(l) mA(t) + b(l) mB(t),   [times nothing else]
//   M*(t,l) = conj tables with the same a,b,
//   N(t,l)  = a(l) nA(t) + b(l) nB(t),
// where m0 = e^{-2i mu} conj(w), mA = (i/2) e^{-2i mu} p2, mB = -(i/2) e^{-2i mu} p1,
// nA = (i/2) p2, nB = (i/2) p1, mu(t) = int_0^t v.
// ---------------------------------------------------------------------------

struct TablePiece {
    double lo, hi;
    std::vector<Cplx> m0, mA, mB;     // factors of M
    std::vector<Cplx> dm0, dmA, dmB;  // their t-derivatives
    std::vector<Cplx> nA, nB;
};

struct HighEnergyTables {
    std::vector<TablePiece> pieces;

    const TablePiece& at(double t) const {
        for (const TablePiece& p : pieces)
            if (t <= p.hi + 1e-14) return p;
        return pieces.back();
    }
};

HighEnergyTables build_tables(const Potential& P) {
    HighEnergyTables T;
    const int deg = 18;
    auto em2mu = [&](double t) { return std::exp(-2.0 * I1 * P.v_integral(t)); };
    const std::vector<double>& bks = P.breakpoints();
    for (size_t i = 0; i + 1 < bks.size(); ++i) {
        double a = bks[i], b = bks[i + 1];
        double rate = 0.0;
        for (double t = a; t <= b; t += (b - a) / 16.0)
            rate = std::max(rate, 2.0 * std::abs(P.v(t)));
        int np = std::max(1, static_cast<int>(std::ceil((b - a) * rate / 1.0)));
        for (int p = 0; p < np; ++p) {
            TablePiece tp;
            tp.lo = a + (b - a) * p / np;
            tp.hi = a + (b - a) * (p + 1) / np;
            auto fit = [&](const std::function<Cplx(double)>& f) {
                return chebyshev_fit_monomial_c(f, tp.lo, tp.hi, deg);
            };
            tp.m0 = fit([&](double t) { return em2mu(t) * std::conj(P.w(t)); });
            tp.mA = fit([&](double t) { return 0.5 * I1 * em2mu(t) * P.p2(t); });
            tp.mB = fit([&](double t) { return -0.5 * I1 * em2mu(t) * P.p1(t); });
            tp.nA = fit([&](double t) { return Cplx(0.0, 0.5) * P.p2(t); });
            tp.nB = fit([&](double t) { return Cplx(0.0, 0.5) * P.p1(t); });
            tp.dm0 = poly_derivative(tp.m0);
            tp.dmA = poly_derivative(tp.mA);
            tp.dmB = poly_derivative(tp.mB);
            T.pieces.push_back(std::move(tp));
        }
    }
    return T;
}

struct MNValues {
    Cplx M, Mstar, dM, dMstar, N;
};

MNValues eval_MN(const HighEnergyTables& T, double t, Cplx a, Cplx b) {
    const TablePiece& p = T.at(t);
    double u = t - p.lo;
    Cplx m0 = poly_eval(p.m0, u), mA = poly_eval(p.mA, u), mB = poly_eval(p.mB, u);
    Cplx d0 = poly_eval(p.dm0, u), dA = poly_eval(p.dmA, u), dB = poly_eval(p.dmB, u);
    Cplx nA = poly_eval(p.nA, u), nB = poly_eval(p.nB, u);
    MNValues r;
    r.M = m0 + a * mA + b * mB;
    r.dM = d0 + a * dA + b * dB;
    // continuation of conj(M) off the real axis: conjugate tables, same a,b
    r.Mstar = std::conj(m0) + a * std::conj(mA) + b * std::conj(mB);
    r.dMstar = std::conj(d0) + a * std::conj(dA) + b * std::conj(dB);
    r.N = a * nA + b * nB;
    return r;
}

}  // namespace

double default_lambda_switch(const Potential& P) {
    return std::max(50.0, 20.0 / P.gamma()) * (1.0 + P.mass());
}

FundamentalValues fundamental_tilde(Cplx lambda, const Potential& P, double tol,
                                    bool with_derivative) {
    const double gamma = P.gamma();
    const double m = P.mass();
    Mat2c M0 = free_fundamental(gamma, lambda, m);
    FundamentalValues out;
    if (!with_derivative) {
        std::array<Cplx, 4> y{M0.m11, M0.m21, M0.m12, M0.m22};
        TwoColumnRhs rhs{};
        out.achieved_tol = integrate_backward<4>(rhs, P, lambda, y, tol, gamma, 0.0);
        out.theta = {y[0], y[1]};
        out.phi = {y[2], y[3]};
    } else {
        Mat2c dM0 = free_fundamental_dlambda(gamma, lambda, m);
        std::array<Cplx, 8> y{M0.m11,  M0.m21,  M0.m12,  M0.m22,
                              dM0.m11, dM0.m21, dM0.m12, dM0.m22};
        TwoColumnVarRhs rhs{};
        out.achieved_tol = integrate_backward<8>(rhs, P, lambda, y, tol, gamma, 0.0);
        out.theta = {y[0], y[1]};
        out.phi = {y[2], y[3]};
        out.theta_d = {y[4], y[5]};
        out.phi_d = {y[6], y[7]};
    }
    return out;
}

JostEvaluation jost_function(const SpectralPoint& pt, const Potential& P,
                             const JostOptions& opt) {
    JostEvaluation ev;
    ev.point = pt;
    ev.ode_tolerance = opt.tol;
    Cplx k0 = k0_of(pt);

    double lsw = opt.lambda_switch > 0 ? opt.lambda_switch : default_lambda_switch(P);
    bool try_he = !opt.force_ode_route && P.smooth() && !P.is_free() &&
                  std::abs(pt.lambda) >= lsw &&
                  std::abs(pt.k.imag()) * 2.0 * P.gamma() < 30.0;
    if (try_he) {
        YExpansion ye = high_energy_Y(0.0, pt, P, 10);
        if (ye.tail_bound < opt.tol * 10.0 + 1e-12) {
            ev.f1 = ye.f1;
            ev.f2 = ye.f2;
            ev.used_high_energy_route = true;
            // theta~_1, phi~_1 recovered from f1 on both rims is not needed on
            // the high-energy branch; leave the entire-route fields empty.
        }
    }
    if (!ev.used_high_energy_route) {
        FundamentalValues fv = fundamental_tilde(pt.lambda, P, opt.tol);
        ev.theta1 = fv.theta.a;
        ev.phi1 = fv.phi.a;
        ev.f1 = k0 * fv.theta.a + fv.phi.a;
        ev.f2 = k0 * fv.theta.b + fv.phi.b;
    }

    if (pt.lambda.imag() == 0.0 && std::abs(pt.lambda.real()) > P.mass()) {
        Cplx det = ev.f1 * std::conj(ev.f2) - ev.f2 * std::conj(ev.f1);
        ev.wronskian_residual = std::abs(det - 2.0 * k0);
    }
    return ev;
}

std::vector<Vec2c> jost_samples(const SpectralPoint& pt, const Potential& P,
                                const std::vector<double>& xs, double tol) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const double gamma = P.gamma();
    std::vector<Vec2c> out(sorted.size());
    Vec2c fg = free_jost(gamma, pt);
    std::array<Cplx, 4> y{fg.a, fg.b, 0.0, 0.0};
    TwoColumnRhs rhs{};
    double x = gamma;
    for (size_t i = sorted.size(); i-- > 0;) {
        double target = sorted[i];
        if (target > gamma) {
            out[i] = free_jost(target, pt);
            continue;
        }
        if (target < x)
            integrate_backward<4>(rhs, P, pt.lambda, y, tol, x, target);
        x = target;
        out[i] = {y[0], y[1]};
    }
    // restore the caller's ordering
    std::vector<Vec2c> result(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), xs[i]);
        result[i] = out[static_cast<size_t>(it - sorted.begin())];
    }
    return result;
}

VolterraResult volterra_series(double x, const SpectralPoint& pt, const Potential& P,
                               int n_max, double tol) {
    if (n_max < 1) throw std::invalid_argument("volterra_series: n_max >= 1");
    const double gamma = P.gamma();
    const Cplx k = pt.k;
    const Cplx k0 = k0_of(pt);
    const double eta = k.imag();
    const double K1 = std::max(std::abs(k0), 1.0 / std::abs(k0));
    const double K2 = std::max(std::abs(k0), 1.0);

    PanelGrid g = build_panels(P, x, 2.0 * std::abs(k));
    size_t npan = g.xs.size();
    const auto& S = cumulative_matrix();

    // chi^n at all panel nodes; start with the constant seed (k0, 1).
    std::vector<std::vector<Vec2c>> chi(npan,
                                        std::vector<Vec2c>(PANEL_N, Vec2c(k0, 1.0)));
    VolterraResult res;
    res.terms.push_back(Vec2c(k0, 1.0));
    res.term_bounds.push_back(K2);
    res.sum = Vec2c(k0, 1.0);

    const Mat2c Pm(1.0, k0, 1.0 / k0, 1.0);
    const Mat2c Qm(1.0, -k0, -1.0 / k0, 1.0);

    auto sigma2V = [&](double t) {
        // i s2 V = [[q, p2], [-p1, -q]]
        double p1v = P.p1(t), p2v = P.p2(t), qv = P.q(t);
        return Mat2c(qv, p2v, -p1v, -qv);
    };

    double l1x = P.l1_tail(x);
    double phase_factor = std::exp((gamma - x) * (std::abs(eta) - eta));
    int n = 0;
    double rho = K1 * l1x;
    while (n < n_max) {
        ++n;
        // integrands at nodes for the current chi^{n-1}
        std::vector<std::vector<Vec2c>> g0(npan, std::vector<Vec2c>(PANEL_N));
        std::vector<std::vector<Vec2c>> g1(npan, std::vector<Vec2c>(PANEL_N));
        for (size_t p = 0; p < npan; ++p)
            for (int i = 0; i < PANEL_N; ++i) {
                double t = g.xs[p][i];
                Vec2c s = sigma2V(t) * chi[p][i];
                g0[p][i] = s;
                g1[p][i] = std::exp(2.0 * I1 * k * t) * s;
            }
        // suffix sums of full panels
        std::vector<Vec2c> suf0(npan + 1), suf1(npan + 1);
        for (size_t p = npan; p-- > 0;) {
            Vec2c a0 = suf0[p + 1], a1 = suf1[p + 1];
            for (int i = 0; i < PANEL_N; ++i) {
                a0 += g.ws[p][i] * g0[p][i];
                a1 += g.ws[p][i] * g1[p][i];
            }
            suf0[p] = a0;
            suf1[p] = a1;
        }
        // new chi^n at all nodes via partial-panel cumulative integration
        std::vector<std::vector<Vec2c>> next(npan, std::vector<Vec2c>(PANEL_N));
        for (size_t p = 0; p < npan; ++p) {
            double h = 0.5 * (g.edges[p + 1] - g.edges[p]);
            for (int i = 0; i < PANEL_N; ++i) {
                Vec2c I0 = suf0[p + 1], I1v = suf1[p + 1];
                for (int j = 0; j < PANEL_N; ++j) {
                    I0 += (h * S[i][j]) * g0[p][j];
                    I1v += (h * S[i][j]) * g1[p][j];
                }
                double t = g.xs[p][i];
                Cplx e = std::exp(-2.0 * I1 * k * t);
                next[p][i] = 0.5 * (Pm * I0) + 0.5 * (Qm * (e * I1v));
            }
        }
        chi = std::move(next);
        // value of chi^n at x itself
        Vec2c I0 = suf0[0], I1v = suf1[0];
        Cplx e = std::exp(-2.0 * I1 * k * x);
        Vec2c at_x = 0.5 * (Pm * I0) + 0.5 * (Qm * (e * I1v));
        res.terms.push_back(at_x);
        double lgf = 1.0;
        for (int j = 1; j <= n; ++j) lgf *= rho / j;
        res.term_bounds.push_back(phase_factor * K2 * lgf);
        res.sum += at_x;

        // certified tail after n terms
        double tail = 0.0, term = lgf;
        for (int j = n + 1; j <= n + 60; ++j) {
            term *= rho / j;
            tail += term;
            if (term < 1e-18 * (1.0 + tail)) break;
        }
        res.tail_bound = phase_factor * K2 * tail;
        res.n_used = n;
        if (res.tail_bound < tol) break;
    }
    return res;
}

YExpansion high_energy_Y(double x, const SpectralPoint& pt, const Potential& P,
                         int order) {
    if (!P.smooth())
        throw std::invalid_argument(
            "high_energy_Y: potential with integrable derivative required");
    const double gamma = P.gamma();
    const Cplx k = pt.k;
    const Cplx lam = pt.lambda;
    const double m = P.mass();
    const Cplx a = k / (lam + m) - 1.0;
    const Cplx b = (lam + m) / k - 1.0;

    HighEnergyTables T = build_tables(P);
    PanelGrid g = build_panels(P, x, 4.0 * std::abs(k));
    size_t npan = g.xs.size();
    const auto& S = cumulative_matrix();

    // M, M*, M', M*', N and B = A^{-1} at every node (plus the point x).
    struct NodeData {
        MNValues mn;
        Cplx det;  // 1 - M M*/(4k^2)
        Cplx W11, W12, W21, W22;
    };
    auto fill = [&](double t) {
        NodeData d;
        d.mn = eval_MN(T, t, a, b);
        Cplx MM = d.mn.M * d.mn.Mstar;
        d.det = 1.0 - MM / (4.0 * k * k);
        Cplx twoikN = 2.0 * I1 * k * d.mn.N;
        // W = 2ik N' + s3 (M' - M N - M^2):
        //   [ 2ikN - MM*          M*' + M* N ]
        //   [ M N - M'            MM* - 2ikN ]
        d.W11 = twoikN - MM;
        d.W12 = d.mn.dMstar + d.mn.Mstar * d.mn.N;
        d.W21 = d.mn.M * d.mn.N - d.mn.dM;
        d.W22 = MM - twoikN;
        return d;
    };

    std::vector<std::vector<NodeData>> nd(npan, std::vector<NodeData>(PANEL_N));
    double supM = 0.0;
    for (size_t p = 0; p < npan; ++p)
        for (int i = 0; i < PANEL_N; ++i) {
            nd[p][i] = fill(g.xs[p][i]);
            supM = std::max(supM, std::abs(nd[p][i].mn.M));
        }
    if (std::abs(k) < 2.0 * supM)
        throw std::invalid_argument("high_energy_Y: |k| below invertibility threshold");

    auto Bmat = [&](const NodeData& d) {
        Cplx inv = 1.0 / d.det;
        return Mat2c(inv, inv * d.mn.Mstar / (2.0 * I1 * k),
                     -inv * d.mn.M / (2.0 * I1 * k), inv);
    };

    // Y^0 at nodes and at x
    std::vector<std::vector<Vec2c>> Yn(npan, std::vector<Vec2c>(PANEL_N));
    for (size_t p = 0; p < npan; ++p)
        for (int i = 0; i < PANEL_N; ++i) {
            double t = g.xs[p][i];
            Cplx e = std::exp(I1 * k * t);
            Yn[p][i] = Bmat(nd[p][i]) * Vec2c(e, 0.0);
        }
    NodeData ndx = fill(x);
    Cplx ex = std::exp(I1 * k * x);
    Vec2c Yx = Bmat(ndx) * Vec2c(ex, 0.0);

    YExpansion res;
    res.orders.push_back(Yx);
    res.Y = Yx;

    // int_x^gamma |W| ds for the certified bound (sup-entry norm)
    double W_l1 = 0.0;
    for (size_t p = 0; p < npan; ++p)
        for (int i = 0; i < PANEL_N; ++i) {
            const NodeData& d = nd[p][i];
            double sup = std::max(std::max(std::abs(d.W11), std::abs(d.W12)),
                                  std::max(std::abs(d.W21), std::abs(d.W22)));
            W_l1 += g.ws[p][i] * sup;
        }
    res.W_l1 = W_l1;

    double rho = W_l1 / std::abs(k);
    double boundpref = 2.0 * std::exp(std::abs(k.imag()) * (2.0 * gamma - x));

    for (int n = 1; n <= order; ++n) {
        // integrand e^{-ik s3 t} W(t) Y^{n-1}(t) at nodes
        std::vector<std::vector<Vec2c>> gi(npan, std::vector<Vec2c>(PANEL_N));
        for (size_t p = 0; p < npan; ++p)
            for (int i = 0; i < PANEL_N; ++i) {
                double t = g.xs[p][i];
                const NodeData& d = nd[p][i];
                const Vec2c& y = Yn[p][i];
                Cplx em = std::exp(-I1 * k * t), ep = std::exp(I1 * k * t);
                gi[p][i] = {em * (d.W11 * y.a + d.W12 * y.b),
                            ep * (d.W21 * y.a + d.W22 * y.b)};
            }
        std::vector<Vec2c> suf(npan + 1);
        for (size_t p = npan; p-- > 0;) {
            Vec2c acc = suf[p + 1];
            for (int i = 0; i < PANEL_N; ++i) acc += g.ws[p][i] * gi[p][i];
            suf[p] = acc;
        }
        std::vector<std::vector<Vec2c>> next(npan, std::vector<Vec2c>(PANEL_N));
        Cplx pref = 1.0 / (2.0 * I1 * k);
        for (size_t p = 0; p < npan; ++p) {
            double h = 0.5 * (g.edges[p + 1] - g.edges[p]);
            for (int i = 0; i < PANEL_N; ++i) {
                Vec2c C = suf[p + 1];
                for (int j = 0; j < PANEL_N; ++j) C += (h * S[i][j]) * gi[p][j];
                double t = g.xs[p][i];
                Cplx ep = std::exp(I1 * k * t), em = std::exp(-I1 * k * t);
                Vec2c integ(ep * C.a, em * C.b);  // e^{+ik s3 t} C
                next[p][i] = Bmat(nd[p][i]) * (pref * integ);
            }
        }
        Yn = std::move(next);
        // value at x
        Vec2c C = suf[0];
        Vec2c integ(std::exp(I1 * k * x) * C.a, std::exp(-I1 * k * x) * C.b);
        Vec2c yx = Bmat(ndx) * (pref * integ);
        res.orders.push_back(yx);
        res.Y += yx;

        double lgf = 1.0;
        for (int j = 1; j <= n; ++j) lgf *= rho / j;
        double tail = 0.0, term = lgf;
        for (int j = n + 1; j <= n + 80; ++j) {
            term *= rho / j;
            tail += term;
            if (term < 1e-18 * (1.0 + tail)) break;
        }
        res.tail_bound = boundpref * tail;
        if (res.tail_bound < 1e-14 * (1.0 + res.Y.norm_inf())) break;
    }

    // f = e^{i Omega0} [[k0,k0],[1,-1]] diag(e^{-i mu}, e^{i mu}) Y
    Cplx k0 = k0_of(pt);
    Cplx eo = std::exp(I1 * P.derived().omega0);
    double mu = P.v_integral(x);
    Cplx y1 = std::exp(-I1 * mu) * res.Y.a;
    Cplx y2 = std::exp(I1 * mu) * res.Y.b;
    res.f1 = eo * k0 * (y1 + y2);
    res.f2 = eo * (y1 - y2);
    return res;
}

Cplx asymptotic_B(Cplx lambda, const Potential& P) {
    if (!P.smooth())
        throw std::invalid_argument("asymptotic_B: smooth potential required");
    Cplx k = k_branch(lambda, P.mass());
    Cplx B = P.derived().B0;
    // B1 = int_0^gamma e^{2ikx} g(x) dx,  g = e^{-2i mu} (w~' - 2 i v w~),
    // w~ = conj(w); tabulated piecewise-polynomially, then integrated in
    // closed form against e^{2ikx}.
    const int deg = 18;
    auto gfun = [&](double t) {
        Cplx em = std::exp(-2.0 * I1 * P.v_integral(t));
        // conj(w)' = q' - i p'; differentiate the segment polynomials
        const Segment* seg = nullptr;
        for (const Segment& s : P.segments())
            if (t >= s.lo && t <= s.hi) {
                seg = &s;
                break;
            }
        Cplx dw = 0.0;
        if (seg) {
            double u = t - seg->lo;
            double dq = poly_eval(poly_derivative(seg->q), u);
            double dp = 0.5 * (poly_eval(poly_derivative(seg->p1), u) -
                               poly_eval(poly_derivative(seg->p2), u));
            dw = Cplx(dq, -dp);
        }
        return em * (dw - 2.0 * I1 * P.v(t) * std::conj(P.w(t)));
    };
    const std::vector<double>& bks = P.breakpoints();
    for (size_t i = 0; i + 1 < bks.size(); ++i) {
        double a = bks[i], b = bks[i + 1];
        double rate = 0.0;
        for (double t = a; t <= b; t += (b - a) / 16.0)
            rate = std::max(rate, 2.0 * std::abs(P.v(t)));
        int np = std::max(1, static_cast<int>(std::ceil((b - a) * rate / 1.0)));
        for (int p = 0; p < np; ++p) {
            double lo = a + (b - a) * p / np, hi = a + (b - a) * (p + 1) / np;
            std::vector<Cplx> cf = chebyshev_fit_monomial_c(gfun, lo, hi, deg);
            B += std::exp(2.0 * I1 * k * lo) *
                 poly_times_exp_integral(cf, hi - lo, 2.0 * k);
        }
    }
    return B;
}

double exponential_type_estimate(const Potential& P, bool lower,
                                 const std::vector<double>& radii, double tol) {
    if (radii.size() < 2)
        throw std::invalid_argument("exponential_type_estimate: need >= 2 radii");
    std::vector<double> lr;
    JostOptions jo;
    jo.tol = tol;
    jo.force_ode_route = true;
    for (double r : radii) {
        Cplx lam = lower ? Cplx(0.0, -r) : Cplx(0.0, r);
        Sheet sh = lower ? Sheet::NonPhysical : Sheet::PhysicalUpper;
        SpectralPoint pt = quasimomentum(lam, P.mass(), sh);
        JostEvaluation ev = jost_function(pt, P, jo);
        lr.push_back(std::log(std::abs(ev.f1)));
    }
    // least squares slope of log|f1| against r
    double n = static_cast<double>(radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < radii.size(); ++i) {
        sx += radii[i];
        sy += lr[i];
        sxx += radii[i] * radii[i];
        sxy += radii[i] * lr[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace diracres
