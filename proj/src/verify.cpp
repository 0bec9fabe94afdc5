#include "diracres/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "diracres/fredholm.hpp"
#include "diracres/io.hpp"
#include "diracres/jost.hpp"
#include "diracres/oracle.hpp"
#include "diracres/quadrature.hpp"
#include "diracres/scattering.hpp"
#include "diracres/states.hpp"

namespace diracres {
namespace verify {

namespace {

const Cplx I1(0.0, 1.0);

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

struct Check {
    bool pass = true;
    double margin = 1e300;
    std::ostringstream details;

    /// require value <= tol; margin tracks (tol - value)
    void le(const std::string& what, double value, double tol) {
        bool ok = value <= tol;
        pass = pass && ok;
        margin = std::min(margin, tol - value);
        details << what << "=" << fmt(value) << (ok ? " <= " : " !<= ") << fmt(tol)
                << "; ";
    }
    void is_true(const std::string& what, bool ok, double mg = 0.0) {
        pass = pass && ok;
        if (!ok) margin = std::min(margin, -1.0);
        else margin = std::min(margin, mg);
        details << what << (ok ? " ok" : " FAIL") << "; ";
    }
};

}  // namespace

Potential fixture_free() {
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    return Potential(1.0, 1.0, {s}, true);
}

Potential fixture_q1() {
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    s.q = {1.0};
    return Potential(1.0, 1.0, {s});
}

Potential fixture_deep_well() {
    // v-well p1 = p2 = -c: strongly oscillatory inside the support, pulls a
    // handful of eigenvalues into the gap.
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    s.p1 = {-10.0};
    s.p2 = {-10.0};
    return Potential(1.0, 1.0, {s});
}

Potential fixture_bump() {
    // q(x) = 12 x^2 (1-x)^2 = 12x^2 - 24x^3 + 12x^4: C^1 bump, V' integrable
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    s.q = {0.0, 0.0, 12.0, -24.0, 12.0};
    return Potential(1.0, 1.0, {s});
}

Potential fixture_gauge() {
    // int v = 2 pi: the rotation at x=0 is a full turn, so the Jost function
    // is preserved exactly.
    Segment s;
    s.lo = 0.0;
    s.hi = 1.0;
    s.p1 = {2.0 * PI};
    s.p2 = {2.0 * PI};
    return Potential(1.0, 1.0, {s});
}

std::vector<Potential> fixtures_piecewise_constant() {
    std::vector<Potential> out;
    out.push_back(fixture_q1());
    {
        Segment a{0.0, 0.5, {1.0}, {}, {}}, b{0.5, 1.0, {}, {-1.0}, {}};
        out.push_back(Potential(1.0, 1.0, {a, b}));
    }
    {
        Segment a{0.0, 0.3, {0.5}, {0.5}, {1.5}}, b{0.3, 0.8, {}, {}, {-2.0}},
            c{0.8, 1.2, {1.0}, {-1.0}, {0.5}};
        out.push_back(Potential(1.0, 1.2, {a, b, c}));
    }
    {
        Segment a{0.0, 0.7, {}, {3.0}, {}};
        out.push_back(Potential(0.5, 0.7, {a}));
    }
    {
        Segment a{0.0, 0.25, {-4.0}, {2.0}, {1.0}}, b{0.25, 0.5, {2.0}, {-2.0}, {-3.0}};
        out.push_back(Potential(2.0, 0.5, {a, b}));
    }
    return out;
}

namespace {

oracle::PiecewiseConstantPotential to_pc(const Potential& P) {
    oracle::PiecewiseConstantPotential pc;
    pc.m = P.mass();
    pc.gamma = P.gamma();
    for (const Segment& s : P.segments())
        pc.cells.push_back({s.lo, s.hi, s.p1.empty() ? 0.0 : s.p1[0],
                            s.p2.empty() ? 0.0 : s.p2[0],
                            s.q.empty() ? 0.0 : s.q[0]});
    return pc;
}

// ---- criterion bodies -----------------------------------------------------

CriterionResult c1_free_exactness(int) {
    Check ck;
    Potential P = fixture_free();
    double worst_f1 = 0.0, worst_F = 0.0;
    for (int i = 0; i < 12; ++i) {
        double th = 2.0 * PI * i / 12 + 0.13;
        Cplx l = 2.5 * std::exp(I1 * th);
        if (std::abs(l.imag()) < 0.05) continue;
        Sheet sh = l.imag() > 0 ? Sheet::PhysicalUpper : Sheet::NonPhysical;
        SpectralPoint pt = quasimomentum(l, 1.0, sh);
        JostEvaluation ev = jost_function(pt, P);
        worst_f1 = std::max(worst_f1, std::abs(ev.f1 - k0_of(pt)));
        worst_F = std::max(worst_F, std::abs(F_eval(l, P) - (l + 1.0)));
    }
    ck.le("free |f1-k0|", worst_f1, 1e-10);
    ck.le("free |F-(l+m)|", worst_F, 1e-10);
    ck.le("free |D-1|", std::abs(det2(Cplx(1.0, 2.0), P, 64).value - 1.0), 1e-10);
    double wo = 0.0, ws = 0.0;
    for (double l : {1.7, 2.9, -2.2, 6.0, -4.4}) {
        wo = std::max(wo, std::abs(omega(l, P)));
        ws = std::max(ws, std::abs(scattering_matrix(l, P) - 1.0));
    }
    ck.le("free |Omega|", wo, 1e-10);
    ck.le("free |S-1|", ws, 1e-10);
    std::vector<StateRecord> st = find_states(P, {-3.0, 3.0, -3.0, 0.5});
    ck.is_true("single state", st.size() == 1);
    if (st.size() == 1) {
        ck.is_true("virtual at -m", st[0].cls == StateClass::Virtual &&
                                        std::abs(st[0].lambda + 1.0) < 1e-8);
        ck.le("virtual residual", st[0].residual, 1e-10);
    }
    return {1, "free-operator exactness", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c2_oracle_equivalence(int threads) {
    Check ck;
    std::vector<Potential> fixtures = fixtures_piecewise_constant();
    double worst = 0.0;
    std::mutex mu;
    for (const Potential& P : fixtures) {
        oracle::PiecewiseConstantPotential pc = to_pc(P);
        std::vector<Cplx> grid;
        for (int i = 0; i < 50; ++i) {
            double th = PI * (i + 0.5) / 50;
            grid.push_back(18.0 * std::exp(I1 * th) + Cplx(0.0, 0.3));
            grid.push_back(std::conj(18.0 * std::exp(I1 * th) + Cplx(0.0, 0.3)));
        }
        parallel_for(grid.size(), threads, [&](size_t i) {
            Cplx l = grid[i];
            Sheet sh = l.imag() > 0 ? Sheet::PhysicalUpper : Sheet::NonPhysical;
            SpectralPoint pt = quasimomentum(l, P.mass(), sh);
            JostOptions jo;
            jo.force_ode_route = true;
            Cplx ode = jost_function(pt, P, jo).f1;
            Cplx ora = oracle::transfer_matrix_closed_form(pc, pt).f1;
            double rel = std::abs(ode - ora) / std::max(1e-30, std::abs(ora));
            std::lock_guard<std::mutex> lk(mu);
            worst = std::max(worst, rel);
        });
    }
    ck.le("sup rel |f1_ode - f1_oracle|", worst, 1e-8);
    return {2, "oracle equivalence (5 piecewise-constant fixtures)", ck.pass,
            ck.margin, ck.details.str(), 0};
}

CriterionResult c3_wronskian(int threads) {
    Check ck;
    Potential P = fixture_q1();
    double worst = 0.0;
    std::mutex mu;
    parallel_for(50, threads, [&](size_t i) {
        double sgn = (i % 2 == 0) ? 1.0 : -1.0;
        double l = sgn * (1.15 + 28.0 * static_cast<double>(i) / 49.0);
        SpectralPoint pt = quasimomentum(l, P.mass(), Sheet::PhysicalUpper);
        JostOptions jo;
        jo.force_ode_route = true;
        JostEvaluation ev = jost_function(pt, P, jo);
        std::lock_guard<std::mutex> lk(mu);
        worst = std::max(worst, ev.wronskian_residual);
    });
    ck.le("max |det(f+,f-) - 2k0|", worst, 1e-8);
    return {3, "Wronskian conservation on the continuous spectrum", ck.pass,
            ck.margin, ck.details.str(), 0};
}

CriterionResult c4_entirety(int threads) {
    Check ck;
    Potential P = fixture_q1();
    double worst = 0.0;
    std::mutex mu;
    parallel_for(41, threads, [&](size_t i) {
        double l = -5.0 + 10.0 * static_cast<double>(i) / 40.0;
        Cplx up = F_eval(Cplx(l, 1e-6), P);
        Cplx dn = F_eval(Cplx(l, -1e-6), P);
        std::lock_guard<std::mutex> lk(mu);
        worst = std::max(worst, std::abs(up - dn));
    });
    ck.le("max |F(l+ie)-F(l-ie)|", worst, 1e-8);
    return {4, "entirety of F across gap and spectrum", ck.pass, ck.margin,
            ck.details.str(), 0};
}

CriterionResult c5_counting(int) {
    Check ck;
    Potential P = fixture_q1();
    CountingReport rep = counting_report(P, {100.0, 200.0}, 0.2, 1e-9);
    double ratio = rep.counts[1] / rep.predicted[1];
    ck.is_true("N(200)/(2r/pi) in [0.9,1.1]", ratio >= 0.9 && ratio <= 1.1,
               0.1 - std::abs(ratio - 1.0));
    double frac100 = static_cast<double>(rep.sector_outliers[0]) /
                     std::max<long>(1, rep.counts[0]);
    double frac200 = static_cast<double>(rep.sector_outliers[1]) /
                     std::max<long>(1, rep.counts[1]);
    ck.is_true("outlier fraction decreasing", frac200 <= frac100,
               frac100 - frac200);
    ck.details << "N(100)=" << rep.counts[0] << " N(200)=" << rep.counts[1]
               << " ratio=" << fmt(ratio) << " outlier100=" << fmt(frac100)
               << " outlier200=" << fmt(frac200) << "; ";
    return {5, "resonance counting law", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c6_antibound_parity(int) {
    Check ck;
    Potential P = fixture_deep_well();
    std::vector<StateRecord> gap =
        find_states(P, {-0.995, 0.995, -0.02, 0.02});
    std::vector<double> eigs;
    for (const auto& s : gap)
        if (s.cls == StateClass::Eigenvalue) eigs.push_back(s.lambda.real());
    std::sort(eigs.begin(), eigs.end());
    ck.is_true(">=2 eigenvalues (found " + std::to_string(eigs.size()) + ")",
               eigs.size() >= 2);
    for (size_t i = 0; i + 1 < eigs.size(); ++i) {
        int cnt = antibound_parity(P, eigs[i], eigs[i + 1]);
        ck.is_true("odd antibound count in (" + fmt(eigs[i]) + "," +
                       fmt(eigs[i + 1]) + "): " + std::to_string(cnt),
                   cnt % 2 == 1 && cnt >= 1);
    }
    for (double e : eigs) {
        double dF = F_derivative_at(e, P);
        ck.is_true("dF<0 at " + fmt(e), dF < 0.0);
        // norming-constant cross-check: dF = -2|k| ||f||^2 / f2(0)^2
        SpectralPoint pt = quasimomentum(e, P.mass(), Sheet::PhysicalUpper);
        JostEvaluation ev = jost_function(pt, P);
        std::vector<double> xs, ws;
        mapped_gauss_legendre(96, 0.0, P.gamma(), xs, ws);
        std::vector<Vec2c> fs = jost_samples(pt, P, xs);
        Cplx nrm = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
            nrm += ws[i] * (fs[i].a * fs[i].a + fs[i].b * fs[i].b);
        Cplx k0 = k0_of(pt);
        double kk = std::abs(pt.k);
        nrm += (k0 * k0 + 1.0) * std::exp(-2.0 * kk * P.gamma()) / (2.0 * kk);
        double rhs = -2.0 * kk * (nrm / (ev.f2 * ev.f2)).real();
        ck.le("norming cross-check rel err at " + fmt(e),
              std::abs(dF - rhs) / std::abs(dF), 1e-3);
    }
    return {6, "antibound parity and dF sign", ck.pass, ck.margin,
            ck.details.str(), 0};
}

CriterionResult c7_forbidden_domain(int) {
    Check ck;
    Potential P = fixture_bump();
    std::vector<StateRecord> st =
        find_states(P, {0.5, 26.0, -11.0, -0.05});
    int nres = 0;
    for (const auto& s : st)
        if (s.cls == StateClass::Resonance) ++nres;
    ck.is_true("resonances located (" + std::to_string(nres) + ")", nres >= 3);
    ForbiddenDomainReport rep = forbidden_domain_check(P, st, 60.0, 1200);
    ck.is_true("all resonances satisfy the log-neighborhood bound", rep.all_pass);
    double worst = 1e300;
    for (const auto& e : rep.entries) worst = std::min(worst, e.margin / e.rhs);
    ck.details << "C1=" << fmt(rep.C1) << " C1_refined=" << fmt(rep.C1_refined)
               << " min rel margin=" << fmt(worst) << "; ";
    return {7, "forbidden domain", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c8_high_energy(int threads) {
    Check ck;
    Potential P = fixture_bump();
    const double omega0 = P.derived().omega0;
    int n = 24;
    std::vector<double> gl(n), gp(n), xs(n);
    parallel_for(n, threads, [&](size_t i) {
        double l = 50.0 * std::pow(800.0 / 50.0, static_cast<double>(i) / (n - 1));
        SpectralPoint pt = quasimomentum(l, P.mass(), Sheet::PhysicalUpper);
        JostEvaluation ev = jost_function(pt, P);
        Cplx B = asymptotic_B(l, P);
        Cplx g = ev.f1 / (k0_of(pt) * std::exp(I1 * omega0)) - 1.0 +
                 B / (2.0 * I1 * l);
        double phi = std::arg(ev.f1) + 0.5 * PI;
        phi -= 2.0 * PI * std::round((phi - omega0) / (2.0 * PI));
        double gphase = std::abs(phi - omega0 - B.real() / (2.0 * l));
        xs[i] = std::log(l);
        gl[i] = std::log(std::max(1e-300, std::abs(g)));
        gp[i] = std::log(std::max(1e-300, gphase));
    });
    double slope_amp = fit_slope(xs, gl);
    double slope_phase = fit_slope(xs, gp);
    ck.le("amplitude residual slope", slope_amp, -1.8);
    ck.le("phase residual slope", slope_phase, -1.8);
    double worst_l2g = 0.0;
    for (int i = 0; i < n; ++i)
        worst_l2g = std::max(worst_l2g,
                             std::exp(gl[i] + 2.0 * xs[i]));
    ck.details << "max |l^2 g|=" << fmt(worst_l2g) << "; ";
    ck.is_true("l^2-residual bounded", std::isfinite(worst_l2g));
    return {8, "high-energy expansion", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c9_exponential_type(int) {
    Check ck;
    std::vector<double> radii{60.0, 90.0, 120.0, 150.0};
    for (const Potential& P : {fixture_q1(), fixture_bump()}) {
        double lo = exponential_type_estimate(P, true, radii);
        double up = exponential_type_estimate(P, false, radii);
        double target = 2.0 * P.gamma();
        ck.le("lower type rel err", std::abs(lo - target) / target, 0.05);
        ck.le("upper type abs", std::abs(up), 0.05);
    }
    return {9, "exponential type 0 / 2*gamma", ck.pass, ck.margin,
            ck.details.str(), 0};
}

CriterionResult c10_det_identities(int threads) {
    Check ck;
    Potential Pq = fixture_q1();
    double worstS = 0.0, worstPhi = 0.0;
    std::mutex mu;
    parallel_for(10, threads, [&](size_t i) {
        double l = (i < 5 ? 1.0 : -1.0) * (1.6 + 0.8 * static_cast<double>(i % 5));
        IdentityCheck chk = identity_S_from_D(l, Pq, 200);
        // phase version: phi_sc = Omega + arg D(l+i0) modulo 2 pi
        Cplx Dp = det2_boundary(l, true, Pq, 200);
        Cplx f1 = jost_function(quasimomentum(l, 1.0, Sheet::PhysicalUpper), Pq).f1;
        double lhs_phase = std::arg(f1) + 0.5 * PI;
        double rhs_phase = omega(l, Pq) + std::arg(Dp);
        double dphi = std::abs(std::exp(I1 * lhs_phase) - std::exp(I1 * rhs_phase));
        std::lock_guard<std::mutex> lk(mu);
        worstS = std::max(worstS, chk.diff);
        worstPhi = std::max(worstPhi, dphi);
    });
    ck.le("max |S - (D-/D+) e^{-2i Omega}|", worstS, 5e-3);
    ck.le("max phase identity defect", worstPhi, 5e-3);

    Potential Pb = fixture_bump();
    double worstA = 0.0;
    std::vector<Cplx> pts{{1.0, 1.0}, {2.0, 1.5}, {3.0, 2.0}, {0.5, 2.0}, {-1.5, 1.2}};
    std::mutex mu2;
    parallel_for(pts.size(), threads, [&](size_t i) {
        IdentityCheck chk = identity_a_eq_D(pts[i], Pb, 200, 400.0);
        double rel = chk.diff / std::abs(chk.lhs);
        std::lock_guard<std::mutex> lk(mu2);
        worstA = std::max(worstA, rel);
    });
    ck.le("max rel |f1 - k0 D e^{...}|", worstA, 1e-2);
    return {10, "determinant identities", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c11_det_bounds(int threads) {
    Check ck;
    Potential Pb = fixture_bump();
    Potential Pq = fixture_q1();
    double worst_violation = -1e300;
    std::mutex mu;
    std::vector<Cplx> pts;
    for (int i = 0; i < 12; ++i)
        pts.push_back(Cplx(-4.0 + 8.0 * i / 11.0, 0.4 + 0.35 * i));
    parallel_for(pts.size(), threads, [&](size_t i) {
        DetEvaluation ev = det2(pts[i], Pq, 160);
        std::lock_guard<std::mutex> lk(mu);
        worst_violation = std::max(worst_violation, -ev.bound_margin);
    });
    ck.le("max (|D| - e^{hs^2/2})", worst_violation, 1e-10);
    DetEvaluation far = det2(Cplx(0.0, 200.0), Pb, 200);
    ck.le("|D(200i)-1|", std::abs(far.value - 1.0), 1e-3);
    TraceSeriesResult ts = det2_trace_series(Cplx(0.0, 10.0), Pb, 160, 8);
    DetEvaluation dv = det2(Cplx(0.0, 10.0), Pb, 160);
    ck.le("trace series vs det2", std::abs(ts.det_value - dv.value),
          ts.remainder_bound + 1e-8);
    TraceSeriesResult ts2 = det2_trace_series(Cplx(0.0, 10.0), Pb, 160, 12);
    ck.is_true("remainder decreases with n_max",
               ts2.remainder_bound < ts.remainder_bound,
               ts.remainder_bound - ts2.remainder_bound);
    return {11, "determinant bounds", ck.pass, ck.margin, ck.details.str(), 0};
}

CriterionResult c12_hs_certificate(int threads) {
    Check ck;
    Potential P = fixture_q1();
    std::vector<Cplx> pts{{0.0, 5.0}, {1.0, 2.0}, {3.0, 1.0}, {-2.0, 3.0},
                          {2.0, -2.0}, {-3.5, -1.5}, {0.5, 1.5}};
    double worst_ratio = 0.0;
    std::mutex mu;
    parallel_for(pts.size(), threads, [&](size_t i) {
        HsCertificate c = hs_norm_certificate(pts[i], P, 200);
        double ratio = c.hs_norm_sq / c.paper_bound;
        std::lock_guard<std::mutex> lk(mu);
        worst_ratio = std::max(worst_ratio, ratio);
    });
    ck.le("max hs^2 / bound", worst_ratio, 1.0 / 1.1);
    double h10 = hs_norm_certificate(Cplx(0.0, 10.0), P, 200).hs_norm_sq;
    double h40 = hs_norm_certificate(Cplx(0.0, 40.0), P, 200).hs_norm_sq;
    double h160 = hs_norm_certificate(Cplx(0.0, 160.0), P, 240).hs_norm_sq;
    ck.is_true("hs decays along it", h40 < h10 && h160 < h40, h40 - h160);
    ck.le("hs(160i)", h160, 0.25 * h10);
    return {12, "Hilbert-Schmidt certificate", ck.pass, ck.margin,
            ck.details.str(), 0};
}

CriterionResult c13_relativistic_integral(int threads) {
    Check ck;
    const double m = 1.0;
    std::vector<Cplx> pts;
    for (int i = 0; i < 20; ++i) {
        double r = 3.0 + 37.0 * i / 19.0;
        double th = 0.15 + 0.75 * PI * (i % 7) / 7.0;
        pts.push_back(r * std::exp(I1 * th));
    }
    double C = 0.0;
    std::mutex mu;
    parallel_for(pts.size(), threads, [&](size_t i) {
        RelativisticIntegral r = relativistic_integral(pts[i], m);
        std::lock_guard<std::mutex> lk(mu);
        C = std::max(C, r.diff / r.remainder_scale);
    });
    ck.le("fitted remainder constant C", C, 10.0 * m);
    return {13, "relativistic integral closed form", ck.pass, ck.margin,
            ck.details.str(), 0};
}

CriterionResult c14_gauge_invariance(int threads) {
    Check ck;
    Potential P = fixture_gauge();
    Potential G = gauge_transform(P);
    double vres = 0.0;
    for (double x = 0.01; x < 1.0; x += 0.043)
        vres = std::max(vres, std::abs(G.v(x)));
    ck.le("transformed v == 0", vres, 1e-14);
    std::vector<Cplx> pts;
    for (int i = 0; i < 10; ++i) {
        pts.push_back(Cplx(1.3 + 0.5 * i, 0.0));
        pts.push_back(Cplx(0.4 * i - 2.0, 1.0 + 0.3 * i));
    }
    double worst = 0.0;
    std::mutex mu;
    parallel_for(pts.size(), threads, [&](size_t i) {
        Cplx l = pts[i];
        if (std::abs(l.imag()) < 1e-12 && std::abs(l.real()) <= 1.0) return;
        Sheet sh = l.imag() >= 0 ? Sheet::PhysicalUpper : Sheet::NonPhysical;
        SpectralPoint pt = quasimomentum(l, 1.0, sh);
        JostOptions jo;
        jo.force_ode_route = true;
        Cplx f_before = jost_function(pt, P, jo).f1;
        Cplx f_after = jost_function(pt, G, jo).f1;
        std::lock_guard<std::mutex> lk(mu);
        worst = std::max(worst, std::abs(f_before - f_after));
    });
    ck.le("max |f1 - f1_gauged| over 20 points", worst, 1e-8);
    return {14, "gauge invariance at int v = 2 pi", ck.pass, ck.margin,
            ck.details.str(), 0};
}

using CriterionFn = CriterionResult (*)(int);
const CriterionFn kCriteria[] = {
    c1_free_exactness,   c2_oracle_equivalence, c3_wronskian,
    c4_entirety,         c5_counting,           c6_antibound_parity,
    c7_forbidden_domain, c8_high_energy,        c9_exponential_type,
    c10_det_identities,  c11_det_bounds,        c12_hs_certificate,
    c13_relativistic_integral, c14_gauge_invariance,
};

}  // namespace

CriterionResult run_criterion(int id, int threads) {
    if (id < 1 || id > 14) throw std::invalid_argument("criterion id 1..14");
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = kCriteria[id - 1](threads);
    } catch (const std::exception& e) {
        r.id = id;
        r.name = "criterion " + std::to_string(id);
        r.pass = false;
        r.margin = -1.0;
        r.details = std::string("exception: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(int threads) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 14; ++id) out.push_back(run_criterion(id, threads));
    return out;
}

std::string report_text(const std::vector<CriterionResult>& rs) {
    std::ostringstream os;
    for (const auto& r : rs) {
        os << "[" << (r.id < 10 ? " " : "") << r.id << "/14] "
           << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (margin "
           << fmt(r.margin) << ", " << fmt(r.seconds) << " s)\n";
        if (!r.pass) os << "        " << r.details << "\n";
    }
    int np = 0;
    for (const auto& r : rs) np += r.pass ? 1 : 0;
    os << np << "/" << rs.size() << " criteria passed\n";
    return os.str();
}

std::string report_json(const std::vector<CriterionResult>& rs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rs) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["name"] = r.name;
        e["pass"] = r.pass;
        e["margin"] = r.margin;
        e["seconds"] = r.seconds;
        e["details"] = r.details;
        j.push_back(e);
    }
    return j.dump(2);
}

}  // namespace verify
}  // namespace diracres
