#include "diracres/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diracres {

namespace {

const Cplx I1(0.0, 1.0);

struct NearZeroOnBoundary : std::runtime_error {
    explicit NearZeroOnBoundary(Cplx z)
        : std::runtime_error("winding: vanishing function value on the contour near (" +
                             std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                             ")"),
          where(z) {}
    Cplx where;
};

/// Continuous arg increment of f along [z0,z1], refining until every step
/// turns by less than pi/2.
template <typename F>
double phase_increment(const F& f, Cplx z0, Cplx f0, Cplx z1, Cplx f1, int depth) {
    if (std::abs(f0) == 0.0) throw NearZeroOnBoundary{z0};
    if (std::abs(f1) == 0.0) throw NearZeroOnBoundary{z1};
    double d = std::arg(f1 / f0);
    if (std::abs(d) <= 0.5 * PI) return d;
    if (depth <= 0) throw NearZeroOnBoundary{0.5 * (z0 + z1)};
    Cplx zm = 0.5 * (z0 + z1);
    Cplx fm = f(zm);
    return phase_increment(f, z0, f0, zm, fm, depth - 1) +
           phase_increment(f, zm, fm, z1, f1, depth - 1);
}

/// Winding number of f along a closed polyline (last point joined to first).
template <typename F>
long winding_along(const F& f, const std::vector<Cplx>& pts, int depth = 42) {
    std::vector<Cplx> vals(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
    double total = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        size_t j = (i + 1) % pts.size();
        total += phase_increment(f, pts[i], vals[i], pts[j], vals[j], depth);
    }
    double w = total / (2.0 * PI);
    long n = std::lround(w);
    if (std::abs(w - n) > 0.25)
        throw std::runtime_error("winding: non-integer total turning " +
                                 std::to_string(w));
    return n;
}

std::vector<Cplx> rect_boundary(const Rect& r, int per_edge) {
    std::vector<Cplx> pts;
    pts.reserve(4 * per_edge);
    for (int i = 0; i < per_edge; ++i)
        pts.emplace_back(r.x0 + (r.x1 - r.x0) * i / per_edge, r.y0);
    for (int i = 0; i < per_edge; ++i)
        pts.emplace_back(r.x1, r.y0 + (r.y1 - r.y0) * i / per_edge);
    for (int i = 0; i < per_edge; ++i)
        pts.emplace_back(r.x1 - (r.x1 - r.x0) * i / per_edge, r.y1);
    for (int i = 0; i < per_edge; ++i)
        pts.emplace_back(r.x0, r.y1 - (r.y1 - r.y0) * i / per_edge);
    return pts;
}

/// f1 on the gap rims: real-valued for real lambda in (-m,m).
double f1_on_rim(const Potential& P, double lambda, bool upper, double tol) {
    SpectralPoint pt = quasimomentum(
        lambda, P.mass(), upper ? Sheet::PhysicalUpper : Sheet::NonPhysical);
    FundamentalValues fv = fundamental_tilde(lambda, P, tol);
    Cplx f1 = k0_of(pt) * fv.theta.a + fv.phi.a;
    return f1.real();
}

}  // namespace

std::string to_string(StateClass c) {
    switch (c) {
        case StateClass::Eigenvalue: return "eigenvalue";
        case StateClass::Resonance: return "resonance";
        case StateClass::Antibound: return "antibound";
        case StateClass::Virtual: return "virtual";
    }
    return "?";
}

Cplx F_eval(Cplx lambda, const Potential& P, double tol) {
    FundamentalValues fv = fundamental_tilde(lambda, P, tol);
    double m = P.mass();
    return (lambda + m) * fv.theta.a * fv.theta.a +
           (lambda - m) * fv.phi.a * fv.phi.a;
}

void F_eval_with_derivative(Cplx lambda, const Potential& P, Cplx& F, Cplx& dF,
                            double tol) {
    FundamentalValues fv = fundamental_tilde(lambda, P, tol, true);
    double m = P.mass();
    F = (lambda + m) * fv.theta.a * fv.theta.a + (lambda - m) * fv.phi.a * fv.phi.a;
    dF = fv.theta.a * fv.theta.a + fv.phi.a * fv.phi.a +
         2.0 * (lambda + m) * fv.theta.a * fv.theta_d.a +
         2.0 * (lambda - m) * fv.phi.a * fv.phi_d.a;
}

double F_derivative_at(double lambda, const Potential& P, double tol) {
    double h = 1e-5 * (1.0 + std::abs(lambda));
    auto central = [&](double hh) {
        Cplx fp = F_eval(Cplx(lambda + hh, 0.0), P, tol);
        Cplx fm = F_eval(Cplx(lambda - hh, 0.0), P, tol);
        return (fp.real() - fm.real()) / (2.0 * hh);
    };
    double d1 = central(h), d2 = central(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;  // Richardson, O(h^4)
}

int winding_number_F(const Rect& r, const Potential& P, double ode_tol,
                     int initial_per_edge) {
    auto f = [&](Cplx z) { return F_eval(z, P, ode_tol); };
    Rect rr = r;
    double nudge = 1e-6 * (1.0 + std::max(std::abs(r.x0), std::abs(r.x1)));
    for (int attempt = 0;; ++attempt) {
        try {
            return static_cast<int>(
                winding_along(f, rect_boundary(rr, initial_per_edge)));
        } catch (const NearZeroOnBoundary&) {
            if (attempt >= 4) throw std::runtime_error("winding: zero on boundary persists after nudging");
            rr.x0 -= nudge;
            rr.x1 += nudge;
            rr.y0 -= nudge;
            rr.y1 += nudge;
            nudge *= 2.3;
        }
    }
}

namespace {

struct Finder {
    const Potential& P;
    const FindOptions& opt;
    std::vector<StateRecord> found;
    double scale;  // 1 + max |lambda| in region

    bool newton(Cplx& z, double& residual, int& iters) {
        Cplx F, dF;
        for (iters = 0; iters < 60; ++iters) {
            F_eval_with_derivative(z, P, F, dF, opt.ode_tol);
            if (std::abs(dF) == 0.0) return false;
            Cplx dz = F / dF;
            z -= dz;
            if (std::abs(dz) < opt.newton_tol * (1.0 + std::abs(z))) {
                F_eval_with_derivative(z, P, F, dF, opt.ode_tol);
                residual = std::abs(F);
                return true;
            }
        }
        return false;
    }

    void classify_and_store(Cplx z, int multiplicity, double residual, int iters,
                            bool cluster) {
        const double m = P.mass();
        double snap = 1e-8 * (1.0 + std::abs(z));
        StateRecord rec;
        rec.multiplicity = multiplicity;
        rec.residual = residual;
        rec.newton_iters = iters;
        rec.unresolved_cluster = cluster;

        if (std::abs(z.imag()) < snap && std::abs(z.real() - m) < 1e-8 * (1.0 + m)) {
            // z-chart probe at +m: virtual iff theta~_1(0,m) = 0
            FundamentalValues fv = fundamental_tilde(Cplx(m, 0.0), P, opt.ode_tol);
            rec.lambda = Cplx(m, 0.0);
            rec.k = 0.0;
            rec.cls = StateClass::Virtual;
            rec.residual = std::abs(fv.theta.a);
        } else if (std::abs(z.imag()) < snap &&
                   std::abs(z.real() + m) < 1e-8 * (1.0 + m)) {
            FundamentalValues fv = fundamental_tilde(Cplx(-m, 0.0), P, opt.ode_tol);
            rec.lambda = Cplx(-m, 0.0);
            rec.k = 0.0;
            rec.cls = StateClass::Virtual;
            rec.residual = std::abs(fv.phi.a);
        } else if (std::abs(z.imag()) < snap && std::abs(z.real()) < m) {
            double lr = z.real();
            double fup = f1_on_rim(P, lr, true, opt.ode_tol);
            double fdn = f1_on_rim(P, lr, false, opt.ode_tol);
            bool eigen = std::abs(fup) <= std::abs(fdn);
            rec.lambda = Cplx(lr, 0.0);
            rec.cls = eigen ? StateClass::Eigenvalue : StateClass::Antibound;
            double kk = std::sqrt(std::max(0.0, m * m - lr * lr));
            rec.k = eigen ? Cplx(0.0, kk) : Cplx(0.0, -kk);
        } else if (z.imag() < 0.0) {
            rec.lambda = z;
            rec.cls = StateClass::Resonance;
            rec.k = k_branch(z, m);
        } else {
            // conjugate mirror of a resonance: F(conj z) = conj F(z) = 0; only
            // the lower one is a state.
            return;
        }
        found.push_back(rec);
    }

    void subdivide(const Rect& r, int w, int depth);

    void process(const Rect& r, int depth) {
        int w;
        try {
            w = winding_number_F(r, P, opt.ode_tol);
        } catch (const std::runtime_error&) {
            if (depth <= 0) throw;
            // split and retry deeper; nudging already attempted inside
            subdivide(r, -1, depth);
            return;
        }
        if (w == 0) return;
        double diag = std::hypot(r.x1 - r.x0, r.y1 - r.y0);
        double floor_sep = opt.separation_floor_scale * scale;
        if (w == 1 || diag < floor_sep) {
            Cplx z(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
            double residual = 0.0;
            int iters = 0;
            if (newton(z, residual, iters) && r.contains(z, 1e-12 * scale)) {
                classify_and_store(z, w, residual, iters, w > 1);
                return;
            }
            if (diag < floor_sep || depth <= 0) {
                // report the cluster at the cell center
                Cplx c(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
                classify_and_store(c, w, std::abs(F_eval(c, P, opt.ode_tol)), iters,
                                   true);
                return;
            }
        }
        if (depth <= 0)
            throw std::runtime_error("find_states: subdivision depth exhausted");
        subdivide(r, w, depth);
    }
};

void Finder::subdivide(const Rect& r, int /*w*/, int depth) {
    double dx = r.x1 - r.x0, dy = r.y1 - r.y0;
    // split the longer side slightly off-center to dodge symmetric zeros
    const double frac = 0.5127;
    if (dx >= dy) {
        double xm = r.x0 + frac * dx;
        process({r.x0, xm, r.y0, r.y1}, depth - 1);
        process({xm, r.x1, r.y0, r.y1}, depth - 1);
    } else {
        double ym = r.y0 + frac * dy;
        process({r.x0, r.x1, r.y0, ym}, depth - 1);
        process({r.x0, r.x1, ym, r.y1}, depth - 1);
    }
}

}  // namespace

std::vector<StateRecord> find_states(const Potential& P, const Rect& region,
                                     const FindOptions& opt) {
    Finder fd{P, opt, {}, 1.0 + std::max({std::abs(region.x0), std::abs(region.x1),
                                          std::abs(region.y0), std::abs(region.y1)})};
    fd.process(region, opt.max_subdivisions);

    // dedup (adjacent boxes can both refine onto the same root)
    std::sort(fd.found.begin(), fd.found.end(), [](const StateRecord& a,
                                                   const StateRecord& b) {
        if (a.lambda.real() != b.lambda.real())
            return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    std::vector<StateRecord> out;
    double floor_sep = opt.separation_floor_scale * fd.scale;
    for (const StateRecord& s : fd.found) {
        if (!out.empty() && std::abs(out.back().lambda - s.lambda) < floor_sep &&
            out.back().cls == s.cls)
            continue;
        out.push_back(s);
    }
    return out;
}

int antibound_parity(const Potential& P, double eig1, double eig2, double tol) {
    if (!(eig1 < eig2))
        throw std::invalid_argument("antibound_parity: eig1 < eig2 required");
    const double m = P.mass();
    if (eig1 <= -m || eig2 >= m)
        throw std::invalid_argument("antibound_parity: interval must lie in (-m,m)");
    const int n = 600;
    double pad = 1e-7 * (eig2 - eig1);
    double a = eig1 + pad, b = eig2 - pad;
    double prev = f1_on_rim(P, a, false, tol);
    int count = 0;
    double min_gap = b - a;
    double last_zero = -2.0 * m;
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        double cur = f1_on_rim(P, x, false, tol);
        if (prev == 0.0 || prev * cur < 0.0) {
            // bisection refinement
            double lo = a + (b - a) * (i - 1) / n, hi = x, flo = prev;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = f1_on_rim(P, mid, false, tol);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            double z = 0.5 * (lo + hi);
            if (last_zero > -m) min_gap = std::min(min_gap, z - last_zero);
            last_zero = z;
            ++count;
        }
        prev = cur;
    }
    if (count % 2 == 0)
        throw std::runtime_error(
            "antibound_parity: even count " + std::to_string(count) +
            " (possible unresolved pair; minimal gap " + std::to_string(min_gap) + ")");
    return count;
}

CountingReport counting_report(const Potential& P, const std::vector<double>& radii,
                               double delta, double ode_tol) {
    CountingReport rep;
    rep.delta = delta;
    const double m = P.mass();
    const double gamma = P.gamma();
    JostOptions jo;
    jo.tol = ode_tol;
    jo.force_ode_route = true;

    auto f1 = [&](Cplx z) {
        FundamentalValues fv = fundamental_tilde(z, P, ode_tol);
        Cplx k = (z.imag() == 0.0)
                     ? Cplx((z.real() > 0 ? 1.0 : -1.0) *
                                std::sqrt(std::max(0.0, z.real() * z.real() - m * m)),
                            0.0)
                     : k_branch(z, m);
        Cplx k0 = (z + m) / (I1 * k);
        return k0 * fv.theta.a + fv.phi.a;
    };

    for (double r : radii) {
        if (r <= 2.0 * m)
            throw std::invalid_argument("counting_report: radius too small");
        const double dm = 0.05 * m;        // detour width around the band edges
        const double dg = 1e-3 * m;        // dip depth under the gap
        // counterclockwise boundary of {|z|<=r, Im z<=0} with the gap strip
        // excluded: arc from -r through -ir to +r, axis r -> m+dm, dip under
        // the gap, axis -m-dm -> -r.
        std::vector<Cplx> pts;
        int narc = std::max(256, static_cast<int>(std::ceil(16.0 * gamma * r)));
        for (int i = 0; i < narc; ++i) {
            double th = PI + PI * i / narc;  // pi -> 2 pi (lower semicircle)
            pts.emplace_back(r * std::cos(th), r * std::sin(th));
        }
        int nax = std::max(64, static_cast<int>(std::ceil(4.0 * gamma * r)));
        for (int i = 0; i < nax; ++i)  // +r -> m+dm on the axis
            pts.emplace_back(r + (m + dm - r) * i / static_cast<double>(nax), 0.0);
        pts.emplace_back(m + dm, -dg);
        int ngap = 64;
        for (int i = 1; i < ngap; ++i)
            pts.emplace_back(m + dm - (2.0 * (m + dm)) * i / ngap, -dg);
        pts.emplace_back(-m - dm, -dg);
        for (int i = 0; i < nax; ++i)  // -m-dm -> -r on the axis
            pts.emplace_back(-m - dm + (-r + m + dm) * i / static_cast<double>(nax),
                             0.0);
        long N = winding_along(f1, pts);

        // middle annular sector (outliers): theta in (-pi+delta, -delta)
        double r0 = 0.5 * m;
        long Nmid = 0;
        {
            std::vector<Cplx> mp;
            int na = std::max(256, static_cast<int>(std::ceil(16.0 * gamma * r)));
            for (int i = 0; i <= na; ++i) {
                double th = -PI + delta + (PI - 2.0 * delta) * i / na;
                mp.emplace_back(r * std::cos(th), r * std::sin(th));
            }
            int nray = std::max(64, static_cast<int>(std::ceil(4.0 * gamma * r)));
            for (int i = 1; i < nray; ++i) {
                double rr = r + (r0 - r) * i / static_cast<double>(nray);
                mp.emplace_back(rr * std::cos(-delta), rr * std::sin(-delta));
            }
            for (int i = 0; i <= 32; ++i) {
                double th = -delta - (PI - 2.0 * delta) * i / 32.0;
                mp.emplace_back(r0 * std::cos(th), r0 * std::sin(th));
            }
            for (int i = 1; i < nray; ++i) {
                double rr = r0 + (r - r0) * i / static_cast<double>(nray);
                mp.emplace_back(rr * std::cos(-PI + delta), rr * std::sin(-PI + delta));
            }
            Nmid = winding_along(f1, mp);
        }

        rep.radii.push_back(r);
        rep.counts.push_back(N);
        rep.predicted.push_back(2.0 * r * gamma / PI);
        rep.sector_outliers.push_back(Nmid);
        rep.sector_counts.push_back(N - Nmid);
    }
    return rep;
}

ForbiddenDomainReport forbidden_domain_check(const Potential& P,
                                             const std::vector<StateRecord>& states,
                                             double grid_R, int grid_points) {
    if (!P.smooth())
        throw std::invalid_argument("forbidden_domain_check: smooth potential required");
    const double m = P.mass();
    const double p0 = P.derived().p0;
    const double gamma = P.gamma();

    auto expr = [&](double x) {
        // |l^2 (F(l) - l - (m-p0)) - l (|B(l)|^2 - 4 m p0)/4|, the Theorem
        // residual with the 1/l pole cleared (finite through l = 0).
        Cplx F = F_eval(Cplx(x, 0.0), P, 1e-11);
        double Babs = std::abs(asymptotic_B(Cplx(x, 0.0), P));
        return std::abs(x * x * (F.real() - x - (m - p0)) -
                        x * (Babs * Babs - 4.0 * m * p0) / 4.0);
    };

    ForbiddenDomainReport rep;
    auto grid_sup = [&](int n) {
        double sup = 0.0;
        for (int i = 0; i <= n; ++i) {
            double x = -grid_R + 2.0 * grid_R * i / n;
            sup = std::max(sup, expr(x));
        }
        return sup;
    };
    rep.C1 = grid_sup(grid_points);
    rep.C1_refined = grid_sup(2 * grid_points);
    double C1 = std::max(rep.C1, rep.C1_refined);

    for (const StateRecord& s : states) {
        if (s.cls != StateClass::Resonance) continue;
        Cplx l = s.lambda;
        Cplx B = asymptotic_B(l, P);
        Cplx val = l * l * (l + (m - p0) +
                            (std::norm(B) - 4.0 * m * p0) / (4.0 * l));
        ForbiddenDomainReport::Entry e;
        e.lambda = l;
        e.lhs = std::abs(val);
        e.rhs = C1 * std::exp(-2.0 * gamma * l.imag());
        e.margin = e.rhs - e.lhs;
        if (e.margin < 0.0) rep.all_pass = false;
        rep.entries.push_back(e);
    }
    return rep;
}

}  // namespace diracres
