#include "diracres/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "diracres/quadrature.hpp"

namespace diracres {

namespace {

bool poly_is_zero(const std::vector<double>& c) {
    for (double x : c)
        if (x != 0.0) return false;
    return true;
}

double poly_sup_bound(const std::vector<double>& c, double len) {
    // |p(u)| <= sum |c_j| len^j on [0,len]
    double s = 0.0, up = 1.0;
    for (double cj : c) {
        s += std::abs(cj) * up;
        up *= len;
    }
    return s;
}

}  // namespace

Potential::Potential(double m, double gamma, std::vector<Segment> segments,
                     bool is_free)
    : m_(m), gamma_(gamma), segments_(std::move(segments)), free_(is_free) {
    if (!(m_ > 0.0)) throw std::invalid_argument("Potential: mass must be positive");
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("Potential: support radius gamma must be positive");

    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    double prev_hi = 0.0;
    bool any_nonzero = false;
    double last_nonzero_hi = 0.0;
    for (const Segment& s : segments_) {
        if (!(s.hi > s.lo)) throw std::invalid_argument("Potential: empty segment");
        if (s.lo < -1e-14 || s.hi > gamma_ + 1e-12 * (1.0 + gamma_))
            throw std::invalid_argument("Potential: segment outside [0,gamma]");
        if (s.lo < prev_hi - 1e-14 * (1.0 + gamma_))
            throw std::invalid_argument("Potential: overlapping segments");
        prev_hi = s.hi;
        bool nz = !(poly_is_zero(s.p1) && poly_is_zero(s.p2) && poly_is_zero(s.q));
        if (nz) {
            any_nonzero = true;
            last_nonzero_hi = s.hi;
        }
    }
    if (!any_nonzero && !free_)
        throw std::invalid_argument(
            "Potential: identically zero potential (empty support); "
            "use the free constructor flag for free-operator runs");
    if (any_nonzero && std::abs(last_nonzero_hi - gamma_) > 1e-12 * (1.0 + gamma_))
        throw std::invalid_argument(
            "Potential: declared gamma does not match sup supp V");

    breakpoints_.push_back(0.0);
    for (const Segment& s : segments_) {
        if (s.lo > breakpoints_.back() + 1e-15) breakpoints_.push_back(s.lo);
        breakpoints_.push_back(s.hi);
    }
    if (std::abs(breakpoints_.back() - gamma_) > 1e-12 * (1.0 + gamma_))
        breakpoints_.push_back(gamma_);
    else
        breakpoints_.back() = gamma_;

    // Continuity at every interior breakpoint plus V(gamma)=0 means V' is
    // integrable; that gates the high-energy machinery.
    smooth_ = true;
    const double ctol = 1e-12;
    auto jump = [&](double x) {
        double eps = 1e-9 * (1.0 + gamma_);
        double a = std::max(0.0, x - eps), b = std::min(gamma_, x + eps);
        double j1 = std::abs(p1(a) - p1(b));
        double j2 = std::abs(p2(a) - p2(b));
        double j3 = std::abs(q(a) - q(b));
        return std::max(j1, std::max(j2, j3));
    };
    for (size_t i = 1; i + 1 < breakpoints_.size(); ++i)
        if (jump(breakpoints_[i]) > ctol) smooth_ = false;
    double eg = 1e-9 * (1.0 + gamma_);
    if (sup_entry(gamma_ - eg) > ctol) smooth_ = false;

    // Exact derived scalars:
    //   omega0 = int v,  B0 = conj(w(0)) + int (2 m p + |w|^2),  |w|^2 = q^2 + p^2.
    double omega0 = 0.0, B0r = 0.0;
    for (const Segment& s : segments_) {
        double len = s.hi - s.lo;
        size_t n = std::max({s.p1.size(), s.p2.size(), s.q.size(), size_t(1)});
        std::vector<double> vcf(n, 0.0), pcf(n, 0.0), qcf(n, 0.0);
        for (size_t j = 0; j < n; ++j) {
            double a1 = j < s.p1.size() ? s.p1[j] : 0.0;
            double a2 = j < s.p2.size() ? s.p2[j] : 0.0;
            vcf[j] = 0.5 * (a1 + a2);
            pcf[j] = 0.5 * (a1 - a2);
            qcf[j] = j < s.q.size() ? s.q[j] : 0.0;
        }
        omega0 += poly_integral(vcf, len);
        // q^2 + p^2 coefficients by convolution
        std::vector<double> sq(2 * n - 1, 0.0);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                sq[a + b] += qcf[a] * qcf[b] + pcf[a] * pcf[b];
        B0r += poly_integral(sq, len);
        std::vector<double> twomp(n);
        for (size_t j = 0; j < n; ++j) twomp[j] = 2.0 * m_ * pcf[j];
        B0r += poly_integral(twomp, len);
    }
    derived_.omega0 = omega0;
    derived_.p0 = p(0.0);
    derived_.w0 = w(0.0);
    derived_.B0 = std::conj(derived_.w0) + B0r;

    // sup-entry L1 and L2 norms: dense Simpson per segment with a small
    // safety factor (these feed upper bounds, so err high).
    double l1 = 0.0, l2 = 0.0;
    for (const Segment& s : segments_) {
        auto f1 = [&](double x) { return sup_entry(x); };
        auto f2 = [&](double x) {
            double e = sup_entry(x);
            return e * e;
        };
        l1 += adaptive_simpson(f1, s.lo, s.hi, 1e-13);
        l2 += adaptive_simpson(f2, s.lo, s.hi, 1e-13);
    }
    l1_norm_ = l1 * (1.0 + 1e-9);
    l2_sq_ = l2 * (1.0 + 1e-9);
}

const Segment* Potential::find_segment(double x) const {
    if (x < 0.0 || x > gamma_) return nullptr;
    for (const Segment& s : segments_)
        if (x >= s.lo && x <= s.hi) return &s;
    return nullptr;
}

double Potential::p1(double x) const {
    const Segment* s = find_segment(x);
    return s ? poly_eval(s->p1, x - s->lo) : 0.0;
}

double Potential::p2(double x) const {
    const Segment* s = find_segment(x);
    return s ? poly_eval(s->p2, x - s->lo) : 0.0;
}

double Potential::q(double x) const {
    const Segment* s = find_segment(x);
    return s ? poly_eval(s->q, x - s->lo) : 0.0;
}

double Potential::v_integral(double x) const {
    if (x <= 0.0) return 0.0;
    double acc = 0.0;
    for (const Segment& s : segments_) {
        if (s.lo >= x) break;
        double up = std::min(x, s.hi) - s.lo;
        size_t n = std::max(s.p1.size(), s.p2.size());
        std::vector<double> vcf(n, 0.0);
        for (size_t j = 0; j < n; ++j)
            vcf[j] = 0.5 * ((j < s.p1.size() ? s.p1[j] : 0.0) +
                            (j < s.p2.size() ? s.p2[j] : 0.0));
        acc += poly_integral(vcf, up);
    }
    return acc;
}

double Potential::sup_entry(double x) const {
    const Segment* s = find_segment(x);
    if (!s) return 0.0;
    double u = x - s->lo;
    return std::max(std::abs(poly_eval(s->p1, u)),
                    std::max(std::abs(poly_eval(s->p2, u)), std::abs(poly_eval(s->q, u))));
}

double Potential::l1_tail(double x) const {
    if (x <= 0.0) return l1_norm_;
    if (x >= gamma_) return 0.0;
    double acc = 0.0;
    for (const Segment& s : segments_) {
        if (s.hi <= x) continue;
        double a = std::max(x, s.lo);
        acc += adaptive_simpson([&](double t) { return sup_entry(t); }, a, s.hi, 1e-13);
    }
    return acc * (1.0 + 1e-9);
}

double Potential::l2_norm_sq() const { return l2_sq_; }

DerivedScalars derived_scalars(const Potential& P) { return P.derived(); }

std::uint64_t Potential::content_hash() const {
    std::string s = to_json();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string Potential::to_json() const {
    nlohmann::ordered_json j;
    j["m"] = m_;
    j["gamma"] = gamma_;
    if (free_) j["free"] = true;
    j["segments"] = nlohmann::ordered_json::array();
    for (const Segment& s : segments_) {
        nlohmann::ordered_json js;
        js["lo"] = s.lo;
        js["hi"] = s.hi;
        js["p1"] = s.p1;
        js["p2"] = s.p2;
        js["q"] = s.q;
        j["segments"].push_back(js);
    }
    return j.dump(2);
}

Potential Potential::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("potential JSON parse error: ") + e.what());
    }
    if (!j.contains("m") || !j.contains("gamma") || !j.contains("segments"))
        throw std::invalid_argument("potential JSON: fields m, gamma, segments required");
    double m = j["m"].get<double>();
    double gamma = j["gamma"].get<double>();
    bool is_free = j.value("free", false);
    std::vector<Segment> segs;
    for (const auto& js : j["segments"]) {
        Segment s;
        s.lo = js.at("lo").get<double>();
        s.hi = js.at("hi").get<double>();
        s.p1 = js.value("p1", std::vector<double>{});
        s.p2 = js.value("p2", std::vector<double>{});
        s.q = js.value("q", std::vector<double>{});
        segs.push_back(std::move(s));
    }
    return Potential(m, gamma, std::move(segs), is_free);
}

Potential Potential::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open potential file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

Potential gauge_transform(const Potential& P, double approx_tol) {
    const double gamma = P.gamma();
    const double m = P.mass();
    const double Wtot = P.derived().omega0;  // W(0) = int_0^gamma v

    auto W = [&](double x) { return Wtot - P.v_integral(x); };

    // p~(x) = (m + p) cos 2W - q sin 2W - m,  q~(x) = (m + p) sin 2W + q cos 2W.
    auto ptil = [&](double x) {
        double tw = 2.0 * W(x);
        return (m + P.p(x)) * std::cos(tw) - P.q(x) * std::sin(tw) - m;
    };
    auto qtil = [&](double x) {
        double tw = 2.0 * W(x);
        return (m + P.p(x)) * std::sin(tw) + P.q(x) * std::cos(tw);
    };

    // Piece length so that degree-15 Chebyshev interpolation of the rotation
    // resolves the phase: |2W'| = |p1+p2| bounded per segment.
    std::vector<Segment> out;
    const std::vector<double>& bks = P.breakpoints();
    const int deg = 16;
    for (size_t i = 0; i + 1 < bks.size(); ++i) {
        double a = bks[i], b = bks[i + 1];
        double rate = 0.0;
        for (const Segment& s : P.segments()) {
            if (s.hi <= a || s.lo >= b) continue;
            rate = std::max(rate, poly_sup_bound(s.p1, s.hi - s.lo) +
                                      poly_sup_bound(s.p2, s.hi - s.lo));
        }
        int pieces = std::max(1, static_cast<int>(std::ceil((b - a) * (1.0 + rate) / 1.2)));
        // crude a-posteriori check drives refinement
        for (bool ok = false; !ok;) {
            ok = true;
            out.erase(std::remove_if(out.begin(), out.end(),
                                     [&](const Segment& s) { return s.lo >= a - 1e-15 && s.hi <= b + 1e-15; }),
                      out.end());
            double h = (b - a) / pieces;
            double worst = 0.0;
            for (int k = 0; k < pieces; ++k) {
                Segment s;
                s.lo = a + k * h;
                s.hi = (k == pieces - 1) ? b : a + (k + 1) * h;
                s.p1 = chebyshev_fit_monomial(ptil, s.lo, s.hi, deg);
                s.q = chebyshev_fit_monomial(qtil, s.lo, s.hi, deg);
                s.p2.resize(s.p1.size());
                for (size_t jj = 0; jj < s.p1.size(); ++jj) s.p2[jj] = -s.p1[jj];
                for (int sm = 0; sm <= 8; ++sm) {
                    double x = s.lo + (s.hi - s.lo) * (sm + 0.41) / 9.0;
                    worst = std::max(worst, std::abs(poly_eval(s.p1, x - s.lo) - ptil(x)));
                    worst = std::max(worst, std::abs(poly_eval(s.q, x - s.lo) - qtil(x)));
                }
                out.push_back(std::move(s));
            }
            if (worst > approx_tol && pieces < 4096) {
                pieces *= 2;
                ok = false;
            }
        }
    }
    // The rotated potential generally fills all of [0,gamma]; gamma unchanged.
    return Potential(m, gamma, std::move(out), P.is_free());
}

}  // namespace diracres
