#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diracres/types.hpp"

namespace diracres {

/// One polynomial piece of the potential. Coefficients are in the monomial
/// basis centered at lo: p(x) = sum_j c[j] (x-lo)^j for x in [lo, hi].
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> q;
};

/// Scalar combinations entering the asymptotic formulas:
///   v = (p1+p2)/2, p = (p1-p2)/2, w = q + i p,
///   omega0 = int_0^gamma v, B0 = conj(w(0)) + int_0^gamma (2 m p + |w|^2).
struct DerivedScalars {
    double omega0 = 0.0;
    double p0 = 0.0;
    Cplx w0{0.0, 0.0};
    Cplx B0{0.0, 0.0};
};

/// V = (p1 q; q p2) on [0,gamma], identically zero outside, with mass m.
/// Immutable after construction; safe to share between threads.
class Potential {
  public:
    /// Validates and builds. `is_free` admits the identically-zero potential
    /// (free-operator runs); otherwise an all-zero V is rejected.
    Potential(double m, double gamma, std::vector<Segment> segments,
              bool is_free = false);

    double mass() const { return m_; }
    double gamma() const { return gamma_; }
    bool is_free() const { return free_; }
    /// True when V is continuous on [0,gamma], vanishes at gamma, and hence
    /// V' is integrable (hypothesis of the high-energy expansions).
    bool smooth() const { return smooth_; }
    const std::vector<Segment>& segments() const { return segments_; }

    double p1(double x) const;
    double p2(double x) const;
    double q(double x) const;
    double v(double x) const { return 0.5 * (p1(x) + p2(x)); }
    double p(double x) const { return 0.5 * (p1(x) - p2(x)); }
    Cplx w(double x) const { return {q(x), p(x)}; }

    /// int_0^x v(t) dt, exact per segment.
    double v_integral(double x) const;

    const DerivedScalars& derived() const { return derived_; }

    /// sup-entry norm |V(x)| = max(|p1|,|p2|,|q|) at x.
    double sup_entry(double x) const;
    /// int_x^gamma |V(t)| dt with the sup-entry norm (slightly overestimated,
    /// used only inside certified bounds).
    double l1_tail(double x) const;
    double l1_norm() const { return l1_tail(0.0); }
    /// int_0^gamma |V(x)|^2 dx with the sup-entry norm.
    double l2_norm_sq() const;

    /// Breakpoints 0 = b_0 < ... < b_k = gamma including all segment edges.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// FNV-1a hash of the canonical serialization; identifies the fixture in
    /// exported metadata.
    std::uint64_t content_hash() const;

    std::string to_json() const;
    static Potential from_json(const std::string& text);
    static Potential load(const std::string& path);

  private:
    const Segment* find_segment(double x) const;

    double m_;
    double gamma_;
    std::vector<Segment> segments_;
    bool free_;
    bool smooth_;
    DerivedScalars derived_;
    std::vector<double> breakpoints_;
    double l1_norm_ = 0.0;
    double l2_sq_ = 0.0;
};

DerivedScalars derived_scalars(const Potential& P);

/// Gauge rotation removing the trace part of V: W(x) = (1/2) int_x^gamma (p1+p2),
/// new components p~ = (m+p) cos 2W - q sin 2W - m (as +p~/-p~ on the diagonal)
/// and q~ = (m+p) sin 2W + q cos 2W. The result has v == 0 identically and, when
/// int_0^gamma v is a multiple of 2*pi, the same Jost function as the input.
/// Trigonometric factors are re-expanded as piecewise polynomials with sup
/// error below approx_tol.
Potential gauge_transform(const Potential& P, double approx_tol = 1e-12);

}  // namespace diracres
