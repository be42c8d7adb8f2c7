#pragma once

// The weighted annulus: the disc of radius Q with density a on the open inner
// disc of radius R and density b on the annulus R <= |p| <= Q. With w = 0 the
// space is the annulus alone and the ball-measure profile lives on [R, Q].

#include "dra/errors.hpp"
#include "dra/geom_disc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace dra {

class AnnulusModel {
public:
    /// Throws DomainError naming the offending parameter.
    AnnulusModel(double inner_radius, double outer_radius, double inner_mass)
        : R_(inner_radius), Q_(outer_radius), w_(inner_mass) {
        if (!(R_ > 0.0) || !std::isfinite(R_)) throw DomainError("R must be > 0");
        if (!(Q_ > R_) || !std::isfinite(Q_)) throw DomainError("Q must be > R");
        if (!(w_ >= 0.0 && w_ < 1.0)) throw DomainError("w must lie in [0, 1)");
        const double pi = std::numbers::pi;
        a_ = w_ / (pi * R_ * R_);
        b_ = (1.0 - w_) / (pi * (Q_ * Q_ - R_ * R_));
        if (!(a_ < b_)) {
            throw DomainError("w too large: inner density a=" + std::to_string(a_)
                              + " must be below annulus density b=" + std::to_string(b_));
        }
        const double mass = a_ * pi * R_ * R_ + b_ * pi * (Q_ * Q_ - R_ * R_);
        if (std::abs(mass - 1.0) > 1e-12) {
            throw InternalInconsistency("annulus model mass " + std::to_string(mass) + " != 1");
        }
    }

    double R() const { return R_; }
    double Q() const { return Q_; }
    double w() const { return w_; }
    /// Density on the open inner disc.
    double a() const { return a_; }
    /// Density on the annulus.
    double b() const { return b_; }
    bool has_inner_mass() const { return w_ > 0.0; }

    /// Left end of the ball-profile domain: 0 with inner mass, R without.
    double domain_left() const { return has_inner_mass() ? 0.0 : R_; }

private:
    double R_;
    double Q_;
    double w_;
    double a_ = 0.0;
    double b_ = 0.0;
};

enum class PeakRegime { SmallS, MiddleS, LargeS };

inline std::string_view to_string(PeakRegime r) {
    switch (r) {
    case PeakRegime::SmallS: return "small";
    case PeakRegime::MiddleS: return "middle";
    case PeakRegime::LargeS: return "large";
    }
    return "?";
}

/// Leftmost maximiser of c -> nu_s(c) on the profile domain.
struct PeakLocus {
    double s;
    double omega;
    double M;
    PeakRegime regime;
    /// Middle regime only: the root of the peak equation before the w = 0
    /// clamp to [R, Q].
    std::optional<double> middle_root;
};

namespace measure_detail {

inline constexpr double root_tolerance = 1e-12;
inline constexpr int max_bisection_steps = 200;
/// Slack for c slightly outside the profile domain through rounding.
inline constexpr double domain_slack = 1e-12;
/// Relative slack on the sign of the peak equation at the bracket ends.
inline constexpr double bracket_slack = 1e-6;

inline void check_radius(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("Rips radius s must be > 0 (got " + std::to_string(s) + ")");
    }
}

/// Mass of B((c,0), s) without domain checks. Inner-disc area weighted by a,
/// annulus area (outer lens minus inner lens) weighted by b.
inline double raw_nu(const AnnulusModel& m, double s, double c) {
    const double inner = lens_area({m.R(), s, c});
    const double outer = lens_area({m.Q(), s, c});
    return std::clamp(m.a() * inner + m.b() * (outer - inner), 0.0, 1.0);
}

/// (b - a) y_R(c) - b y_Q(c); proportional to d(nu)/dc, zero at the peak in
/// the middle regime.
inline double peak_equation(const AnnulusModel& m, double s, double c) {
    return (m.b() - m.a()) * chord_half_height({m.R(), s, c})
           - m.b() * chord_half_height({m.Q(), s, c});
}

} // namespace measure_detail

inline PeakRegime peak_regime(const AnnulusModel& m, double s) {
    if (s <= 0.5 * (m.Q() - m.R())) return PeakRegime::SmallS;
    if (s >= 0.5 * (m.Q() + m.R())) return PeakRegime::LargeS;
    return PeakRegime::MiddleS;
}

/// Measure of the open ball of radius s centred at distance c from the origin.
inline double nu(const AnnulusModel& m, double s, double c) {
    measure_detail::check_radius(s);
    const double lo = m.domain_left();
    if (!(c >= lo - measure_detail::domain_slack && c <= m.Q() + measure_detail::domain_slack)) {
        throw DomainError("centre offset c=" + std::to_string(c) + " outside ["
                          + std::to_string(lo) + ", " + std::to_string(m.Q()) + "]");
    }
    return measure_detail::raw_nu(m, s, std::clamp(c, lo, m.Q()));
}

inline PeakLocus omega(const AnnulusModel& m, double s) {
    measure_detail::check_radius(s);
    const double R = m.R(), Q = m.Q();
    PeakLocus peak{s, 0.0, 0.0, peak_regime(m, s), std::nullopt};
    switch (peak.regime) {
    case PeakRegime::SmallS:
        // nu is at its maximum on the plateau [R + s, Q - s].
        peak.omega = R + s;
        break;
    case PeakRegime::LargeS:
        peak.omega = m.domain_left();
        break;
    case PeakRegime::MiddleS: {
        double lo = Q - s;
        double hi = std::sqrt(0.5 * (R * R + Q * Q) - s * s);
        const double g_lo = measure_detail::peak_equation(m, s, lo);
        const double g_hi = measure_detail::peak_equation(m, s, hi);
        // Near the regime edges a chord is almost tangent and its half-height
        // carries sqrt-amplified rounding, so the endpoint signs get slack.
        const double slack = measure_detail::bracket_slack * m.b() * Q;
        if (g_lo < -slack || g_hi > slack) {
            throw InternalInconsistency("peak equation not bracketed on [Q - s, z] at s="
                                        + std::to_string(s));
        }
        if (g_lo <= 0.0) hi = lo;
        else if (g_hi >= 0.0) lo = hi;
        for (int i = 0; i < measure_detail::max_bisection_steps
                        && hi - lo > measure_detail::root_tolerance;
             ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (measure_detail::peak_equation(m, s, mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        peak.middle_root = root;
        peak.omega = std::max(root, m.domain_left());
        break;
    }
    }
    peak.M = measure_detail::raw_nu(m, s, peak.omega);
    return peak;
}

/// Left endpoint P of {c : nu_s(c) >= k}, or nullopt when the set is empty
/// (k > M_s). Relies on nu_s being non-decreasing up to omega(s).
inline std::optional<double> superlevel_inner_radius(const AnnulusModel& m, const PeakLocus& peak,
                                                     double k) {
    if (k > peak.M) return std::nullopt;
    double lo = m.domain_left();
    if (measure_detail::raw_nu(m, peak.s, lo) >= k) return lo;
    double hi = peak.omega;
    for (int i = 0;
         i < measure_detail::max_bisection_steps && hi - lo > measure_detail::root_tolerance;
         ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (measure_detail::raw_nu(m, peak.s, mid) >= k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

inline std::optional<double> superlevel_inner_radius(const AnnulusModel& m, double s, double k) {
    return superlevel_inner_radius(m, omega(m, s), k);
}

} // namespace dra
