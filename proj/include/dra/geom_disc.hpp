#pragma once

// Areas and chord geometry for the intersection of the disc B(O, R) centred at
// the origin with the disc B((c, 0), s).
//
// The (c, s) quarter-plane is cut into regions by five curves:
//
//   (1) c + s = R        ball inside the disc on the left of it
//   (2) s - c = R        disc inside the ball above it
//   (3) c - s = R        discs disjoint on the right of it
//   (4) c^2 + s^2 = R^2  chord passes through the ball centre (c, 0)
//   (5) s^2 - c^2 = R^2  chord passes through the origin
//
// Inside the wedge bounded by (1), (2), (3) the circles meet in two points on
// the vertical chord x = x_R = (c^2 + R^2 - s^2) / 2c. The intersection is the
// part of B(O, R) on the far side of the chord plus the part of B((c,0), s) on
// the origin side. Writing seg(r, d) = r^2 acos(d/r) - d sqrt(r^2 - d^2) for the
// minor segment cut off at distance d from the centre:
//
//   case                          disc R piece          ball piece
//   centre right, origin left     seg(R, x)             seg(s, c - x)
//   centre left,  origin left     seg(R, x)             pi s^2 - seg(s, x - c)
//   centre right, origin right    pi R^2 - seg(R, -x)   seg(s, c - x)
//   centre left,  origin right    pi R^2 - seg(R, -x)   pi s^2 - seg(s, x - c)
//
// "Centre left" means c^2 + s^2 < R^2 (x > c); "origin right" means
// s^2 - c^2 > R^2 (x < 0). The last row is empty for c >= 0 but is kept so that
// every sign combination has a formula.
//
// Points exactly on a curve belong to the closed region listed first in
// classify_lens: the non-intersecting cases win on (1)-(3), "centre right" wins
// on (4) and "origin left" wins on (5). Adjacent formulas agree on every curve.

#include "dra/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace dra {

enum class LensCase {
    Disjoint,
    SmallBallInside,
    DiscInsideBall,
    TwoPointsCentreLeftOriginRight,
    TwoPointsCentreRightOriginRight,
    TwoPointsCentreLeftOriginLeft,
    TwoPointsCentreRightOriginLeft,
};

inline std::string_view to_string(LensCase c) {
    switch (c) {
    case LensCase::Disjoint: return "Disjoint";
    case LensCase::SmallBallInside: return "SmallBallInside";
    case LensCase::DiscInsideBall: return "DiscInsideBall";
    case LensCase::TwoPointsCentreLeftOriginRight: return "TwoPointsCentreLeftOriginRight";
    case LensCase::TwoPointsCentreRightOriginRight: return "TwoPointsCentreRightOriginRight";
    case LensCase::TwoPointsCentreLeftOriginLeft: return "TwoPointsCentreLeftOriginLeft";
    case LensCase::TwoPointsCentreRightOriginLeft: return "TwoPointsCentreRightOriginLeft";
    }
    return "?";
}

inline bool is_two_point(LensCase c) {
    return c != LensCase::Disjoint && c != LensCase::SmallBallInside
           && c != LensCase::DiscInsideBall;
}

/// Origin-centred disc of radius R against the disc of radius s centred at (c, 0).
struct CirclePair {
    double R;
    double s;
    double c;
};

namespace geom_detail {

/// Offsets below this are treated as concentric discs.
inline constexpr double concentric_offset = 1e-12;
/// Rounding slack allowed when clamping sqrt/acos arguments.
inline constexpr double clamp_slack = 1e-9;

inline void check_pair(const CirclePair& p) {
    if (!(p.R > 0.0) || !(p.s > 0.0) || !(p.c >= 0.0) || !std::isfinite(p.R)
        || !std::isfinite(p.s) || !std::isfinite(p.c)) {
        throw DomainError("CirclePair requires R > 0, s > 0, c >= 0 (got R="
                          + std::to_string(p.R) + ", s=" + std::to_string(p.s)
                          + ", c=" + std::to_string(p.c) + ")");
    }
}

inline double clamp_checked(double v, double lo, double hi, const char* what) {
    if (v < lo - clamp_slack || v > hi + clamp_slack) {
        throw InternalInconsistency(std::string(what) + " out of range by more than rounding: "
                                    + std::to_string(v));
    }
    return std::clamp(v, lo, hi);
}

/// Minor circular segment of a circle of radius r cut by a chord at distance
/// d in [0, r] from its centre.
inline double minor_segment(double r, double d) {
    const double t = clamp_checked(d / r, 0.0, 1.0, "segment chord ratio");
    return r * r * (std::acos(t) - t * std::sqrt((1.0 - t) * (1.0 + t)));
}

/// x-coordinate of the common chord; only meaningful in the two-point wedge.
inline double chord_x(const CirclePair& p) {
    return (p.c * p.c + (p.R - p.s) * (p.R + p.s)) / (2.0 * p.c);
}

inline double two_point_area(const CirclePair& p, bool centre_left, bool origin_right) {
    const double pi = std::numbers::pi;
    const double x = chord_x(p);
    const double disc_part = origin_right ? pi * p.R * p.R - minor_segment(p.R, -x)
                                          : minor_segment(p.R, x);
    const double ball_part = centre_left ? pi * p.s * p.s - minor_segment(p.s, x - p.c)
                                         : minor_segment(p.s, p.c - x);
    return disc_part + ball_part;
}

} // namespace geom_detail

/// Case of the (R, s, c) triple with respect to the five delimiting curves.
inline LensCase classify_lens(const CirclePair& p) {
    geom_detail::check_pair(p);
    const double R = p.R, s = p.s, c = p.c;
    if (c < geom_detail::concentric_offset) {
        return s <= R ? LensCase::SmallBallInside : LensCase::DiscInsideBall;
    }
    if (c >= R + s) return LensCase::Disjoint;
    if (c + s <= R) return LensCase::SmallBallInside;
    if (s - c >= R) return LensCase::DiscInsideBall;
    const bool centre_left = c * c + s * s < R * R;
    const bool origin_right = s * s - c * c > R * R;
    if (centre_left) {
        return origin_right ? LensCase::TwoPointsCentreLeftOriginRight
                            : LensCase::TwoPointsCentreLeftOriginLeft;
    }
    return origin_right ? LensCase::TwoPointsCentreRightOriginRight
                        : LensCase::TwoPointsCentreRightOriginLeft;
}

/// Area formula of a given case evaluated at p, regardless of which case p
/// actually falls in. Two-point formulas need c > 0 and the circles to meet
/// (possibly tangentially); used to check that adjacent formulas agree on the
/// curves between them.
inline double lens_area_in_case(const CirclePair& p, LensCase which) {
    geom_detail::check_pair(p);
    const double pi = std::numbers::pi;
    switch (which) {
    case LensCase::Disjoint: return 0.0;
    case LensCase::SmallBallInside: return pi * p.s * p.s;
    case LensCase::DiscInsideBall: return pi * p.R * p.R;
    case LensCase::TwoPointsCentreLeftOriginRight:
        return geom_detail::two_point_area(p, true, true);
    case LensCase::TwoPointsCentreRightOriginRight:
        return geom_detail::two_point_area(p, false, true);
    case LensCase::TwoPointsCentreLeftOriginLeft:
        return geom_detail::two_point_area(p, true, false);
    case LensCase::TwoPointsCentreRightOriginLeft:
        return geom_detail::two_point_area(p, false, false);
    }
    throw InternalInconsistency("unknown lens case");
}

/// Area of B(O, R) intersected with B((c, 0), s).
inline double lens_area(const CirclePair& p) {
    const LensCase which = classify_lens(p);
    const double area = lens_area_in_case(p, which);
#ifndef NDEBUG
    // On curves (4) and (5) the neighbouring formula must give the same value.
    if (is_two_point(which)) {
        const double R2 = p.R * p.R, c2 = p.c * p.c, s2 = p.s * p.s;
        if (c2 + s2 == R2) {
            const LensCase other = (which == LensCase::TwoPointsCentreRightOriginLeft)
                                       ? LensCase::TwoPointsCentreLeftOriginLeft
                                       : LensCase::TwoPointsCentreLeftOriginRight;
            assert(std::abs(lens_area_in_case(p, other) - area) < 1e-9);
        }
        if (s2 - c2 == R2) {
            const LensCase other = (which == LensCase::TwoPointsCentreRightOriginLeft)
                                       ? LensCase::TwoPointsCentreRightOriginRight
                                       : LensCase::TwoPointsCentreLeftOriginRight;
            assert(std::abs(lens_area_in_case(p, other) - area) < 1e-9);
        }
    }
#endif
    return area;
}

/// Largest y-coordinate of the points where C(O, R) meets C((c, 0), s), or 0
/// when the circles do not meet. Half the length of the common chord.
inline double chord_half_height(const CirclePair& p) {
    if (!is_two_point(classify_lens(p))) return 0.0;
    const double t = geom_detail::clamp_checked(geom_detail::chord_x(p) / p.R, -1.0, 1.0,
                                                "chord abscissa ratio");
    return p.R * std::sqrt((1.0 - t) * (1.0 + t));
}

/// d(lens_area)/dc, which equals minus the chord length.
inline double lens_area_derivative(const CirclePair& p) {
    return -2.0 * chord_half_height(p);
}

} // namespace dra
