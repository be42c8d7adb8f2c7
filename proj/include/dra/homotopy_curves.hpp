#pragma once

// Boundary curves phi_l in the (s, k) plane and the homotopy type of the
// degree-Rips complex of the weighted annulus at (s, k).
//
// The superlevel set {p : mu(B(p, s)) >= k} is a closed annulus with inner
// radius P, and its Rips complex at scale s is equivalent to that of the circle
// of radius P. For that circle the Euclidean scale s corresponds to the
// normalised geodesic scale asin(s / 2P) / pi, and the circle's Rips complex is
// S^(2l+1) while that scale lies in (l/(2l+1), (l+1)/(2l+3)]. The radius at
// which the scale hits l/(2l+1) is rho_l(s); phi_l(s) is the measure profile
// read at min(rho_l(s), omega(s)).

#include "dra/annulus_measure.hpp"
#include "dra/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dra {

inline constexpr unsigned default_ell_max = 64;
inline constexpr double default_boundary_tol = 1e-9;

/// l in {0, 1, 2, ..., infinity}.
class SphereIndex {
public:
    constexpr SphereIndex(unsigned ell) : ell_(ell) {}
    static constexpr SphereIndex infinity() { return SphereIndex(); }

    constexpr bool is_infinite() const { return !ell_.has_value(); }
    constexpr unsigned value() const { return *ell_; }

    friend constexpr bool operator==(const SphereIndex&, const SphereIndex&) = default;

    std::string str() const { return is_infinite() ? "inf" : std::to_string(*ell_); }

private:
    constexpr SphereIndex() = default;
    std::optional<unsigned> ell_;
};

struct RegionLabel {
    enum class Kind { Empty, Sphere, Point, Boundary };

    Kind kind = Kind::Boundary;
    /// Sphere only: the complex is S^(2 ell + 1).
    unsigned ell = 0;

    static RegionLabel empty() { return {Kind::Empty, 0}; }
    static RegionLabel point() { return {Kind::Point, 0}; }
    static RegionLabel boundary() { return {Kind::Boundary, 0}; }
    static RegionLabel sphere(unsigned ell) { return {Kind::Sphere, ell}; }

    friend bool operator==(const RegionLabel& x, const RegionLabel& y) {
        return x.kind == y.kind && (x.kind != Kind::Sphere || x.ell == y.ell);
    }

    std::string str() const {
        switch (kind) {
        case Kind::Empty: return "empty";
        case Kind::Point: return "point";
        case Kind::Boundary: return "boundary";
        case Kind::Sphere: return "sphere(" + std::to_string(ell) + ")";
        }
        return "?";
    }
};

inline std::string kind_name(RegionLabel::Kind k) {
    switch (k) {
    case RegionLabel::Kind::Empty: return "empty";
    case RegionLabel::Kind::Point: return "point";
    case RegionLabel::Kind::Boundary: return "boundary";
    case RegionLabel::Kind::Sphere: return "sphere";
    }
    return "?";
}

/// Radius of the circle whose Rips complex at Euclidean scale s sits exactly
/// at the l-th threshold. Undefined for l = 0.
inline double rho(SphereIndex ell, double s) {
    if (!(s > 0.0)) throw DomainError("rho needs s > 0");
    if (ell.is_infinite()) return 0.5 * s;
    if (ell.value() == 0) throw DomainError("rho_0 is undefined");
    const double l = ell.value();
    return s / (2.0 * std::sin(std::numbers::pi * l / (2.0 * l + 1.0)));
}

/// Normalised geodesic scale sigma_r(s) / (2 pi r) in [0, 1/2].
inline double geodesic_ratio(double r, double s) {
    if (!(r > 0.0) || !(s > 0.0)) throw DomainError("geodesic_ratio needs r > 0, s > 0");
    return std::asin(std::min(s / (2.0 * r), 1.0)) / std::numbers::pi;
}

/// Homotopy type of the Euclidean Rips complex VR(S^1_r)(s). The decision is
/// made by comparing r with rho_l(s), which is equivalent to comparing the
/// geodesic ratio with l/(2l+1) since the ratio decreases in r. r = 0 is the
/// one-point space.
inline RegionLabel circle_vr_homotopy_type(double r, double s,
                                           unsigned ell_max = default_ell_max) {
    if (!(r >= 0.0) || !(s > 0.0)) throw DomainError("circle_vr_homotopy_type needs r >= 0, s > 0");
    if (2.0 * r < s) return RegionLabel::point();
    if (2.0 * r == s) return RegionLabel::boundary();
    // Sphere(l) iff rho_{l+1}(s) <= r < rho_l(s), with rho_0 = infinity.
    const double ratio = geodesic_ratio(r, s);
    const double guess = std::ceil(ratio / (1.0 - 2.0 * ratio)) - 1.0;
    if (!(guess < static_cast<double>(ell_max) + 2.0)) return RegionLabel::boundary();
    unsigned ell = guess > 0.0 ? static_cast<unsigned>(guess) : 0u;
    while (ell > 0 && !(r < rho(ell, s))) --ell;
    while (!(r >= rho(ell + 1, s))) {
        ++ell;
        if (ell > ell_max) return RegionLabel::boundary();
    }
    if (ell > ell_max) return RegionLabel::boundary();
    return RegionLabel::sphere(ell);
}

/// Evaluates phi_l(s) for one model and one s, caching the peak locus.
class CurveEvaluator {
public:
    CurveEvaluator(const AnnulusModel& model, double s) : model_(model), peak_(omega(model, s)) {}

    const PeakLocus& peak() const { return peak_; }
    const AnnulusModel& model() const { return model_; }
    double s() const { return peak_.s; }

    double phi(SphereIndex ell) const {
        if (!ell.is_infinite() && ell.value() == 0) return peak_.M;
        const double r = rho(ell, peak_.s);
        if (!model_.has_inner_mass() && r <= model_.R()) return 0.0;
        const double c = std::min(r, peak_.omega);
        return measure_detail::raw_nu(model_, peak_.s, c);
    }

private:
    AnnulusModel model_;
    PeakLocus peak_;
};

inline double phi(const AnnulusModel& model, SphereIndex ell, double s) {
    return CurveEvaluator(model, s).phi(ell);
}

/// Classification by comparing k against the curves. Labels are only given
/// when k is more than tol away from the bracketing curves.
inline RegionLabel classify(const CurveEvaluator& curves, double k,
                            double tol = default_boundary_tol,
                            unsigned ell_max = default_ell_max) {
    const double phi0 = curves.phi(0);
    if (k > phi0 + tol) return RegionLabel::empty();
    if (k < curves.phi(SphereIndex::infinity()) - tol) return RegionLabel::point();
    double upper = phi0;
    for (unsigned ell = 0; ell <= ell_max; ++ell) {
        // A curve at exactly 0 is the floor of the k range: nothing lies
        // below it, so k = 0 on it is not a crossing.
        const double lower = curves.phi(ell + 1);
        const bool floor = lower == 0.0;
        if (lower < k || floor) {
            if (upper - tol > k && (k > lower + tol || floor)) return RegionLabel::sphere(ell);
            return RegionLabel::boundary();
        }
        upper = lower;
    }
    return RegionLabel::boundary();
}

inline RegionLabel classify(const AnnulusModel& model, double s, double k,
                            double tol = default_boundary_tol,
                            unsigned ell_max = default_ell_max) {
    return classify(CurveEvaluator(model, s), k, tol, ell_max);
}

/// Classification through the inner radius P of the superlevel annulus.
inline RegionLabel classify_via_radius(const AnnulusModel& model, const PeakLocus& peak, double k,
                                       unsigned ell_max = default_ell_max) {
    const auto P = superlevel_inner_radius(model, peak, k);
    if (!P) return RegionLabel::empty();
    return circle_vr_homotopy_type(*P, peak.s, ell_max);
}

inline RegionLabel classify_via_radius(const AnnulusModel& model, double s, double k,
                                       unsigned ell_max = default_ell_max) {
    return classify_via_radius(model, omega(model, s), k, ell_max);
}

/// phi_l(s) sampled on a grid of s for l = 0..ell_max and l = infinity.
struct CurveTable {
    std::vector<double> s_grid;
    std::vector<SphereIndex> ells;
    /// values[i][j] = phi_{ells[i]}(s_grid[j]).
    std::vector<std::vector<double>> values;
};

inline CurveTable build_curve_table(const AnnulusModel& model, const std::vector<double>& s_grid,
                                    unsigned ell_max) {
    CurveTable table;
    table.s_grid = s_grid;
    for (unsigned l = 0; l <= ell_max; ++l) table.ells.emplace_back(l);
    table.ells.push_back(SphereIndex::infinity());
    table.values.assign(table.ells.size(), std::vector<double>(s_grid.size()));
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const CurveEvaluator curves(model, s_grid[j]);
        for (std::size_t i = 0; i < table.ells.size(); ++i) {
            table.values[i][j] = curves.phi(table.ells[i]);
        }
    }
    return table;
}

} // namespace dra
