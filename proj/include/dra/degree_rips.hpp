#pragma once

// Degree-Rips complexes of a finite planar point cloud and their H0/H1 ranks
// over Z/2.
//
// Conventions: |B(x, s)| counts sample points at distance < s from x,
// including x itself, and x survives at (s, k) iff |B(x, s)| >= k n. Distances
// are compared squared, d^2 < s*s, in every code path. The 2-skeleton is
// enough for H0 and H1.

#include "dra/annulus_measure.hpp"
#include "dra/errors.hpp"
#include "dra/homotopy_curves.hpp"
#include "dra/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dra {

struct PairDistance {
    double d2;
    std::uint32_t i;
    std::uint32_t j;
};

/// Pairwise squared distances, the sorted pair list, and per-point sorted
/// ball radii. Immutable after construction.
class DistanceIndex {
public:
    explicit DistanceIndex(std::vector<Point2> points) : points_(std::move(points)) {
        const std::size_t n = points_.size();
        if (n == 0) throw DomainError("DistanceIndex needs at least one point");
        if (n > std::numeric_limits<std::uint32_t>::max() / 2) throw DomainError("too many points");
        d2_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = points_[i].x - points_[j].x;
                const double dy = points_[i].y - points_[j].y;
                const double d2 = dx * dx + dy * dy;
                d2_[i * n + j] = d2;
                d2_[j * n + i] = d2;
                pairs_.push_back({d2, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
            }
        }
        std::sort(pairs_.begin(), pairs_.end(), [](const PairDistance& x, const PairDistance& y) {
            return std::tie(x.d2, x.i, x.j) < std::tie(y.d2, y.i, y.j);
        });
        ball_.assign(d2_.begin(), d2_.end());
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(ball_.begin() + static_cast<std::ptrdiff_t>(i * n),
                      ball_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
        }
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<Point2>& points() const { return points_; }
    double d2(std::size_t i, std::size_t j) const { return d2_[i * size() + j]; }

    /// All pairs i < j sorted by (d2, i, j).
    const std::vector<PairDistance>& sorted_pairs() const { return pairs_; }

    /// Squared distances from point i to every point (itself included), ascending.
    std::span<const double> sorted_ball(std::size_t i) const {
        return {ball_.data() + i * size(), size()};
    }

    /// |B(i, s)| for s2 = s*s.
    std::size_t ball_count(std::size_t i, double s2) const {
        const auto b = sorted_ball(i);
        return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), s2) - b.begin());
    }

private:
    std::vector<Point2> points_;
    std::vector<double> d2_;
    std::vector<PairDistance> pairs_;
    std::vector<double> ball_;
};

/// Smallest ball count m with m >= k n, or n + 1 when no count survives.
///
/// k is read as the shortest decimal that round-trips to the given double
/// (0.1 means 1/10, not the nearest binary fraction), and the comparison
/// m * den >= num * n is done in 128-bit integers.
inline std::size_t required_count(double k, std::size_t n) {
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("threshold k must lie in [0, 1]");
    if (k == 0.0) return 0;
    using u128 = unsigned __int128;
    const std::string text = fmt::format("{}", k);
    u128 mantissa = 0;
    int exponent = 0;
    std::size_t pos = 0;
    bool after_point = false;
    for (; pos < text.size() && text[pos] != 'e'; ++pos) {
        if (text[pos] == '.') {
            after_point = true;
            continue;
        }
        mantissa = mantissa * 10 + static_cast<unsigned>(text[pos] - '0');
        if (after_point) --exponent;
    }
    if (pos < text.size()) exponent += std::stoi(text.substr(pos + 1));
    if (exponent < -30) {
        // k < 1e-13, so 0 < k n < 1 for any realistic n.
        return 1;
    }
    u128 num = mantissa, den = 1;
    for (int e = exponent; e > 0; --e) num *= 10;
    for (int e = exponent; e < 0; ++e) den *= 10;
    const u128 need = (num * n + den - 1) / den;
    return static_cast<std::size_t>(std::min<u128>(need, n + 1));
}

/// |B(x, s)| >= k n with the exact reading of k described above.
inline bool meets_threshold(std::size_t count, double k, std::size_t n) {
    return count >= required_count(k, n);
}

struct DegreeRipsFrame {
    double s = 0.0;
    double k = 0.0;
    std::vector<std::uint32_t> vertices;
    /// Ordered by (d2, i, j), i < j.
    std::vector<std::array<std::uint32_t, 2>> edges;
    /// Ordered by (diameter^2, i, j, l), i < j < l.
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

inline DegreeRipsFrame build_frame(const DistanceIndex& index, double s, double k) {
    if (!(s > 0.0)) throw DomainError("build_frame needs s > 0");
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("build_frame needs k in [0, 1]");
    const std::size_t n = index.size();
    const double s2 = s * s;
    const std::size_t need = required_count(k, n);

    DegreeRipsFrame frame;
    frame.s = s;
    frame.k = k;
    std::vector<char> alive(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (index.ball_count(i, s2) >= need) {
            alive[i] = 1;
            frame.vertices.push_back(static_cast<std::uint32_t>(i));
        }
    }
    for (const auto& p : index.sorted_pairs()) {
        if (!(p.d2 < s2)) break;
        if (alive[p.i] && alive[p.j]) frame.edges.push_back({p.i, p.j});
    }

    struct Tri {
        double d2;
        std::array<std::uint32_t, 3> v;
    };
    std::vector<Tri> tris;
    const auto& vs = frame.vertices;
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            const double ab = index.d2(vs[a], vs[b]);
            if (!(ab < s2)) continue;
            for (std::size_t c = b + 1; c < vs.size(); ++c) {
                const double ac = index.d2(vs[a], vs[c]);
                const double bc = index.d2(vs[b], vs[c]);
                if (ac < s2 && bc < s2) tris.push_back({std::max({ab, ac, bc}), {vs[a], vs[b], vs[c]}});
            }
        }
    }
    std::sort(tris.begin(), tris.end(),
              [](const Tri& x, const Tri& y) { return std::tie(x.d2, x.v) < std::tie(y.d2, y.v); });
    frame.triangles.reserve(tris.size());
    for (const auto& t : tris) frame.triangles.push_back(t.v);
    return frame;
}

struct HomologyRanks {
    std::size_t h0 = 0;
    std::size_t h1 = 0;

    friend bool operator==(const HomologyRanks&, const HomologyRanks&) = default;
};

namespace rips_detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when x and y were in different components.
    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x < y) std::swap(x, y);
        parent_[x] = y;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

/// Column reduction over Z/2. Columns are ascending row lists; the pivot is
/// the largest row. Reduced columns are kept by pivot.
class Z2Reducer {
public:
    explicit Z2Reducer(std::size_t rows) : by_pivot_(rows) {}

    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    /// Reduces `column` (consumed) and returns its pivot, or `none` when it
    /// reduces to zero.
    std::uint32_t add(std::vector<std::uint32_t> column) {
        while (!column.empty()) {
            const std::uint32_t pivot = column.back();
            const auto& other = by_pivot_[pivot];
            if (other.empty()) {
                by_pivot_[pivot] = std::move(column);
                ++rank_;
                return pivot;
            }
            scratch_.clear();
            std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                          std::back_inserter(scratch_));
            column.swap(scratch_);
        }
        return none;
    }

    std::size_t rank() const { return rank_; }

private:
    std::vector<std::vector<std::uint32_t>> by_pivot_;
    std::vector<std::uint32_t> scratch_;
    std::size_t rank_ = 0;
};

} // namespace rips_detail

/// h0 = V - rank d1, h1 = (E - rank d1) - rank d2 over Z/2.
inline HomologyRanks homology_ranks(const DegreeRipsFrame& frame) {
    const std::size_t V = frame.vertices.size();
    const std::size_t E = frame.edges.size();
    if (V == 0) return {};

    std::unordered_map<std::uint32_t, std::uint32_t> local;
    for (std::size_t i = 0; i < V; ++i) local.emplace(frame.vertices[i], static_cast<std::uint32_t>(i));

    rips_detail::UnionFind components(V);
    std::size_t rank_d1 = 0;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_id;
    edge_id.reserve(E);
    for (std::size_t e = 0; e < E; ++e) {
        const auto [u, v] = frame.edges[e];
        if (components.unite(local.at(u), local.at(v))) ++rank_d1;
        edge_id.emplace((std::uint64_t{u} << 32) | v, static_cast<std::uint32_t>(e));
    }

    rips_detail::Z2Reducer reducer(E);
    for (const auto& t : frame.triangles) {
        std::vector<std::uint32_t> col{
            edge_id.at((std::uint64_t{t[0]} << 32) | t[1]),
            edge_id.at((std::uint64_t{t[0]} << 32) | t[2]),
            edge_id.at((std::uint64_t{t[1]} << 32) | t[2]),
        };
        std::sort(col.begin(), col.end());
        reducer.add(std::move(col));
    }
    return {V - rank_d1, E - rank_d1 - reducer.rank()};
}

/// Ranks of H0 and H1 over an (s, k) grid. Cell (i, j) holds s_values[i],
/// k_values[j]; storage is row-major with s as the outer index.
struct HilbertGrid {
    std::vector<double> s_values;
    std::vector<double> k_values;
    std::vector<std::size_t> h0;
    std::vector<std::size_t> h1;

    std::size_t at(std::size_t si, std::size_t ki) const { return si * k_values.size() + ki; }

    friend bool operator==(const HilbertGrid&, const HilbertGrid&) = default;
};

namespace rips_detail {

inline void check_axes(const std::vector<double>& s_values, const std::vector<double>& k_values) {
    if (s_values.empty() || k_values.empty()) throw DomainError("grid axes must be non-empty");
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        if (!(s_values[i] > 0.0)) throw DomainError("grid s values must be > 0");
        if (i > 0 && s_values[i] < s_values[i - 1]) throw DomainError("grid s values must be ascending");
    }
    for (std::size_t j = 0; j < k_values.size(); ++j) {
        if (!(k_values[j] >= 0.0 && k_values[j] <= 1.0)) throw DomainError("grid k values must lie in [0, 1]");
        if (j > 0 && k_values[j] < k_values[j - 1]) throw DomainError("grid k values must be ascending");
    }
}

/// For fixed k the frames grow with s, so one pass of Z/2 persistence over
/// the s-filtration gives the ranks at every s on the axis. Every simplex
/// carries the squared scale after which it is present; a simplex is in the
/// frame at s iff that value is < s*s, the same test build_frame applies.
struct ColumnResult {
    std::vector<std::size_t> h0;
    std::vector<std::size_t> h1;
};

inline ColumnResult hilbert_column(const DistanceIndex& index, const std::vector<double>& s_values,
                                   double k) {
    const std::size_t n = index.size();
    const std::size_t need = required_count(k, n);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> s2(s_values.size());
    for (std::size_t i = 0; i < s_values.size(); ++i) s2[i] = s_values[i] * s_values[i];
    const double s2_max = s2.back();

    // Vertex i is present iff its need-th smallest ball distance is < s*s.
    std::vector<double> vertex_entry(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (need == 0) vertex_entry[i] = -1.0;
        else if (need > n) vertex_entry[i] = inf;
        else vertex_entry[i] = index.sorted_ball(i)[need - 1];
    }

    struct Edge {
        double value;
        std::uint32_t i;
        std::uint32_t j;
    };
    std::vector<Edge> edges;
    for (const auto& p : index.sorted_pairs()) {
        if (!(p.d2 < s2_max)) break;
        const double value = std::max({p.d2, vertex_entry[p.i], vertex_entry[p.j]});
        if (value < s2_max) edges.push_back({value, p.i, p.j});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.value, x.i, x.j) < std::tie(y.value, y.i, y.j);
    });

    // Events are counted by the squared scale at which they take effect.
    std::vector<double> vertex_births;
    for (double v : vertex_entry)
        if (v < s2_max) vertex_births.push_back(v);
    std::vector<double> merges;
    std::vector<double> cycle_births;
    std::vector<double> cycle_deaths;

    UnionFind components(n);
    std::vector<char> positive(edges.size(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (components.unite(edges[e].i, edges[e].j)) {
            merges.push_back(edges[e].value);
        } else {
            positive[e] = 1;
            cycle_births.push_back(edges[e].value);
        }
    }

    // Triangles are generated grouped by their latest edge, which fixes their
    // value; edges are added to the adjacency bitsets after their group.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> adjacency(n * words, 0);
    std::vector<std::uint32_t> edge_at(n * n, Z2Reducer::none);
    Z2Reducer reducer(edges.size());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> faces;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::uint32_t i = edges[e].i, j = edges[e].j;
        if (positive[e]) {
            faces.clear();
            const std::uint64_t* ai = &adjacency[i * words];
            const std::uint64_t* aj = &adjacency[j * words];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t common = ai[w] & aj[w];
                while (common) {
                    const std::size_t l = w * 64 + static_cast<std::size_t>(std::countr_zero(common));
                    common &= common - 1;
                    std::uint32_t f = edge_at[i * n + l], g = edge_at[j * n + l];
                    if (f > g) std::swap(f, g);
                    faces.emplace_back(g, f);
                }
            }
            std::sort(faces.begin(), faces.end());
            for (const auto& [g, f] : faces) {
                if (reducer.add({f, g, static_cast<std::uint32_t>(e)}) != Z2Reducer::none) {
                    cycle_deaths.push_back(edges[e].value);
                }
            }
        }
        adjacency[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
        adjacency[j * words + i / 64] |= std::uint64_t{1} << (i % 64);
        edge_at[i * n + j] = static_cast<std::uint32_t>(e);
        edge_at[j * n + i] = static_cast<std::uint32_t>(e);
    }

    auto count_below = [](std::vector<double>& values, double bound) {
        return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), bound)
                                        - values.begin());
    };
    std::sort(vertex_births.begin(), vertex_births.end());
    std::sort(cycle_deaths.begin(), cycle_deaths.end());

    ColumnResult out;
    out.h0.resize(s_values.size());
    out.h1.resize(s_values.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        out.h0[i] = count_below(vertex_births, s2[i]) - count_below(merges, s2[i]);
        out.h1[i] = count_below(cycle_births, s2[i]) - count_below(cycle_deaths, s2[i]);
    }
    return out;
}

inline unsigned resolve_threads(unsigned requested, std::size_t jobs) {
    unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

} // namespace rips_detail

/// Ranks at every grid cell, one persistence pass per k. `threads` == 0 uses
/// the hardware concurrency; output does not depend on the thread count.
inline HilbertGrid hilbert_grid(const DistanceIndex& index, const std::vector<double>& s_values,
                                const std::vector<double>& k_values, unsigned threads = 1) {
    rips_detail::check_axes(s_values, k_values);
    HilbertGrid grid{s_values, k_values, {}, {}};
    grid.h0.assign(s_values.size() * k_values.size(), 0);
    grid.h1.assign(s_values.size() * k_values.size(), 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t kj = next++; kj < k_values.size(); kj = next++) {
            const auto col = rips_detail::hilbert_column(index, s_values, k_values[kj]);
            for (std::size_t si = 0; si < s_values.size(); ++si) {
                grid.h0[grid.at(si, kj)] = col.h0[si];
                grid.h1[grid.at(si, kj)] = col.h1[si];
            }
        }
    };
    const unsigned t = rips_detail::resolve_threads(threads, k_values.size());
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
    }
    return grid;
}

/// Reference grid: build_frame + homology_ranks at every cell.
inline HilbertGrid hilbert_grid_naive(const DistanceIndex& index, const std::vector<double>& s_values,
                                      const std::vector<double>& k_values) {
    rips_detail::check_axes(s_values, k_values);
    HilbertGrid grid{s_values, k_values, {}, {}};
    for (double s : s_values) {
        for (double k : k_values) {
            const auto r = homology_ranks(build_frame(index, s, k));
            grid.h0.push_back(r.h0);
            grid.h1.push_back(r.h1);
        }
    }
    return grid;
}

/// Comparison of a sample's H1 Hilbert function with the analytic regions.
struct AgreementReport {
    /// Cells labelled S^1 and farther than the margin from phi_0 and phi_1.
    std::size_t n_checked = 0;
    /// Of those, cells with h1 = 1.
    std::size_t n_agree = 0;
    /// Cells labelled empty (contractible) and farther than the margin above
    /// phi_0 (below phi_inf); agreement means h1 = 0.
    std::size_t n_checked_trivial = 0;
    std::size_t n_agree_trivial = 0;
    double margin = 0.0;

    double fraction() const { return n_checked == 0 ? 1.0 : double(n_agree) / double(n_checked); }
    double fraction_trivial() const {
        return n_checked_trivial == 0 ? 1.0 : double(n_agree_trivial) / double(n_checked_trivial);
    }
    bool vacuous() const { return n_checked == 0; }
};

/// `margin` is a fraction of the local S^1 band width: at each s a cell is
/// only compared when k is more than margin * (phi_0(s) - phi_1(s)) away from
/// the curves that bound its region.
inline AgreementReport region_agreement(const HilbertGrid& grid, const AnnulusModel& model,
                                        double margin, double tol = default_boundary_tol,
                                        unsigned ell_max = default_ell_max) {
    if (!(margin >= 0.0 && margin < 0.5)) throw DomainError("margin must lie in [0, 0.5)");
    AgreementReport report;
    report.margin = margin;
    for (std::size_t si = 0; si < grid.s_values.size(); ++si) {
        const CurveEvaluator curves(model, grid.s_values[si]);
        const double phi0 = curves.phi(0);
        const double phi1 = curves.phi(1);
        const double phi_inf = curves.phi(SphereIndex::infinity());
        const double pad = margin * (phi0 - phi1);
        for (std::size_t kj = 0; kj < grid.k_values.size(); ++kj) {
            const double k = grid.k_values[kj];
            const std::size_t h1 = grid.h1[grid.at(si, kj)];
            const RegionLabel label = classify(curves, k, tol, ell_max);
            switch (label.kind) {
            case RegionLabel::Kind::Sphere:
                if (label.ell == 0 && k > phi1 + pad && k < phi0 - pad) {
                    ++report.n_checked;
                    if (h1 == 1) ++report.n_agree;
                }
                break;
            case RegionLabel::Kind::Empty:
            case RegionLabel::Kind::Point:
                if (k > phi0 + pad || k < phi_inf - pad) {
                    ++report.n_checked_trivial;
                    if (h1 == 0) ++report.n_agree_trivial;
                }
                break;
            case RegionLabel::Kind::Boundary: break;
            }
        }
    }
    return report;
}

} // namespace dra
