#pragma once

#include "dra/annulus_measure.hpp"
#include "dra/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace dra {

struct Point2 {
    double x;
    double y;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Identifier written to sample metadata; bump when the stream layout changes.
inline constexpr std::string_view prng_id = "splitmix64-counter-v1";

/// Counter-based SplitMix64: word j of stream `seed` is the j-th output of
/// SplitMix64 seeded with `seed`, computed directly from j. Point i consumes
/// words 3i, 3i+1, 3i+2 (branch, radius, angle), so any point can be generated
/// independently of the others.
class SplitMix64Stream {
public:
    explicit constexpr SplitMix64Stream(std::uint64_t seed) : seed_(seed) {}

    constexpr std::uint64_t word(std::uint64_t j) const {
        std::uint64_t z = seed_ + (j + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits of word j.
    constexpr double unit(std::uint64_t j) const {
        return static_cast<double>(word(j) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
};

struct PointCloud {
    std::vector<Point2> points;
    std::uint64_t seed = 0;
    AnnulusModel model;
};

/// Point i of the sample: with probability w uniform on the open inner disc,
/// otherwise uniform on the annulus; angle uniform on [0, 2 pi).
inline Point2 sample_point(const AnnulusModel& model, const SplitMix64Stream& stream,
                           std::uint64_t i) {
    const double branch = stream.unit(3 * i);
    const double u = stream.unit(3 * i + 1);
    const double theta = 2.0 * std::numbers::pi * stream.unit(3 * i + 2);
    const double R = model.R(), Q = model.Q();
    const double r = branch < model.w() ? R * std::sqrt(u)
                                        : std::sqrt(R * R + u * (Q * Q - R * R));
    return {r * std::cos(theta), r * std::sin(theta)};
}

inline PointCloud sample(const AnnulusModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample size n must be >= 1");
    const SplitMix64Stream stream(seed);
    PointCloud cloud{{}, seed, model};
    cloud.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cloud.points.push_back(sample_point(model, stream, i));
    return cloud;
}

} // namespace dra
