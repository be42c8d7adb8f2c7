#include "dra/geom_disc.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using dra::CirclePair;
using dra::LensCase;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(ClassifyLens, Examples) {
    EXPECT_EQ(dra::classify_lens({1.0, 0.5, 0.2}), LensCase::SmallBallInside);
    EXPECT_EQ(dra::classify_lens({1.0, 3.0, 0.5}), LensCase::DiscInsideBall);
    EXPECT_EQ(dra::classify_lens({1.0, 0.5, 2.0}), LensCase::Disjoint);
    EXPECT_EQ(dra::classify_lens({1.0, 0.5, 0.7}), LensCase::TwoPointsCentreLeftOriginLeft);
    EXPECT_EQ(dra::classify_lens({1.0, 1.0, 1.0}), LensCase::TwoPointsCentreRightOriginLeft);
    EXPECT_EQ(dra::classify_lens({1.0, 1.5, 0.6}), LensCase::TwoPointsCentreRightOriginRight);
}

TEST(ClassifyLens, TiesGoToClosedRegions) {
    EXPECT_EQ(dra::classify_lens({1.0, 0.5, 0.5}), LensCase::SmallBallInside);  // c + s = R
    EXPECT_EQ(dra::classify_lens({1.0, 1.5, 0.5}), LensCase::DiscInsideBall);   // s - c = R
    EXPECT_EQ(dra::classify_lens({1.0, 0.5, 1.5}), LensCase::Disjoint);         // c - s = R
    EXPECT_EQ(dra::classify_lens({40.0, 32.0, 24.0}), LensCase::TwoPointsCentreRightOriginLeft);
    EXPECT_EQ(dra::classify_lens({24.0, 40.0, 32.0}), LensCase::TwoPointsCentreRightOriginLeft);
}

TEST(ClassifyLens, RejectsBadInput) {
    EXPECT_THROW(dra::classify_lens({0.0, 1.0, 0.0}), dra::DomainError);
    EXPECT_THROW(dra::classify_lens({1.0, -1.0, 0.0}), dra::DomainError);
    EXPECT_THROW(dra::classify_lens({1.0, 1.0, -0.1}), dra::DomainError);
}

TEST(LensArea, Examples) {
    EXPECT_NEAR(dra::lens_area({1.0, 0.5, 0.2}), pi * 0.25, 1e-15);
    EXPECT_NEAR(dra::lens_area({1.0, 3.0, 0.5}), pi, 1e-15);
    EXPECT_EQ(dra::lens_area({1.0, 0.5, 2.0}), 0.0);
    EXPECT_NEAR(dra::lens_area({1.0, 1.0, 1.0}), 2.0 * pi / 3.0 - std::sqrt(3.0) / 2.0, 1e-14);
    EXPECT_NEAR(dra::lens_area({2.0, 1.0, 0.0}), pi, 1e-15);
    EXPECT_NEAR(dra::lens_area({1.0, 2.0, 0.0}), pi, 1e-15);
}

TEST(LensArea, SymmetricLensOracle) {
    for (double d = 0.01; d < 2.0; d += 0.0137) {
        EXPECT_NEAR(dra::lens_area({1.0, 1.0, d}), oracle::symmetric_lens(1.0, d), 1e-13) << "d=" << d;
        EXPECT_NEAR(dra::lens_area({0.3, 0.3, 0.3 * d}), oracle::symmetric_lens(0.3, 0.3 * d), 1e-14);
    }
}

TEST(LensArea, SlicedIntegralOracle) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double R = 0.1 + 2.0 * u(gen);
        const double s = 0.01 + 3.0 * u(gen);
        const double c = (R + s) * 1.1 * u(gen);
        const double ref = oracle::sliced_lens(R, s, c);
        EXPECT_NEAR(dra::lens_area({R, s, c}), ref, 1e-12 * std::max(1.0, ref))
            << "R=" << R << " s=" << s << " c=" << c;
    }
}

TEST(LensArea, MonteCarloOracle) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const CirclePair cases[] = {{1.0, 0.5, 0.7}, {1.0, 1.5, 0.6}, {0.4, 0.3, 0.45}, {0.5, 0.2, 0.55}};
    const int N = 400000;
    for (const auto& p : cases) {
        // Uniform on the box around the small ball.
        int hits = 0;
        for (int i = 0; i < N; ++i) {
            const double x = p.c + p.s * u(gen), y = p.s * u(gen);
            const double dx = x - p.c;
            if (dx * dx + y * y < p.s * p.s && x * x + y * y < p.R * p.R) ++hits;
        }
        const double box = 4.0 * p.s * p.s;
        const double q = dra::lens_area(p) / box;
        const double sigma = std::sqrt(q * (1 - q) / N);
        EXPECT_NEAR(double(hits) / N, q, 4.0 * sigma) << "R=" << p.R << " s=" << p.s << " c=" << p.c;
    }
}

TEST(LensArea, BoundsAndMonotone) {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double R = 0.1 + u(gen), s = 0.05 + u(gen);
        double prev = pi * std::min(R, s) * std::min(R, s);
        for (double c = 0.0; c < R + s + 0.1; c += 0.01) {
            const double a = dra::lens_area({R, s, c});
            EXPECT_GE(a, 0.0);
            EXPECT_LE(a, prev + 1e-14);
            prev = a;
        }
    }
}

TEST(LensArea, FormulasAgreeOnCurves) {
    for (double c = 0.05; c < 0.95; c += 0.01) {
        const CirclePair on4{1.0, std::sqrt(1.0 - c * c), c};
        EXPECT_NEAR(dra::lens_area_in_case(on4, LensCase::TwoPointsCentreLeftOriginLeft),
                    dra::lens_area_in_case(on4, LensCase::TwoPointsCentreRightOriginLeft), 1e-12);
    }
    for (double c = 0.05; c < 2.0; c += 0.01) {
        const CirclePair on5{1.0, std::sqrt(1.0 + c * c), c};
        EXPECT_NEAR(dra::lens_area_in_case(on5, LensCase::TwoPointsCentreRightOriginRight),
                    dra::lens_area_in_case(on5, LensCase::TwoPointsCentreRightOriginLeft), 1e-12);
    }
    for (double c = 0.05; c < 0.95; c += 0.01) {
        // Tangencies: two-point formula tends to the enclosing case.
        const CirclePair on1{1.0, 1.0 - c, c};
        EXPECT_NEAR(dra::lens_area_in_case(on1, LensCase::TwoPointsCentreLeftOriginLeft), pi * on1.s * on1.s, 1e-7);
    }
}

TEST(LensArea, NearConcentricIsContinuous) {
    EXPECT_NEAR(dra::lens_area({1.0, 0.5, 1e-13}), dra::lens_area({1.0, 0.5, 0.0}), 1e-15);
    EXPECT_NEAR(dra::lens_area({1.0, 1.0, 1e-9}), pi, 1e-8);
    EXPECT_NEAR(dra::lens_area({1.0, 1.0, 1e-13}), pi, 1e-12);
}

TEST(ChordHalfHeight, Examples) {
    EXPECT_NEAR(dra::chord_half_height({1.0, 1.0, 1.0}), std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_EQ(dra::chord_half_height({1.0, 0.5, 0.2}), 0.0);
    EXPECT_EQ(dra::chord_half_height({1.0, 0.5, 2.0}), 0.0);
    EXPECT_NEAR(dra::chord_half_height({1.0, std::sqrt(2.0), 1.0}), 1.0, 1e-15);
}

TEST(LensAreaDerivative, FiniteDifference) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 500) {
        const double R = 0.2 + u(gen), s = 0.05 + u(gen), c = (R + s) * u(gen);
        const CirclePair p{R, s, c};
        if (c < 1e-3 || !dra::is_two_point(dra::classify_lens(p)) || dra::chord_half_height(p) < 1e-3) continue;
        const double h = 1e-6;
        const double fd = (dra::lens_area({R, s, c + h}) - dra::lens_area({R, s, c - h})) / (2 * h);
        EXPECT_NEAR(fd, dra::lens_area_derivative(p), 1e-4 * std::abs(fd));
        ++checked;
    }
    EXPECT_EQ(dra::lens_area_derivative({1.0, 0.5, 0.2}), 0.0);
}
