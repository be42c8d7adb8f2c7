#include "dra/annulus_measure.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using dra::AnnulusModel;
using dra::PeakRegime;

namespace {

const AnnulusModel ref(0.4, 0.5, 0.05);
const AnnulusModel ref0(0.4, 0.5, 0.0);

// Leftmost maximiser of nu on a dense grid.
double grid_argmax(const AnnulusModel& m, double s, int steps = 200000) {
    double best = -1.0, arg = 0.0;
    const double lo = m.domain_left();
    for (int i = 0; i <= steps; ++i) {
        const double c = lo + (m.Q() - lo) * i / steps;
        const double v = dra::nu(m, s, c);
        if (v > best + 1e-13) {
            best = v;
            arg = c;
        }
    }
    return arg;
}

} // namespace

TEST(AnnulusModel, Validation) {
    EXPECT_THROW(AnnulusModel(0.0, 0.5, 0.0), dra::DomainError);
    EXPECT_THROW(AnnulusModel(0.4, 0.4, 0.0), dra::DomainError);
    EXPECT_THROW(AnnulusModel(0.4, 0.5, -0.1), dra::DomainError);
    EXPECT_THROW(AnnulusModel(0.4, 0.5, 1.0), dra::DomainError);
    // Inner density must stay below the annulus density: w < R^2 / Q^2.
    EXPECT_THROW(AnnulusModel(0.4, 0.5, 0.7), dra::DomainError);
    try {
        AnnulusModel(0.4, 0.3, 0.0);
        FAIL();
    } catch (const dra::DomainError& e) {
        EXPECT_NE(std::string(e.what()).find('Q'), std::string::npos);
    }
    EXPECT_NEAR(ref.a() * std::numbers::pi * 0.16 + ref.b() * std::numbers::pi * 0.09, 1.0, 1e-15);
}

TEST(Nu, Examples) {
    EXPECT_NEAR(dra::nu(ref, 0.04, 0.44), (0.95 / 0.09) * 0.0016, 1e-15);
    EXPECT_NEAR(dra::nu(ref, 0.04, 0.44), 0.016888888888888888, 1e-12);
    EXPECT_NEAR(dra::nu(ref, 0.04, 0.1), ref.a() * std::numbers::pi * 0.0016, 1e-16);
    EXPECT_NEAR(dra::nu(ref, 1.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(dra::nu(ref0, 1.0, 0.45), 1.0, 1e-15);
}

TEST(Nu, DomainErrors) {
    EXPECT_THROW(dra::nu(ref, 0.1, 0.6), dra::DomainError);
    EXPECT_THROW(dra::nu(ref0, 0.1, 0.3), dra::DomainError);
    EXPECT_THROW(dra::nu(ref, 0.0, 0.3), dra::DomainError);
    EXPECT_NO_THROW(dra::nu(ref, 0.1, 0.5 + 1e-13));
}

TEST(Nu, UnimodalInC) {
    for (const auto* m : {&ref, &ref0}) {
        for (double s = 0.005; s < 1.0; s += 0.013) {
            const double peak = dra::omega(*m, s).omega;
            const double lo = m->domain_left();
            double prev = dra::nu(*m, s, lo), prev_c = lo;
            for (int i = 1; i <= 400; ++i) {
                const double c = lo + (m->Q() - lo) * i / 400.0;
                const double v = dra::nu(*m, s, c);
                if (c <= peak) {
                    EXPECT_GE(v, prev - 1e-14) << "s=" << s << " c=" << c;
                }
                if (prev_c >= peak) {
                    EXPECT_LE(v, prev + 1e-14) << "s=" << s << " c=" << c;
                }
                prev = v;
                prev_c = c;
            }
        }
    }
}

TEST(Nu, MonotoneInS) {
    for (const auto* m : {&ref, &ref0}) {
        for (double c = m->domain_left(); c <= m->Q(); c += 0.01) {
            double prev = 0.0;
            for (double s = 0.001; s <= 1.0; s += 0.003) {
                const double v = dra::nu(*m, s, c);
                EXPECT_GE(v, prev - 1e-15);
                prev = v;
            }
            EXPECT_NEAR(dra::nu(*m, 1.0, c), 1.0, 1e-12);
        }
    }
}

TEST(Nu, MonteCarlo) {
    const std::size_t N = 200000;
    for (const auto* m : {&ref, &ref0}) {
        oracle::ModelSampler sampler(m->R(), m->Q(), m->w(), 3);
        std::vector<dra::Point2> pts(N);
        for (auto& p : pts) p = sampler.next();
        for (double s : {0.03, 0.1, 0.25, 0.6}) {
            for (double c : {0.4, 0.45, 0.5}) {
                const double p = dra::nu(*m, s, c);
                const auto mc = oracle::ball_mass(pts, s, c);
                EXPECT_NEAR(mc.estimate, p, 4.0 * mc.sigma(p) + 1e-12) << "s=" << s << " c=" << c;
            }
        }
    }
}

TEST(Omega, Examples) {
    const auto p = dra::omega(ref, 0.04);
    EXPECT_EQ(p.regime, PeakRegime::SmallS);
    EXPECT_DOUBLE_EQ(p.omega, 0.44);
    EXPECT_NEAR(p.M, 0.016888888888888888, 1e-12);

    const auto q = dra::omega(ref0, 0.3);
    EXPECT_EQ(q.regime, PeakRegime::MiddleS);
    ASSERT_TRUE(q.middle_root.has_value());
    EXPECT_NEAR(*q.middle_root, std::sqrt(0.115), 1e-11);
    EXPECT_EQ(q.omega, 0.4);

    EXPECT_EQ(dra::omega(ref, 0.5).omega, 0.0);
    EXPECT_EQ(dra::omega(ref0, 0.5).omega, 0.4);
    EXPECT_EQ(dra::omega(ref, 0.46).regime, PeakRegime::LargeS);
    EXPECT_EQ(dra::omega(ref, 0.049).regime, PeakRegime::SmallS);
}

TEST(Omega, DenseGridOracle) {
    for (const auto* m : {&ref, &ref0}) {
        for (double s = 0.01; s < 0.9; s += 0.01) {
            const auto p = dra::omega(*m, s);
            const double arg = grid_argmax(*m, s, 20000);
            const double Mgrid = dra::nu(*m, s, arg);
            // The maximum is attained (to grid resolution) and nothing on the grid beats it.
            EXPECT_GE(p.M, Mgrid - 1e-12) << "s=" << s;
            EXPECT_NEAR(p.M, dra::nu(*m, s, p.omega), 1e-15);
            // On a plateau the leftmost maximiser is taken.
            if (p.regime == PeakRegime::SmallS) EXPECT_NEAR(p.omega, m->R() + s, 1e-12);
            else EXPECT_NEAR(p.omega, arg, 2e-4) << "s=" << s << " w=" << m->w();
        }
    }
}

TEST(Omega, RegimeEdges) {
    for (const auto* m : {&ref, &ref0}) {
        for (double s : {0.05, std::nextafter(0.05, 1.0), 0.0500001, 0.4499999, std::nextafter(0.45, 0.0), 0.45}) {
            const auto p = dra::omega(*m, s);
            EXPECT_GE(p.omega, m->domain_left());
            EXPECT_LE(p.omega, m->Q());
        }
        // omega is continuous across the small/middle edge.
        EXPECT_NEAR(dra::omega(*m, 0.0500001).omega, dra::omega(*m, 0.05).omega, 1e-6);
    }
}

TEST(Omega, MiddleResidual) {
    for (double s = 0.051; s < 0.45; s += 0.007) {
        const auto p = dra::omega(ref, s);
        ASSERT_EQ(p.regime, PeakRegime::MiddleS);
        EXPECT_LT(std::abs(dra::measure_detail::peak_equation(ref, s, p.omega)), 1e-10);
        const auto q = dra::omega(ref0, s);
        EXPECT_LT(std::abs(*q.middle_root * *q.middle_root + s * s - 0.205), 1e-9);
        EXPECT_GE(q.omega, 0.4);
    }
}

TEST(SuperlevelInnerRadius, Basics) {
    const double s = 0.04;
    EXPECT_EQ(dra::superlevel_inner_radius(ref, s, 0.0), 0.0);
    EXPECT_FALSE(dra::superlevel_inner_radius(ref, s, 0.02).has_value());
    const double M = dra::omega(ref, s).M;
    for (double frac : {0.1, 0.3, 0.5, 0.9, 0.999}) {
        const auto P = dra::superlevel_inner_radius(ref, s, frac * M);
        ASSERT_TRUE(P.has_value());
        EXPECT_GE(dra::nu(ref, s, *P), frac * M - 1e-15);
        EXPECT_LT(dra::nu(ref, s, std::max(0.0, *P - 1e-9)), frac * M + 1e-12);
        EXPECT_LE(*P, 0.44);
    }
    EXPECT_EQ(dra::superlevel_inner_radius(ref0, 0.3, 0.0), 0.4);
}
