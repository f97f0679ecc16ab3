#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gbm/model.hpp"
#include "oracles.hpp"

using namespace gbm;

namespace {

DimensionlessParameters rates(double alpha, double beta1, double beta2, double gamma, double delta) {
    return {.kappa1 = 55.0, .alpha = alpha, .beta1 = beta1, .beta2 = beta2, .gamma = gamma, .delta = delta};
}

} // namespace

TEST(VascularFraction, Examples) {
    EXPECT_EQ(vascular_fraction(0.0, 0.7), 0.0);
    EXPECT_EQ(vascular_fraction(-0.3, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(vascular_fraction(1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(vascular_fraction(1.0, 1.0), 0.5);
}

TEST(VascularFraction, NegativeTumorTreatedAsZero) {
    EXPECT_DOUBLE_EQ(vascular_fraction(0.5, -2.0), vascular_fraction(0.5, 0.0));
}

TEST(VascularFraction, ClampedAboveOne) {
    // Phi slightly above 1 would give P > 1 without the clamp.
    EXPECT_LE(vascular_fraction(1.0 + 1e-9, 0.0), 1.0);
    EXPECT_EQ(hypoxia_factor(1.0 + 1e-9, 0.0), 0.0);
}

TEST(VascularFraction, BoundedAndMonotoneOnGrid) {
    const int n = 101;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double phi = i / double(n - 1), t = j / double(n - 1);
            const double p = vascular_fraction(phi, t);
            ASSERT_GE(p, 0.0);
            ASSERT_LE(p, 1.0);
            if (i + 1 < n) {
                ASSERT_LE(p, vascular_fraction((i + 1) / double(n - 1), t));
            }
            if (j + 1 < n) {
                ASSERT_GE(p, vascular_fraction(phi, (j + 1) / double(n - 1)));
            }
        }
    }
}

TEST(HypoxiaFactor, Examples) {
    EXPECT_DOUBLE_EQ(hypoxia_factor(0.0, 0.4), 1.0);
    EXPECT_DOUBLE_EQ(hypoxia_factor(1.0, 0.0), 0.0);
    EXPECT_NEAR(hypoxia_factor(1.0, 1.0), std::sqrt(0.75), 1e-15);
}

TEST(Reactions, TumorExamples) {
    const auto p = rates(45.0, 27.5, 2.55, 0.255, 2.55);
    EXPECT_EQ(reaction_tumor({0.0, 0.3, 0.6}, p), 0.0);
    EXPECT_NEAR(reaction_tumor({0.2, 0.0, 0.0}, p), -9.0, 1e-12);
    EXPECT_NEAR(reaction_tumor({0.2, 0.1, 0.4}, p), -8.585591081631883, 1e-12);
}

TEST(Reactions, NecrosisExamples) {
    const auto p = rates(45.0, 27.5, 2.55, 0.255, 2.55);
    EXPECT_EQ(reaction_necrosis({0.0, 0.5, 0.0}, p), 0.0);
    EXPECT_NEAR(reaction_necrosis({0.0, 0.2, 0.5}, p), 0.255, 1e-12);
    EXPECT_NEAR(reaction_necrosis({0.2, 0.1, 0.4}, p), 8.91825774829855, 1e-12);
}

TEST(Reactions, VasculatureExamples) {
    const auto p = rates(45.0, 27.5, 2.55, 0.255, 2.55);
    EXPECT_EQ(reaction_vasculature({0.4, 0.3, 0.0}, p), 0.0);
    EXPECT_NEAR(reaction_vasculature({0.2, 0.1, 0.4}, p), -0.30051766473115704, 1e-12);
    EXPECT_NEAR(reaction_vasculature({0.0, 0.2, 0.5}, p), -0.255, 1e-12);
    EXPECT_NEAR(reaction_vasculature({0.0, 0.2, 0.5}, p), -reaction_necrosis({0.0, 0.2, 0.5}, p), 1e-15);
}

TEST(Reactions, ExchangeIdentityAndNecrosisSign) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const FieldTriple s{unit(rng), unit(rng), unit(rng)};
        const auto p = rates(10 + 90 * unit(rng), 5 + 45 * unit(rng), 0.1 + 4.9 * unit(rng), 0.01 + 0.49 * unit(rng),
                             0.1 + 4.9 * unit(rng));
        const double P = vascular_fraction(s.phi_density, s.t_density);
        const double S = s.t_density + s.n_density + s.phi_density;
        const double expected = s.t_density * P * (1 - S) +
                                p.gamma * s.t_density * std::sqrt(1 - P * P) * s.phi_density * (1 - S);
        const double sum = reaction_tumor(s, p) + reaction_necrosis(s, p) + reaction_vasculature(s, p);
        ASSERT_NEAR(sum, expected, 1e-12);
        ASSERT_GE(reaction_necrosis(s, p), 0.0);
    }
}

TEST(Nondimensionalize, Examples) {
    const DimensionalParameters identity{.kappa1 = 2, .kappa0 = 1, .rho = 1, .alpha = 3, .beta1 = 4, .beta2 = 5,
                                         .gamma = 6, .delta = 7, .K = 1};
    EXPECT_EQ(nondimensionalize(identity), (DimensionlessParameters{2, 3, 4, 5, 6, 7}));

    const DimensionalParameters d{.kappa1 = 0.02, .kappa0 = 0.01, .rho = 0.5, .alpha = 1, .beta1 = 0.25,
                                  .beta2 = 0.5, .gamma = 0.1, .delta = 0.125, .K = 2};
    const auto p = nondimensionalize(d);
    EXPECT_DOUBLE_EQ(p.kappa1, 2.0);
    EXPECT_DOUBLE_EQ(p.alpha, 2.0);
    EXPECT_DOUBLE_EQ(p.beta1, 1.0);
    EXPECT_DOUBLE_EQ(p.beta2, 2.0);
    EXPECT_DOUBLE_EQ(p.gamma, 0.2);
    EXPECT_DOUBLE_EQ(p.delta, 0.5);
}

TEST(Nondimensionalize, RejectsNonpositiveScales) {
    DimensionalParameters d;
    d.kappa0 = 0.0;
    EXPECT_THROW(nondimensionalize(d), InvalidParameter);
    d = {};
    d.rho = -1.0;
    EXPECT_THROW(nondimensionalize(d), InvalidParameter);
    d = {};
    d.K = 0.0;
    EXPECT_THROW(nondimensionalize(d), InvalidParameter);
}

TEST(Nondimensionalize, ReactionsRescaleConsistently) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const DimensionalParameters d{.kappa1 = u(rng), .kappa0 = u(rng), .rho = u(rng), .alpha = u(rng),
                                      .beta1 = u(rng), .beta2 = u(rng), .gamma = u(rng), .delta = u(rng), .K = u(rng)};
        const double T = d.K * unit(rng), N = d.K * unit(rng), Phi = d.K * unit(rng);
        const auto dim = oracle::dimensional_reactions(T, N, Phi, d);
        const auto p = nondimensionalize(d);
        const FieldTriple s{T / d.K, N / d.K, Phi / d.K};
        const double scale = d.rho * d.K;
        ASSERT_NEAR(reaction_tumor(s, p), dim.f1 / scale, 1e-12);
        ASSERT_NEAR(reaction_necrosis(s, p), dim.f2 / scale, 1e-12);
        ASSERT_NEAR(reaction_vasculature(s, p), dim.f3 / scale, 1e-12);
    }
}

TEST(RescaleSpacetime, Examples) {
    const auto id = rescale_spacetime(1.5, 2.5, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(id.y, 1.5);
    EXPECT_DOUBLE_EQ(id.s, 2.5);
    const auto r = rescale_spacetime(2.0, 3.0, 1.0, 4.0);
    EXPECT_DOUBLE_EQ(r.y, 4.0);
    EXPECT_DOUBLE_EQ(r.s, 12.0);
    const auto o = rescale_spacetime(0.0, 0.0, 0.3, 0.7);
    EXPECT_EQ(o.y, 0.0);
    EXPECT_EQ(o.s, 0.0);
    EXPECT_THROW(rescale_spacetime(1.0, 1.0, 0.0, 1.0), InvalidParameter);
    EXPECT_THROW(rescale_spacetime(1.0, 1.0, 1.0, -1.0), InvalidParameter);
}
