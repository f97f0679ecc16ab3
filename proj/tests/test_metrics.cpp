#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gbm/metrics.hpp"
#include "oracles.hpp"

using namespace gbm;

namespace {

SimulationState state_with(const StructuredTriMesh& mesh, double t, double n) {
    SimulationState s(mesh.vertex_count());
    s.t_field.assign(mesh.vertex_count(), t);
    s.n_field.assign(mesh.vertex_count(), n);
    return s;
}

ThresholdedRegion region_of(std::vector<Point2> pts) {
    ThresholdedRegion r;
    for (std::size_t i = 0; i < pts.size(); ++i) r.vertices.push_back(i);
    r.coordinates = std::move(pts);
    return r;
}

} // namespace

TEST(RingQuotient, Cases) {
    const auto mesh = build_mesh(Rect{}, 9);
    EXPECT_DOUBLE_EQ(ring_quotient(state_with(mesh, 0.3, 0.0), mesh), 1.0);
    EXPECT_DOUBLE_EQ(ring_quotient(state_with(mesh, 0.2, 0.6), mesh), 0.25);
    EXPECT_EQ(ring_quotient(state_with(mesh, 0.0, 0.4), mesh), 0.0);
    EXPECT_EQ(ring_quotient(state_with(mesh, 0.0, 0.0), mesh), 1.0);
}

TEST(RingQuotient, StaysInUnitInterval) {
    const auto mesh = build_mesh(Rect{}, 9);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        auto s = state_with(mesh, 0.0, 0.0);
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
            s.t_field[v] = u(rng) * u(rng);
            s.n_field[v] = u(rng) * u(rng);
        }
        const double rq = ring_quotient(s, mesh);
        ASSERT_GE(rq, 0.0);
        ASSERT_LE(rq, 1.0);
    }
}

TEST(Threshold, InclusiveAtLevel) {
    const auto mesh = build_mesh(Rect{}, 45);
    auto s = state_with(mesh, 0.0, 0.0);
    s.t_field[mesh.index(20, 20)] = 0.001;
    s.t_field[mesh.index(21, 20)] = 0.0009;
    s.n_field[mesh.index(22, 20)] = 0.0005;
    s.t_field[mesh.index(22, 20)] = 0.0005;
    const auto r = threshold_indicator(s, mesh);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.vertices[0], mesh.index(20, 20));
    EXPECT_EQ(r.vertices[1], mesh.index(22, 20));
}

TEST(Area, Cases) {
    const auto mesh = build_mesh(Rect{}, 45);
    auto s = state_with(mesh, 0.0, 0.0);
    EXPECT_EQ(tumor_area(threshold_indicator(s, mesh), mesh), 0.0);
    s.t_field[mesh.index(10, 10)] = 0.5;
    EXPECT_NEAR(tumor_area(threshold_indicator(s, mesh), mesh), 0.16, 1e-14);
    EXPECT_NEAR(tumor_area(threshold_indicator(state_with(mesh, 0.1, 0.0), mesh), mesh), 324.0, 1e-10);
}

TEST(Area, MonotoneInThreshold) {
    const auto mesh = build_mesh(Rect{}, 20);
    auto s = state_with(mesh, 0.0, 0.0);
    const auto v = mesh.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) s.t_field[i] = std::exp(-(v[i].x * v[i].x + v[i].y * v[i].y) / 8.0);
    double previous = INFINITY;
    for (double theta : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9}) {
        const double a = tumor_area(threshold_indicator(s, mesh, theta), mesh);
        EXPECT_LE(a, previous);
        previous = a;
    }
}

TEST(MaxRadius, SmallSets) {
    EXPECT_EQ(max_radius(region_of({{0, 0}})), 0.0);
    EXPECT_NEAR(max_radius(region_of({{0, 0}, {1, 0}})), 0.5, 1e-15);
    EXPECT_NEAR(max_radius(region_of({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}})), 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(max_radius(region_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}})), 1.5, 1e-15);
    EXPECT_NEAR(max_radius(region_of({{0, 0}, {0, 0}, {0, 0}})), 0.0, 1e-15);
    EXPECT_THROW(max_radius(ThresholdedRegion{}), EmptyRegion);
}

TEST(MaxRadius, MatchesBruteForce) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    std::uniform_int_distribution<int> count(1, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point2> pts(static_cast<std::size_t>(count(rng)));
        for (auto& p : pts) p = {u(rng), u(rng)};
        const auto c = smallest_enclosing_circle(pts);
        ASSERT_NEAR(c.radius, oracle::brute_force_min_radius(pts), 1e-10) << "trial " << trial;
        for (const auto& p : pts) ASSERT_LE(std::hypot(p.x - c.center.x, p.y - c.center.y), c.radius * (1 + 1e-10) + 1e-12);
    }
}

TEST(MaxRadius, OrderIndependent) {
    std::vector<Point2> pts{{0, 0}, {3, 1}, {-2, 4}, {1, -3}, {2, 2}};
    const double r = max_radius(region_of(pts));
    std::reverse(pts.begin(), pts.end());
    EXPECT_NEAR(max_radius(region_of(pts)), r, 1e-14);
}

TEST(SurfaceQuotient, TwoDistantVertices) {
    const auto mesh = build_mesh(Rect{}, 45);
    auto s = state_with(mesh, 0.0, 0.0);
    s.t_field[mesh.index(12, 23)] = 0.3;
    s.n_field[mesh.index(32, 23)] = 0.3;
    EXPECT_NEAR(surface_quotient(s, mesh), 0.32 / (16.0 * std::numbers::pi), 1e-12);
}

TEST(SurfaceQuotient, SubResolutionRegionIsOne) {
    const auto mesh = build_mesh(Rect{}, 45);
    auto s = state_with(mesh, 0.0, 0.0);
    s.t_field[mesh.index(5, 5)] = 0.5;
    EXPECT_EQ(surface_quotient(s, mesh), 1.0);
    EXPECT_THROW(surface_quotient(state_with(mesh, 0.0, 0.0), mesh), EmptyRegion);
}

TEST(SurfaceQuotient, DiscretizedDisc) {
    const auto mesh = build_mesh(Rect{}, 180);
    auto s = state_with(mesh, 0.0, 0.0);
    const auto v = mesh.vertices();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::hypot(v[i].x, v[i].y) <= 4.0) s.t_field[i] = 0.5;
    const double sq = surface_quotient(s, mesh);
    EXPECT_GE(sq, 0.9);
    EXPECT_LE(sq, 1.05);
}

TEST(SurfaceQuotient, ScaleInvariant) {
    auto sq_of = [](double half_width, std::size_t n) {
        const auto mesh = build_mesh(Rect{-half_width, half_width, -half_width, half_width}, n);
        SimulationState s(mesh.vertex_count());
        const auto v = mesh.vertices();
        const double L = half_width / 9.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i].x) <= 4.1 * L && std::abs(v[i].y) <= 2.1 * L) s.t_field[i] = 0.5;
        return surface_quotient(s, mesh);
    };
    EXPECT_NEAR(sq_of(9.0, 45), sq_of(18.0, 45), 1e-12);
    EXPECT_NEAR(sq_of(9.0, 45), sq_of(0.9, 45), 1e-12);
}

TEST(ComputeMetrics, EmptyRegionReportsNan) {
    const auto mesh = build_mesh(Rect{}, 9);
    auto s = state_with(mesh, 0.0, 0.0);
    s.phi_field.assign(mesh.vertex_count(), 0.5);
    const auto m = compute_metrics(s, mesh);
    EXPECT_EQ(m.rq, 1.0);
    EXPECT_EQ(m.area, 0.0);
    EXPECT_TRUE(std::isnan(m.sq));
    EXPECT_TRUE(std::isnan(m.r_max));
    EXPECT_NEAR(m.phi_density, 162.0, 1e-10);
}

TEST(ComputeMetrics, ConsistentWithParts) {
    const auto mesh = build_mesh(Rect{}, 30);
    auto s = state_with(mesh, 0.0, 0.0);
    const auto v = mesh.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = std::hypot(v[i].x - 1, v[i].y);
        s.t_field[i] = r < 3 ? 0.3 * (3 - r) / 3 : 0.0;
        s.n_field[i] = r < 2 ? 0.2 : 0.0;
    }
    s.time = 2.5;
    const auto m = compute_metrics(s, mesh);
    EXPECT_EQ(m.time, 2.5);
    EXPECT_DOUBLE_EQ(m.rq, ring_quotient(s, mesh));
    EXPECT_DOUBLE_EQ(m.sq, surface_quotient(s, mesh));
    EXPECT_DOUBLE_EQ(m.area, tumor_area(threshold_indicator(s, mesh), mesh));
    EXPECT_DOUBLE_EQ(m.total_tn_density, total_density(s, mesh, DensitySelector::TumorPlusNecrosis));
}
