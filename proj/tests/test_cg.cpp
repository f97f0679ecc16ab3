#include <random>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "gbm/cg.hpp"
#include "oracles.hpp"

using namespace gbm;

namespace {

SparseSymmetricMatrix<double> dense_to_sparse(const std::vector<double>& a, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
            if (a[r * n + c] != 0.0) entries.emplace_back(r, c);
    SparseSymmetricMatrix<double> m(n, entries);
    auto values = m.values();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a[r * n + c] != 0.0 || r == c) values[m.slot(r, c)] = a[r * n + c];
    return m;
}

} // namespace

TEST(ConjugateGradient, Identity) {
    const std::vector<double> a{1, 0, 0, 0, 1, 0, 0, 0, 1};
    const auto m = dense_to_sparse(a, 3);
    const std::vector<double> b{1.5, -2.0, 3.25};
    const auto x = solve_spd<double>(m, b, 1e-12, 10);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], b[i], 1e-14);
}

TEST(ConjugateGradient, Diagonal) {
    const auto m = dense_to_sparse({2, 0, 0, 4}, 2);
    const std::vector<double> b{2, 8};
    const auto x = solve_spd<double>(m, b, 1e-12, 10);
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], 2.0, 1e-14);
}

TEST(ConjugateGradient, ZeroRightHandSide) {
    const auto m = dense_to_sparse({2, 1, 1, 2}, 2);
    const std::vector<double> b{0, 0};
    const auto x = solve_spd<double>(m, b, 1e-12, 10);
    EXPECT_EQ(x[0], 0.0);
    EXPECT_EQ(x[1], 0.0);
}

TEST(ConjugateGradient, RandomSpdMatchesDenseSolve) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    const std::size_t n = 20;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> l(n * n), a(n * n, 0.0), b(n);
        for (auto& v : l) v = g(rng);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                for (std::size_t k = 0; k < n; ++k) a[r * n + c] += l[r * n + k] * l[c * n + k];
                if (r == c) a[r * n + c] += n;
            }
        for (auto& v : b) v = g(rng);
        const auto x = solve_spd<double>(dense_to_sparse(a, n), b, 1e-13, 200);
        const auto ref = oracle::dense_solve(a, b);
        for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(x[i], ref[i], 1e-8);
    }
}

TEST(ConjugateGradient, TinyRightHandSideStillConverges) {
    const auto m = dense_to_sparse({4, -1, 0, -1, 4, -1, 0, -1, 4}, 3);
    const std::vector<double> b{1e-300, 2e-300, 3e-300};
    const auto x = solve_spd<double>(m, b, 1e-12, 50);
    const std::vector<double> unit{1, 2, 3};
    const auto ref = solve_spd<double>(m, unit, 1e-12, 50);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i] / 1e-300, ref[i], 1e-9);
}

TEST(ConjugateGradient, NonConvergenceThrows) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    const std::size_t n = 30;
    std::vector<double> a(n * n, 0.0), b(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = 2.0 + u(rng);
        if (i + 1 < n) a[i * n + i + 1] = a[(i + 1) * n + i] = -1.0;
    }
    EXPECT_THROW(solve_spd<double>(dense_to_sparse(a, n), b, 1e-14, 1), SolverFailure);
}

TEST(ConjugateGradient, SizeMismatch) {
    const auto m = dense_to_sparse({1, 0, 0, 1}, 2);
    const std::vector<double> b{1, 2, 3};
    EXPECT_THROW(solve_spd<double>(m, b, 1e-12, 10), SizeMismatch);
}
