#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/sparse.hpp"

namespace gbm {

struct CgReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

namespace detail {

/// Jacobi-preconditioned CG on a system whose right-hand side has norm of order one.
template <class Real>
CgReport conjugate_gradient_unscaled(const SparseSymmetricMatrix<Real>& a, std::span<const Real> b, std::span<Real> x,
                            double tol, std::size_t max_iter) {
    const std::size_t n = a.dimension();
    if (b.size() != n || x.size() != n) throw SizeMismatch("CG vector length mismatch");

    auto dot = [n](std::span<const Real> u, std::span<const Real> v) {
        Real s{0};
        for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
        return s;
    };

    const double b_norm = std::sqrt(static_cast<double>(dot(b, b)));
    if (b_norm == 0.0) {
        for (auto& xi : x) xi = Real{0};
        return {0, 0.0, true};
    }

    const auto diag = a.diagonal();
    std::vector<Real> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(diag[i] > Real{0})) throw InvalidParameter("CG requires a positive diagonal");
        inv_diag[i] = Real{1} / diag[i];
    }

    std::vector<Real> r(n), z(n), p(n), ap(n);
    a.multiply(std::span<const Real>(x.data(), n), ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];

    double res = std::sqrt(static_cast<double>(dot(r, r))) / b_norm;
    if (res <= tol) return {0, res, true};

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    Real rz = dot(r, z);

    for (std::size_t it = 1; it <= max_iter; ++it) {
        a.multiply(p, ap);
        const Real pap = dot(p, ap);
        if (!(pap > Real{0})) return {it, res, false};
        const Real step = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        res = std::sqrt(static_cast<double>(dot(r, r))) / b_norm;
        if (res <= tol) return {it, res, true};

        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const Real rz_next = dot(r, z);
        const Real beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return {max_iter, res, false};
}

} // namespace detail

/// Jacobi-preconditioned conjugate gradient. `x` holds the initial guess on entry and the
/// solution on exit. The iteration sequence is fixed for fixed inputs. The system is
/// rescaled by a power of two so that right-hand sides near the underflow limit (decaying
/// densities) do not lose the curvature p.Ap to denormals.
template <class Real>
CgReport conjugate_gradient(const SparseSymmetricMatrix<Real>& a, std::span<const Real> b, std::span<Real> x,
                            double tol, std::size_t max_iter) {
    const std::size_t n = a.dimension();
    if (b.size() != n || x.size() != n) throw SizeMismatch("CG vector length mismatch");
    Real b_max{0};
    for (auto v : b) b_max = std::max(b_max, std::abs(v));
    if (b_max == Real{0} || !std::isfinite(static_cast<double>(b_max)))
        return detail::conjugate_gradient_unscaled<Real>(a, b, x, tol, max_iter);

    const int exponent = std::ilogb(b_max);
    if (exponent > -64 && exponent < 64) return detail::conjugate_gradient_unscaled<Real>(a, b, x, tol, max_iter);

    std::vector<Real> scaled_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled_b[i] = std::ldexp(b[i], -exponent);
        x[i] = std::ldexp(x[i], -exponent);
    }
    const auto report = detail::conjugate_gradient_unscaled<Real>(a, scaled_b, x, tol, max_iter);
    for (auto& xi : x) xi = std::ldexp(xi, exponent);
    return report;
}

/// Solves A x = b for symmetric positive definite A starting from x = 0.
/// Throws SolverFailure when the relative residual does not drop below `tol`.
template <class Real>
std::vector<Real> solve_spd(const SparseSymmetricMatrix<Real>& a, std::span<const Real> b, double tol,
                            std::size_t max_iter) {
    std::vector<Real> x(a.dimension(), Real{0});
    const auto report = conjugate_gradient<Real>(a, b, x, tol, max_iter);
    if (!report.converged) throw SolverFailure(0, report.relative_residual, report.iterations);
    return x;
}

} // namespace gbm
