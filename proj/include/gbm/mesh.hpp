#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/sparse.hpp"

namespace gbm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Rect {
    double xmin = -9.0;
    double xmax = 9.0;
    double ymin = -9.0;
    double ymax = 9.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    bool contains(Point2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Which diagonal splits every cell. The x- or y-mirror of one orientation is the other.
enum class Diagonal {
    SouthWestNorthEast,
    SouthEastNorthWest,
};

using Triangle = std::array<std::size_t, 3>;

/// Uniform triangulation of a rectangle: (n+1)^2 vertices numbered row by row
/// (index = i + j (n+1), i along x), 2 n^2 counter-clockwise right triangles.
class StructuredTriMesh {
public:
    StructuredTriMesh(Rect bounds, std::size_t n_sub, Diagonal diagonal = Diagonal::SouthWestNorthEast)
        : bounds_(bounds), n_sub_(n_sub), diagonal_(diagonal) {
        if (n_sub == 0) throw InvalidMesh("n_sub must be at least 1");
        if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin) || !std::isfinite(bounds.area()))
            throw InvalidMesh("mesh bounds are degenerate or inverted");

        const std::size_t side = n_sub + 1;
        vertices_.reserve(side * side);
        for (std::size_t j = 0; j < side; ++j)
            for (std::size_t i = 0; i < side; ++i) vertices_.push_back(grid_point(i, j));

        triangles_.reserve(2 * n_sub * n_sub);
        for (std::size_t j = 0; j < n_sub; ++j) {
            for (std::size_t i = 0; i < n_sub; ++i) {
                const std::size_t v00 = index(i, j), v10 = index(i + 1, j);
                const std::size_t v01 = index(i, j + 1), v11 = index(i + 1, j + 1);
                if (diagonal == Diagonal::SouthWestNorthEast) {
                    triangles_.push_back({v00, v10, v11});
                    triangles_.push_back({v00, v11, v01});
                } else {
                    triangles_.push_back({v00, v10, v01});
                    triangles_.push_back({v10, v11, v01});
                }
            }
        }

        lumped_weights_.assign(vertices_.size(), 0.0);
        for (const auto& tri : triangles_) {
            const double third = signed_area(tri) / 3.0;
            for (auto v : tri) lumped_weights_[v] += third;
        }
    }

    const Rect& bounds() const noexcept { return bounds_; }
    std::size_t n_sub() const noexcept { return n_sub_; }
    Diagonal diagonal() const noexcept { return diagonal_; }
    std::size_t side() const noexcept { return n_sub_ + 1; }
    double hx() const noexcept { return bounds_.width() / static_cast<double>(n_sub_); }
    double hy() const noexcept { return bounds_.height() / static_cast<double>(n_sub_); }
    /// Largest cell edge length along the axes.
    double cell_edge() const noexcept { return std::max(hx(), hy()); }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }
    std::span<const Point2> vertices() const noexcept { return vertices_; }
    std::span<const Triangle> triangles() const noexcept { return triangles_; }
    std::span<const double> lumped_weights() const noexcept { return lumped_weights_; }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + j * side(); }

    /// Vertex index of the x-mirrored (x -> xmin + xmax - x) grid position.
    std::size_t mirror_x(std::size_t v) const noexcept {
        const std::size_t i = v % side(), j = v / side();
        return index(n_sub_ - i, j);
    }
    std::size_t mirror_y(std::size_t v) const noexcept {
        const std::size_t i = v % side(), j = v / side();
        return index(i, n_sub_ - j);
    }

    double signed_area(const Triangle& tri) const noexcept {
        const Point2 a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
        return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    }

private:
    Point2 grid_point(std::size_t i, std::size_t j) const {
        // Weighted form: exact at both bounds and mirror-exact on domains centred at the origin.
        const double n = static_cast<double>(n_sub_);
        const double x = (bounds_.xmin * (n - static_cast<double>(i)) + bounds_.xmax * static_cast<double>(i)) / n;
        const double y = (bounds_.ymin * (n - static_cast<double>(j)) + bounds_.ymax * static_cast<double>(j)) / n;
        return {x, y};
    }

    Rect bounds_;
    std::size_t n_sub_;
    Diagonal diagonal_;
    std::vector<Point2> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<double> lumped_weights_;
};

inline StructuredTriMesh build_mesh(Rect bounds, std::size_t n_sub,
                                    Diagonal diagonal = Diagonal::SouthWestNorthEast) {
    return StructuredTriMesh(bounds, n_sub, diagonal);
}

/// Per-vertex lumped mass: sum over adjacent triangles of area / 3.
inline std::vector<double> lumped_mass(const StructuredTriMesh& mesh) {
    const auto w = mesh.lumped_weights();
    return {w.begin(), w.end()};
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline double lumped_integral(const StructuredTriMesh& mesh, std::span<const double> field) {
    if (field.size() != mesh.vertex_count()) throw SizeMismatch("field length does not match vertex count");
    const auto w = mesh.lumped_weights();
    CompensatedSum sum;
    for (std::size_t v = 0; v < field.size(); ++v) sum.add(w[v] * field[v]);
    return sum.value();
}

/// Assembles A_ij = sum_K D_K int_K grad(phi_i) . grad(phi_j) with D_K the mean of the
/// three vertex diffusivities. Element gradient products and matrix slots are cached,
/// so re-assembly with a new diffusivity only rewrites values.
class StiffnessAssembler {
public:
    explicit StiffnessAssembler(const StructuredTriMesh& mesh) : vertex_count_(mesh.vertex_count()) {
        std::vector<std::pair<std::size_t, std::size_t>> pattern;
        pattern.reserve(mesh.triangle_count() * 6);
        for (const auto& tri : mesh.triangles())
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = a; b < 3; ++b) pattern.emplace_back(tri[a], tri[b]);
        matrix_ = SparseSymmetricMatrix<double>(vertex_count_, pattern);

        const auto verts = mesh.vertices();
        elements_.reserve(mesh.triangle_count());
        for (const auto& tri : mesh.triangles()) {
            Element e{};
            e.vertices = tri;
            const double area = mesh.signed_area(tri);
            // grad(phi_a) = perp(edge opposite a) / (2 area)
            std::array<Point2, 3> grad{};
            for (std::size_t a = 0; a < 3; ++a) {
                const Point2 p = verts[tri[(a + 1) % 3]], q = verts[tri[(a + 2) % 3]];
                grad[a] = {(p.y - q.y) / (2.0 * area), (q.x - p.x) / (2.0 * area)};
            }
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) {
                    e.local[a][b] = area * (grad[a].x * grad[b].x + grad[a].y * grad[b].y);
                    e.slots[a][b] = matrix_.slot(tri[a], tri[b]);
                }
            elements_.push_back(e);
        }
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }

    /// Overwrites the cached matrix with A(D) and returns it.
    const SparseSymmetricMatrix<double>& assemble(std::span<const double> diffusivity) {
        if (diffusivity.size() != vertex_count_) throw SizeMismatch("diffusivity length does not match vertex count");
        matrix_.set_zero();
        auto values = matrix_.values();
        for (const auto& e : elements_) {
            const double dk =
                (diffusivity[e.vertices[0]] + diffusivity[e.vertices[1]] + diffusivity[e.vertices[2]]) / 3.0;
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) values[e.slots[a][b]] += dk * e.local[a][b];
        }
        return matrix_;
    }

    const SparseSymmetricMatrix<double>& matrix() const noexcept { return matrix_; }

private:
    struct Element {
        Triangle vertices;
        std::array<std::array<double, 3>, 3> local;
        std::array<std::array<std::size_t, 3>, 3> slots;
    };

    std::size_t vertex_count_;
    SparseSymmetricMatrix<double> matrix_;
    std::vector<Element> elements_;
};

inline SparseSymmetricMatrix<double> assemble_stiffness(const StructuredTriMesh& mesh,
                                                        std::span<const double> diffusivity) {
    StiffnessAssembler assembler(mesh);
    return assembler.assemble(diffusivity);
}

} // namespace gbm
