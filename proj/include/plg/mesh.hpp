#pragma once

#include "plg/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace plg {

enum class Diagonal { right, left };

/// Barycentric location of a point inside one triangle.
struct PointLocation {
    int element = -1;
    std::array<double, 3> bary{};
};

struct ElementGeometry {
    double area = 0.0;
    std::array<Vec2, 3> grad{};  ///< gradients of the three hat functions
};

/// Structured triangulation of the unit square. Immutable after construction.
class Mesh {
public:
    static constexpr int no_neighbor = -1;

    Mesh(int divisions, Diagonal diagonal);

    int divisions() const noexcept { return divisions_; }
    Diagonal diagonal() const noexcept { return diagonal_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t element_count() const noexcept { return elements_.size(); }

    /// Maximum element diameter.
    double h() const noexcept { return h_max_; }

    Vec2 node(std::size_t i) const { return nodes_[i]; }
    std::span<const Vec2> nodes() const noexcept { return nodes_; }
    const std::array<int, 3>& element(std::size_t k) const { return elements_[k]; }
    std::span<const std::array<int, 3>> elements() const noexcept { return elements_; }

    /// neighbors(k)[i] is the element across the edge opposite local vertex i.
    const std::array<int, 3>& neighbors(std::size_t k) const { return neighbors_[k]; }
    bool on_boundary(std::size_t node) const { return boundary_[node] != 0; }
    double diameter(std::size_t k) const { return diameter_[k]; }
    const ElementGeometry& geometry(std::size_t k) const { return geometry_[k]; }

    /// Elements incident to a node, ascending.
    std::span<const int> elements_of_node(std::size_t node) const
    {
        return {node_elements_.data() + node_offsets_[node],
                node_elements_.data() + node_offsets_[node + 1]};
    }

    /// Barycentric coordinates of x in element k (not clipped).
    std::array<double, 3> barycentric(std::size_t k, Vec2 x) const;

private:
    void build_adjacency();

    int divisions_;
    Diagonal diagonal_;
    double h_max_ = 0.0;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<std::array<int, 3>> neighbors_;
    std::vector<std::uint8_t> boundary_;
    std::vector<double> diameter_;
    std::vector<ElementGeometry> geometry_;
    std::vector<int> node_offsets_;
    std::vector<int> node_elements_;
};

Mesh build_unit_square_mesh(int divisions, Diagonal diagonal = Diagonal::right);

ElementGeometry element_geometry(const Mesh& mesh, std::size_t k);

/// Point location with a per-caller walk cache. Not thread-safe; use one per thread.
class PointLocator {
public:
    static constexpr double default_tolerance = 1e-12;

    explicit PointLocator(const Mesh& mesh, double tolerance = default_tolerance);

    /// Throws OutOfDomain when x is outside [0,1]^2 by more than the tolerance.
    PointLocation locate(Vec2 x);

    /// Same, starting the walk from a caller-supplied element.
    PointLocation locate(Vec2 x, int start_element);

    std::size_t fallback_count() const noexcept { return fallbacks_; }

private:
    int walk(Vec2 x, int start) const;
    int brute_force(Vec2 x) const;
    PointLocation finalize(Vec2 x, int element) const;

    const Mesh* mesh_;
    double tol_;
    int hint_ = 0;
    std::size_t fallbacks_ = 0;
};

PointLocation locate_point(const Mesh& mesh, Vec2 x);

}  // namespace plg
