#include "plg/mesh.hpp"

#include "plg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace plg {

namespace {

// Containment slack in barycentric units.
constexpr double bary_tol = 1e-13;

ElementGeometry compute_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2)
{
    const std::array<Vec2, 3> p{p0, p1, p2};
    const double twice_area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    ElementGeometry g;
    g.area = 0.5 * twice_area;
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = p[(i + 1) % 3];
        const Vec2& b = p[(i + 2) % 3];
        g.grad[i] = {(a.y - b.y) / twice_area, (b.x - a.x) / twice_area};
    }
    return g;
}

double min_of(const std::array<double, 3>& l) { return std::min({l[0], l[1], l[2]}); }

}  // namespace

Mesh::Mesh(int divisions, Diagonal diagonal)
    : divisions_(divisions), diagonal_(diagonal)
{
    if (divisions < 1) {
        throw InvalidParameter("mesh: divisions per side must be >= 1, got " + std::to_string(divisions));
    }
    const int n = divisions;
    const int stride = n + 1;
    nodes_.reserve(static_cast<std::size_t>(stride) * stride);
    boundary_.reserve(nodes_.capacity());
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            nodes_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
            boundary_.push_back(i == 0 || j == 0 || i == n || j == n ? 1 : 0);
        }
    }

    elements_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * stride + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + stride;
            const int v11 = v01 + 1;
            if (diagonal == Diagonal::right) {
                elements_.push_back({v00, v10, v11});
                elements_.push_back({v00, v11, v01});
            } else {
                elements_.push_back({v00, v10, v01});
                elements_.push_back({v10, v11, v01});
            }
        }
    }

    geometry_.reserve(elements_.size());
    diameter_.reserve(elements_.size());
    for (const auto& e : elements_) {
        const Vec2 a = nodes_[e[0]], b = nodes_[e[1]], c = nodes_[e[2]];
        geometry_.push_back(compute_geometry(a, b, c));
        const double d = std::max({norm(b - a), norm(c - b), norm(a - c)});
        diameter_.push_back(d);
        h_max_ = std::max(h_max_, d);
    }

    build_adjacency();
}

void Mesh::build_adjacency()
{
    const auto nn = static_cast<std::int64_t>(nodes_.size());
    std::unordered_map<std::int64_t, std::pair<int, int>> open_edges;
    open_edges.reserve(elements_.size() * 2);
    neighbors_.assign(elements_.size(), {no_neighbor, no_neighbor, no_neighbor});

    for (std::size_t k = 0; k < elements_.size(); ++k) {
        const auto& e = elements_[k];
        for (int i = 0; i < 3; ++i) {
            const std::int64_t a = e[(i + 1) % 3];
            const std::int64_t b = e[(i + 2) % 3];
            const std::int64_t key = std::min(a, b) * nn + std::max(a, b);
            auto it = open_edges.find(key);
            if (it == open_edges.end()) {
                open_edges.emplace(key, std::pair{static_cast<int>(k), i});
            } else {
                const auto [other, local] = it->second;
                neighbors_[k][i] = other;
                neighbors_[other][local] = static_cast<int>(k);
                open_edges.erase(it);
            }
        }
    }

    node_offsets_.assign(nodes_.size() + 1, 0);
    for (const auto& e : elements_) {
        for (int v : e) ++node_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_offsets_[i + 1] += node_offsets_[i];
    node_elements_.resize(node_offsets_.back());
    std::vector<int> fill(node_offsets_.begin(), node_offsets_.end() - 1);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        for (int v : elements_[k]) node_elements_[fill[v]++] = static_cast<int>(k);
    }
}

std::array<double, 3> Mesh::barycentric(std::size_t k, Vec2 x) const
{
    const auto& e = elements_[k];
    const auto& g = geometry_[k];
    std::array<double, 3> l{};
    for (int i = 0; i < 3; ++i) l[i] = dot(g.grad[i], x - nodes_[e[(i + 1) % 3]]);
    return l;
}

Mesh build_unit_square_mesh(int divisions, Diagonal diagonal) { return Mesh(divisions, diagonal); }

ElementGeometry element_geometry(const Mesh& mesh, std::size_t k)
{
    if (k >= mesh.element_count()) {
        throw InvalidParameter("element_geometry: element index out of range");
    }
    return mesh.geometry(k);
}

PointLocator::PointLocator(const Mesh& mesh, double tolerance)
    : mesh_(&mesh), tol_(tolerance) {}

PointLocation PointLocator::locate(Vec2 x) { return locate(x, hint_); }

PointLocation PointLocator::locate(Vec2 x, int start_element)
{
    if (!(x.x >= -tol_ && x.x <= 1.0 + tol_ && x.y >= -tol_ && x.y <= 1.0 + tol_)) {
        throw OutOfDomain("point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                          ") lies outside the unit square");
    }
    x = {std::clamp(x.x, 0.0, 1.0), std::clamp(x.y, 0.0, 1.0)};

    const int count = static_cast<int>(mesh_->element_count());
    if (start_element < 0 || start_element >= count) start_element = 0;
    int found = walk(x, start_element);
    if (found < 0) {
        ++fallbacks_;
        found = brute_force(x);
    }
    hint_ = found;
    return finalize(x, found);
}

int PointLocator::walk(Vec2 x, int start) const
{
    const int limit = 4 * (mesh_->divisions() + 2) + 16;
    int current = start;
    for (int step = 0; step < limit; ++step) {
        const auto l = mesh_->barycentric(current, x);
        const int worst = static_cast<int>(std::min_element(l.begin(), l.end()) - l.begin());
        if (l[worst] >= -bary_tol) return current;
        const int next = mesh_->neighbors(current)[worst];
        if (next == Mesh::no_neighbor) return -1;
        current = next;
    }
    return -1;
}

int PointLocator::brute_force(Vec2 x) const
{
    int best = 0;
    double best_min = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mesh_->element_count(); ++k) {
        const double m = min_of(mesh_->barycentric(k, x));
        if (m >= -bary_tol) return static_cast<int>(k);
        if (m > best_min) {
            best_min = m;
            best = static_cast<int>(k);
        }
    }
    return best;
}

PointLocation PointLocator::finalize(Vec2 x, int element) const
{
    auto l = mesh_->barycentric(element, x);
    if (min_of(l) < bary_tol) {
        // On an edge or vertex: the lowest-index element containing x wins.
        for (int v : mesh_->element(element)) {
            for (int k : mesh_->elements_of_node(v)) {
                if (k >= element) break;
                const auto lk = mesh_->barycentric(k, x);
                if (min_of(lk) >= -bary_tol) {
                    element = k;
                    l = lk;
                    break;
                }
            }
        }
    }
    double sum = 0.0;
    for (double& li : l) {
        li = std::clamp(li, 0.0, 1.0);
        sum += li;
    }
    for (double& li : l) li /= sum;
    return {element, l};
}

PointLocation locate_point(const Mesh& mesh, Vec2 x)
{
    PointLocator locator(mesh);
    if (mesh.divisions() > 8) {
        // Seed the walk from the structured cell containing x.
        const int n = mesh.divisions();
        const int i = std::clamp(static_cast<int>(x.x * n), 0, n - 1);
        const int j = std::clamp(static_cast<int>(x.y * n), 0, n - 1);
        return locator.locate(x, 2 * (j * n + i));
    }
    return locator.locate(x);
}

}  // namespace plg
