#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "isospec/errors.hpp"
#include "isospec/fem.hpp"

namespace isospec {

namespace {

constexpr int kEllipseSegments = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double min_angle(Vec2 a, Vec2 b, Vec2 c) {
    const auto angle = [](Vec2 p, Vec2 q, Vec2 r) {
        const Vec2 u = q - p, v = r - p;
        return std::atan2(std::abs(u.cross(v)), u.dot(v));
    };
    return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

bool inside_or_on(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double eps) {
    return (b - a).cross(p - a) >= -eps && (c - b).cross(p - b) >= -eps &&
           (a - c).cross(p - c) >= -eps;
}

// Ear clipping that always removes the ear with the best minimum angle.
std::vector<std::array<int, 3>> triangulate(std::span<const Vec2> v) {
    std::vector<int> ring(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ring[i] = static_cast<int>(i);

    double scale = 0.0;
    for (const Vec2& p : v) scale = std::max({scale, std::abs(p.x1), std::abs(p.x2)});
    const double eps = 1e-13 * scale * scale;

    std::vector<std::array<int, 3>> tris;
    while (ring.size() > 3) {
        const std::size_t n = ring.size();
        std::size_t best = n;
        double best_quality = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const int ip = ring[(k + n - 1) % n], ic = ring[k], in = ring[(k + 1) % n];
            const Vec2 a = v[ip], b = v[ic], c = v[in];
            if ((b - a).cross(c - b) <= eps) continue;  // reflex or flat
            bool empty = true;
            for (int other : ring) {
                if (other == ip || other == ic || other == in) continue;
                if (inside_or_on(v[other], a, b, c, eps)) {
                    empty = false;
                    break;
                }
            }
            if (!empty) continue;
            // Near-ties go to the first ear in ring order so that rotated or
            // scaled copies of a polygon get the same triangulation.
            const double q = min_angle(a, b, c);
            if (q > best_quality + 1e-9) {
                best_quality = q;
                best = k;
            }
        }
        if (best == n) throw InvalidArgument("polygon could not be triangulated");
        tris.push_back({ring[(best + n - 1) % n], ring[best], ring[(best + 1) % n]});
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(best));
    }
    tris.push_back({ring[0], ring[1], ring[2]});
    return tris;
}

Mesh polygon_mesh(const Polygon& p) {
    Mesh m;
    m.vertices.assign(p.vertices().begin(), p.vertices().end());
    m.triangles = triangulate(p.vertices());
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) m.boundary_edges.push_back({i, (i + 1) % n});
    return m;
}

Mesh ellipse_mesh(const Ellipse& e) {
    Mesh m;
    m.curved_boundary = e;
    for (int k = 0; k < kEllipseSegments; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kEllipseSegments;
        m.vertices.push_back(e.point_at(t));
        m.boundary_param.push_back(t);
    }
    const int center = kEllipseSegments;
    m.vertices.push_back(e.center);
    m.boundary_param.push_back(kNaN);
    for (int k = 0; k < kEllipseSegments; ++k) {
        const int next = (k + 1) % kEllipseSegments;
        m.triangles.push_back({center, k, next});
        m.boundary_edges.push_back({k, next});
    }
    return m;
}

std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

}  // namespace

std::vector<bool> Mesh::boundary_vertex_mask() const {
    std::vector<bool> mask(vertices.size(), false);
    for (const auto& e : boundary_edges) mask[e[0]] = mask[e[1]] = true;
    return mask;
}

Mesh refine(const Mesh& mesh) {
    Mesh out;
    out.vertices = mesh.vertices;
    out.curved_boundary = mesh.curved_boundary;
    out.boundary_param = mesh.boundary_param;
    out.refinement_level = mesh.refinement_level + 1;

    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(mesh.triangles.size() * 2);
    const auto mid = [&](int a, int b) {
        const auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), 0);
        if (inserted) {
            it->second = static_cast<int>(out.vertices.size());
            out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
            if (out.curved_boundary) out.boundary_param.push_back(kNaN);
        }
        return it->second;
    };

    for (const auto& e : mesh.boundary_edges) {
        const int m = mid(e[0], e[1]);
        if (out.curved_boundary) {
            double ta = mesh.boundary_param[e[0]], tb = mesh.boundary_param[e[1]];
            if (tb < ta) tb += 2.0 * std::numbers::pi;
            const double t = 0.5 * (ta + tb);
            out.boundary_param[m] = t;
            out.vertices[m] = out.curved_boundary->point_at(t);
        }
        out.boundary_edges.push_back({e[0], m});
        out.boundary_edges.push_back({m, e[1]});
    }
    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

Mesh mesh_domain(const Domain& d, int level) {
    if (level < 0) throw InvalidArgument("refinement level must be >= 0");
    Mesh m = d.is_polygon() ? polygon_mesh(d.polygon()) : ellipse_mesh(d.ellipse());
    for (int k = 0; k < level; ++k) m = refine(m);
    return m;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    const auto old = out.precision(17);
    for (const Vec2& p : mesh.vertices) out << "v " << p.x1 << ' ' << p.x2 << '\n';
    for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& e : mesh.boundary_edges) out << "b " << e[0] << ' ' << e[1] << '\n';
    out.precision(old);
}

}  // namespace isospec
