#include "isospec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/ellint_2.hpp>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;

// Raw second-moment integrals of the region bounded by a closed vertex chain,
// computed exactly per edge with Green's theorem about a reference point.
// Signed: clockwise chains yield negative area.
struct ChainIntegrals {
    double area = 0.0;
    double sx = 0.0;   // int x
    double sy = 0.0;   // int y
    double sxx = 0.0;  // int x^2
    double syy = 0.0;  // int y^2
    double sxy = 0.0;  // int x y
};

ChainIntegrals chain_integrals(std::span<const Vec2> v, Vec2 ref) {
    ChainIntegrals r;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = v[i] - ref;
        const Vec2 q = v[(i + 1) % n] - ref;
        const double c = p.cross(q);
        r.area += c;
        r.sx += c * (p.x1 + q.x1);
        r.sy += c * (p.x2 + q.x2);
        r.sxx += c * (p.x1 * p.x1 + p.x1 * q.x1 + q.x1 * q.x1);
        r.syy += c * (p.x2 * p.x2 + p.x2 * q.x2 + q.x2 * q.x2);
        r.sxy += c * (p.x1 * q.x2 + 2.0 * p.x1 * p.x2 + 2.0 * q.x1 * q.x2 + q.x1 * p.x2);
    }
    r.area /= 2.0;
    r.sx /= 6.0;
    r.sy /= 6.0;
    r.sxx /= 12.0;
    r.syy /= 12.0;
    r.sxy /= 24.0;
    return r;
}

double signed_area(std::span<const Vec2> v) {
    double a = 0.0;
    const Vec2 ref = v.front();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) a += (v[i] - ref).cross(v[i + 1] - ref);
    return a / 2.0;
}

double diameter(std::span<const Vec2> v) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) d2 = std::max(d2, (v[i] - v[j]).norm_sq());
    return std::sqrt(d2);
}

int orient(Vec2 a, Vec2 b, Vec2 c, double eps) {
    const double o = (b - a).cross(c - a);
    if (o > eps) return 1;
    if (o < -eps) return -1;
    return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p, double eps) {
    return std::min(a.x1, b.x1) - eps <= p.x1 && p.x1 <= std::max(a.x1, b.x1) + eps &&
           std::min(a.x2, b.x2) - eps <= p.x2 && p.x2 <= std::max(a.x2, b.x2) + eps;
}

bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps) {
    const int o1 = orient(a, b, c, eps), o2 = orient(a, b, d, eps);
    const int o3 = orient(c, d, a, eps), o4 = orient(c, d, b, eps);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c, eps)) return true;
    if (o2 == 0 && on_segment(a, b, d, eps)) return true;
    if (o3 == 0 && on_segment(c, d, a, eps)) return true;
    if (o4 == 0 && on_segment(c, d, b, eps)) return true;
    return false;
}

void require_simple(std::span<const Vec2> v) {
    const std::size_t n = v.size();
    const double scale = diameter(v);
    const double eps = 1e-13 * scale * scale;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % n];
        if ((b - a).norm() <= 1e-14 * scale)
            throw InvalidArgument("polygon has a repeated vertex");
        // Adjacent edges may not fold back onto each other.
        const Vec2 c = v[(i + 2) % n];
        if (orient(a, b, c, eps) == 0 && (b - a).dot(c - b) < 0.0)
            throw InvalidArgument("polygon has a degenerate spike");
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
            if (segments_touch(a, b, v[j], v[(j + 1) % n], eps))
                throw InvalidArgument("polygon is not simple");
        }
    }
}

double ellipse_perimeter(double s1, double s2) {
    const double a = std::max(s1, s2), b = std::min(s1, s2);
    const double k = std::sqrt(1.0 - (b / a) * (b / a));
    return 4.0 * a * boost::math::ellint_2(k);
}

GeometricMoments polygon_moments(std::span<const Vec2> v) {
    Vec2 mean;
    for (const Vec2& p : v) mean = mean + p;
    mean = (1.0 / static_cast<double>(v.size())) * mean;

    const ChainIntegrals local = chain_integrals(v, mean);
    if (!(std::abs(local.area) > 0.0)) throw InvalidArgument("polygon has zero area");

    GeometricMoments m;
    m.area = local.area;
    const Vec2 c_rel{local.sx / local.area, local.sy / local.area};
    m.centroid = mean + c_rel;
    m.moment_matrix(0, 0) = local.sxx - local.area * c_rel.x1 * c_rel.x1;
    m.moment_matrix(1, 1) = local.syy - local.area * c_rel.x2 * c_rel.x2;
    m.moment_matrix(0, 1) = m.moment_matrix(1, 0) = local.sxy - local.area * c_rel.x1 * c_rel.x2;
    m.inertia_centroid = m.moment_matrix.trace();

    const ChainIntegrals origin = chain_integrals(v, Vec2{});
    m.inertia_origin = origin.sxx + origin.syy;

    for (std::size_t i = 0; i < v.size(); ++i) m.perimeter += (v[(i + 1) % v.size()] - v[i]).norm();
    return m;
}

GeometricMoments ellipse_moments(const Ellipse& e) {
    GeometricMoments m;
    m.area = kPi * e.s1 * e.s2;
    m.centroid = e.center;
    const Eigen::Matrix2d R = LinearMap2::rotation_by(e.rotation).matrix();
    const Eigen::Matrix2d local =
        Eigen::Vector2d(kPi * e.s1 * e.s1 * e.s1 * e.s2 / 4.0, kPi * e.s1 * e.s2 * e.s2 * e.s2 / 4.0)
            .asDiagonal();
    m.moment_matrix = R * local * R.transpose();
    m.inertia_centroid = kPi * e.s1 * e.s2 * (e.s1 * e.s1 + e.s2 * e.s2) / 4.0;
    m.inertia_origin = m.inertia_centroid + m.area * e.center.norm_sq();
    m.perimeter = ellipse_perimeter(e.s1, e.s2);
    return m;
}

void require_frame_order(int N) {
    if (N < 3) throw InvalidArgument("tight-frame identity needs N >= 3");
}

void require_symmetric(const Domain& d, int min_order) {
    const int order = symmetry_order(d);
    if (!has_symmetry_at_least(order, min_order))
        throw PreconditionViolation("domain has rotational symmetry of order " +
                                    std::to_string(order) + ", need >= " +
                                    std::to_string(min_order));
}

}  // namespace

double Vec2::norm() const { return std::hypot(x1, x2); }

// ---- LinearMap2 ------------------------------------------------------------

LinearMap2 LinearMap2::rotation_by(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

double LinearMap2::hs_norm() const { return std::sqrt(hs_norm_sq()); }

bool LinearMap2::invertible() const {
    const double d = det();
    return std::isfinite(d) && std::abs(d) > 1e-14 * hs_norm_sq();
}

LinearMap2 LinearMap2::inverse() const {
    if (!invertible()) throw InvalidArgument("linear map is singular");
    const double d = det();
    return {a22() / d, -a12() / d, -a21() / d, a11() / d};
}

std::array<double, 2> LinearMap2::singular_values() const {
    // sigma1^2 + sigma2^2 = |T|^2, sigma1 sigma2 = |det T|
    const double s = hs_norm_sq();
    const double d = std::abs(det());
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * d * d));
    const double big = std::sqrt((s + disc) / 2.0);
    const double small = big > 0.0 ? d / big : 0.0;
    return {big, small};
}

bool LinearMap2::is_scaled_orthogonal(double rel_tol) const {
    // T^T T = r^2 I; comparing singular values directly loses half the digits
    const double c1 = a11() * a11() + a21() * a21(), c2 = a12() * a12() + a22() * a22();
    const double off = a11() * a12() + a21() * a22();
    const double scale = c1 + c2;
    return scale > 0.0 && std::abs(c1 - c2) <= rel_tol * scale && std::abs(off) <= rel_tol * scale;
}

Eigen::Matrix2d LinearMap2::matrix() const {
    Eigen::Matrix2d m;
    m << a11(), a12(), a21(), a22();
    return m;
}

// ---- shapes ----------------------------------------------------------------

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
    for (const Vec2& p : vertices_)
        if (!std::isfinite(p.x1) || !std::isfinite(p.x2))
            throw InvalidArgument("polygon vertex is not finite");
    const double a = signed_area(vertices_);
    const double scale = diameter(vertices_);
    if (!(std::abs(a) > 1e-14 * scale * scale)) throw InvalidArgument("polygon has zero area");
    if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());
    require_simple(vertices_);
}

Ellipse Ellipse::make(Vec2 center, double s1, double s2, double rotation) {
    if (!(std::isfinite(s1) && std::isfinite(s2) && s1 > 0.0 && s2 > 0.0))
        throw InvalidArgument("ellipse semi-axes must be finite and positive");
    if (!std::isfinite(center.x1) || !std::isfinite(center.x2) || !std::isfinite(rotation))
        throw InvalidArgument("ellipse parameters must be finite");
    return Ellipse{center, s1, s2, rotation};
}

Vec2 Ellipse::point_at(double t) const {
    const Vec2 local{s1 * std::cos(t), s2 * std::sin(t)};
    return center + LinearMap2::rotation_by(rotation)(local);
}

bool Ellipse::is_circle(double rel_tol) const {
    return std::abs(s1 - s2) <= rel_tol * std::max(s1, s2);
}

PiecewiseLinearMap PiecewiseLinearMap::make(double a, double b, double c_plus, double c_minus) {
    if (!(std::isfinite(a) && a != 0.0)) throw InvalidArgument("piecewise map needs a != 0");
    if (!(std::isfinite(b) && b > 0.0)) throw InvalidArgument("piecewise map needs b > 0");
    if (!std::isfinite(c_plus) || !std::isfinite(c_minus))
        throw InvalidArgument("piecewise map shears must be finite");
    return PiecewiseLinearMap{a, b, c_plus, c_minus};
}

Polygon PiecewiseLinearMap::image(const Polygon& p) const {
    std::vector<Vec2> out;
    const std::size_t n = p.size();
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 u = p[i], w = p[(i + 1) % n];
        out.push_back((*this)(u));
        if ((u.x2 > 0.0 && w.x2 < 0.0) || (u.x2 < 0.0 && w.x2 > 0.0)) {
            const double t = u.x2 / (u.x2 - w.x2);
            out.push_back((*this)(Vec2{u.x1 + t * (w.x1 - u.x1), 0.0}));
        }
    }
    return Polygon(std::move(out));
}

Polygon equilateral_triangle(double side) {
    const double r = side / std::sqrt(3.0);
    const double h = r / 2.0;
    return Polygon({{0.0, r}, {-side / 2.0, -h}, {side / 2.0, -h}});
}

Polygon rectangle(double l1, double l2) {
    return Polygon({{-l1 / 2, -l2 / 2}, {l1 / 2, -l2 / 2}, {l1 / 2, l2 / 2}, {-l1 / 2, l2 / 2}});
}

Polygon regular_polygon(int sides, double circumradius) {
    if (sides < 3) throw InvalidArgument("regular polygon needs at least 3 sides");
    std::vector<Vec2> v;
    for (int k = 0; k < sides; ++k) v.push_back(rotation(sides, k)(Vec2{circumradius, 0.0}));
    return Polygon(std::move(v));
}

Polygon isosceles_triangle(double aperture) {
    if (!(aperture > 0.0 && aperture < kPi)) throw InvalidArgument("aperture must lie in (0, pi)");
    const double s = std::sin(aperture / 2.0), c = std::cos(aperture / 2.0);
    return Polygon({{0.0, 0.0}, {-s, -c}, {s, -c}});
}

Polygon triangle_from_sides(double l1, double l2, double l3) {
    if (!(l1 > 0 && l2 > 0 && l3 > 0) || l1 + l2 <= l3 || l2 + l3 <= l1 || l1 + l3 <= l2)
        throw InvalidArgument("side lengths violate the triangle inequality");
    const double x = (l1 * l1 + l3 * l3 - l2 * l2) / (2.0 * l1);
    return Polygon({{0.0, 0.0}, {l1, 0.0}, {x, std::sqrt(std::max(0.0, l3 * l3 - x * x))}});
}

Ellipse disk(double radius) { return Ellipse::make({}, radius, radius, 0.0); }

Domain scaled(const Domain& d, double factor) { return apply_map(LinearMap2::diag(factor, factor), d); }

Domain translated(const Domain& d, Vec2 offset) {
    if (d.is_ellipse()) {
        Ellipse e = d.ellipse();
        e.center = e.center + offset;
        return e;
    }
    std::vector<Vec2> v(d.polygon().vertices().begin(), d.polygon().vertices().end());
    for (Vec2& p : v) p = p + offset;
    return Polygon(std::move(v));
}

// ---- operations ------------------------------------------------------------

LinearMap2 rotation(int N, int m) {
    if (N < 1) throw InvalidArgument("rotation order must be >= 1");
    const int k = ((m % N) + N) % N;
    if ((4 * k) % N == 0) {
        switch ((4 * k) / N) {
            case 0: return LinearMap2::identity();
            case 1: return {0.0, -1.0, 1.0, 0.0};
            case 2: return {-1.0, 0.0, 0.0, -1.0};
            default: return {0.0, 1.0, -1.0, 0.0};
        }
    }
    return LinearMap2::rotation_by(2.0 * kPi * k / N);
}

double frame_average(Vec2 x, Vec2 y, int N) {
    require_frame_order(N);
    double sum = 0.0;
    for (int m = 1; m <= N; ++m) {
        const double p = x.dot(rotation(N, m)(y));
        sum += p * p;
    }
    return sum / N;
}

double matrix_frame_average(Vec2 x, const Eigen::Matrix<double, 2, Eigen::Dynamic>& Y, int N) {
    require_frame_order(N);
    if (Y.cols() < 1) throw InvalidArgument("matrix needs at least one column");
    const Eigen::RowVector2d row(x.x1, x.x2);
    double sum = 0.0;
    for (int m = 1; m <= N; ++m) sum += (row * rotation(N, m).matrix() * Y).squaredNorm();
    return sum / N;
}

GeometricMoments moments(const Domain& d) {
    if (d.is_ellipse()) return ellipse_moments(d.ellipse());
    return polygon_moments(d.polygon().vertices());
}

double triangle_inertia_from_sides(double l1, double l2, double l3, double area) {
    if (!(l1 > 0 && l2 > 0 && l3 > 0) || l1 + l2 <= l3 * (1 + 1e-12) ||
        l2 + l3 <= l1 * (1 + 1e-12) || l1 + l3 <= l2 * (1 + 1e-12))
        throw InvalidArgument("side lengths violate the triangle inequality");
    const double s = (l1 + l2 + l3) / 2.0;
    const double heron = std::sqrt(s * (s - l1) * (s - l2) * (s - l3));
    if (!(std::abs(area - heron) <= 1e-9 * heron))
        throw InvalidArgument("area is inconsistent with the side lengths");
    return area / 36.0 * (l1 * l1 + l2 * l2 + l3 * l3);
}

double parallelogram_inertia_from_sides(double l1, double l2, double area) {
    if (!(l1 > 0 && l2 > 0)) throw InvalidArgument("side lengths must be positive");
    if (!(area > 0.0) || area > l1 * l2 * (1 + 1e-12))
        throw InvalidArgument("parallelogram area must lie in (0, l1*l2]");
    return area / 12.0 * (l1 * l1 + l2 * l2);
}

Domain apply_map(const LinearMap2& T, const Domain& d) {
    if (!T.invertible()) throw InvalidArgument("linear map is singular");
    if (d.is_polygon()) {
        std::vector<Vec2> v;
        v.reserve(d.polygon().size());
        for (const Vec2& p : d.polygon().vertices()) v.push_back(T(p));
        return Polygon(std::move(v));
    }
    const Ellipse& e = d.ellipse();
    const Eigen::Matrix2d R = LinearMap2::rotation_by(e.rotation).matrix();
    const Eigen::Matrix2d S =
        R * Eigen::Vector2d(e.s1 * e.s1, e.s2 * e.s2).asDiagonal() * R.transpose();
    const Eigen::Matrix2d Tm = T.matrix();
    const Eigen::Matrix2d image = Tm * S * Tm.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
    eig.computeDirect(image);
    // Eigen orders eigenvalues ascending; keep the larger axis first.
    const Eigen::Vector2d major = eig.eigenvectors().col(1);
    return Ellipse::make(T(e.center), std::sqrt(eig.eigenvalues()(1)),
                         std::sqrt(eig.eigenvalues()(0)), std::atan2(major(1), major(0)));
}

IdentityPair hs_inverse_identity_check(const LinearMap2& T) {
    const LinearMap2 inv = T.inverse();
    const double d = T.det();
    return {inv.hs_norm_sq(), T.hs_norm_sq() / (d * d)};
}

IdentityPair hs_ratio_check(const Domain& d, const LinearMap2& T) {
    require_symmetric(d, 3);
    const double lhs = 0.5 * T.inverse().hs_norm_sq();
    const GeometricMoments src = moments(d);
    const GeometricMoments img = moments(apply_map(T, d));
    const double ratio_src = src.inertia_centroid / std::pow(src.area, 3);
    const double ratio_img = img.inertia_centroid / std::pow(img.area, 3);
    return {lhs, ratio_img / ratio_src};
}

IdentityPair inverse_image_invariance_check(const Domain& d, const LinearMap2& T) {
    require_symmetric(d, 3);
    const GeometricMoments fwd = moments(apply_map(T, d));
    const GeometricMoments back = moments(apply_map(T.inverse(), d));
    return {fwd.inertia_centroid / (fwd.area * fwd.area),
            back.inertia_centroid / (back.area * back.area)};
}

int symmetry_order(const Domain& d) {
    if (d.is_ellipse()) return d.ellipse().is_circle() ? kInfiniteSymmetry : 2;

    const auto verts = d.polygon().vertices();
    const Vec2 c = moments(d).centroid;
    const double scale = diameter(verts);
    std::vector<Vec2> q;
    q.reserve(verts.size());
    for (const Vec2& p : verts) q.push_back((1.0 / scale) * (p - c));

    constexpr double tol = 1e-9;
    const auto maps_onto_itself = [&](int N) {
        const LinearMap2 U = rotation(N, 1);
        for (const Vec2& p : q) {
            const Vec2 r = U(p);
            const bool found = std::any_of(q.begin(), q.end(), [&](const Vec2& s) {
                return std::abs(r.x1 - s.x1) <= tol && std::abs(r.x2 - s.x2) <= tol;
            });
            if (!found) return false;
        }
        return true;
    };
    for (int N = 360; N >= 2; --N)
        if (maps_onto_itself(N)) return N;
    return 1;
}

IdentityPair quad_hs_combined_check(const PiecewiseLinearMap& P, const Domain& d) {
    if (!d.is_polygon()) throw Unsupported("piecewise-linear images are computed for polygons only");
    const int order = symmetry_order(d);
    if (order < 4 || order % 2 != 0)
        throw PreconditionViolation("need even rotational symmetry of order >= 4, got " +
                                    std::to_string(order));
    const GeometricMoments src = moments(d);
    const double scale = diameter(d.polygon().vertices());
    if (src.centroid.norm() > 1e-9 * scale)
        throw PreconditionViolation("domain must be centered at the origin");

    const double lhs = 0.25 * (P.plus().inverse().hs_norm_sq() + P.minus().inverse().hs_norm_sq());
    const GeometricMoments img = moments(P.image(d.polygon()));
    const double ratio_src = src.inertia_origin / std::pow(src.area, 3);
    const double ratio_img = img.inertia_origin / std::pow(img.area, 3);
    return {lhs, ratio_img / ratio_src};
}

// ---- text format -----------------------------------------------------------

Domain read_domain(std::istream& in) {
    std::vector<Vec2> vertices;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (line.compare(first, 7, "ellipse") == 0) {
            std::string tag;
            double cx, cy, s1, s2, theta;
            if (!(ls >> tag >> cx >> cy >> s1 >> s2 >> theta) || !vertices.empty())
                throw InvalidArgument("bad ellipse record on line " + std::to_string(lineno));
            std::string rest;
            while (std::getline(in, rest))
                if (rest.find_first_not_of(" \t\r") != std::string::npos)
                    throw InvalidArgument("trailing data after ellipse record");
            return Ellipse::make({cx, cy}, s1, s2, theta);
        }
        double x, y;
        std::string extra;
        if (!(ls >> x >> y) || (ls >> extra))
            throw InvalidArgument("bad vertex on line " + std::to_string(lineno));
        vertices.push_back({x, y});
    }
    return Polygon(std::move(vertices));
}

void write_domain(std::ostream& out, const Domain& d) {
    const auto old = out.precision(17);
    if (d.is_ellipse()) {
        const Ellipse& e = d.ellipse();
        out << "ellipse " << e.center.x1 << ' ' << e.center.x2 << ' ' << e.s1 << ' ' << e.s2
            << ' ' << e.rotation << '\n';
    } else {
        for (const Vec2& p : d.polygon().vertices()) out << p.x1 << ' ' << p.x2 << '\n';
    }
    out.precision(old);
}

}  // namespace isospec
