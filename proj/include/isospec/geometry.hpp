#pragma once

// Exact planar geometry: linear maps, polygons and ellipses, area and
// second moments, and the rotational-symmetry identities that connect
// Hilbert-Schmidt norms with moments of inertia.

#include <array>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace isospec {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
    friend bool operator==(Vec2, Vec2) = default;

    double dot(Vec2 o) const { return x1 * o.x1 + x2 * o.x2; }
    double cross(Vec2 o) const { return x1 * o.x2 - x2 * o.x1; }
    double norm_sq() const { return dot(*this); }
    double norm() const;
};

/// Real 2x2 matrix acting on column vectors.
class LinearMap2 {
public:
    constexpr LinearMap2() = default;
    constexpr LinearMap2(double a11, double a12, double a21, double a22)
        : a_{a11, a12, a21, a22} {}

    static constexpr LinearMap2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr LinearMap2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
    static LinearMap2 rotation_by(double angle);

    constexpr double a11() const { return a_[0]; }
    constexpr double a12() const { return a_[1]; }
    constexpr double a21() const { return a_[2]; }
    constexpr double a22() const { return a_[3]; }

    constexpr double det() const { return a_[0] * a_[3] - a_[1] * a_[2]; }
    constexpr double hs_norm_sq() const {
        return a_[0] * a_[0] + a_[1] * a_[1] + a_[2] * a_[2] + a_[3] * a_[3];
    }
    double hs_norm() const;
    bool invertible() const;

    /// Throws InvalidArgument for singular maps.
    LinearMap2 inverse() const;
    constexpr LinearMap2 transpose() const { return {a_[0], a_[2], a_[1], a_[3]}; }

    /// Singular values, largest first.
    std::array<double, 2> singular_values() const;

    /// True when the map is r * (orthogonal) for some r > 0.
    bool is_scaled_orthogonal(double rel_tol = 1e-12) const;

    constexpr Vec2 operator()(Vec2 v) const {
        return {a_[0] * v.x1 + a_[1] * v.x2, a_[2] * v.x1 + a_[3] * v.x2};
    }
    friend constexpr LinearMap2 operator*(const LinearMap2& p, const LinearMap2& q) {
        return {p.a11() * q.a11() + p.a12() * q.a21(), p.a11() * q.a12() + p.a12() * q.a22(),
                p.a21() * q.a11() + p.a22() * q.a21(), p.a21() * q.a12() + p.a22() * q.a22()};
    }
    friend constexpr LinearMap2 operator*(double s, const LinearMap2& p) {
        return {s * p.a11(), s * p.a12(), s * p.a21(), s * p.a22()};
    }
    friend bool operator==(const LinearMap2&, const LinearMap2&) = default;

    Eigen::Matrix2d matrix() const;

private:
    std::array<double, 4> a_{1.0, 0.0, 0.0, 1.0};
};

/// Simple polygon, vertices stored counterclockwise. Clockwise input is
/// reversed on construction.
class Polygon {
public:
    /// Throws InvalidArgument for fewer than 3 vertices, non-finite
    /// coordinates, zero area or self-intersection.
    explicit Polygon(std::vector<Vec2> vertices);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices_[i]; }

private:
    std::vector<Vec2> vertices_;
};

struct Ellipse {
    Vec2 center;
    double s1 = 1.0;  // semi-axis along the rotated x1 direction
    double s2 = 1.0;
    double rotation = 0.0;  // radians

    /// Throws InvalidArgument unless both semi-axes are finite and > 0.
    static Ellipse make(Vec2 center, double s1, double s2, double rotation = 0.0);

    Vec2 point_at(double t) const;
    bool is_circle(double rel_tol = 1e-12) const;
};

/// The domain whose spectrum is studied.
class Domain {
public:
    Domain(Polygon p) : shape_(std::move(p)) {}
    Domain(Ellipse e) : shape_(e) {}

    bool is_polygon() const { return std::holds_alternative<Polygon>(shape_); }
    bool is_ellipse() const { return std::holds_alternative<Ellipse>(shape_); }
    const Polygon& polygon() const { return std::get<Polygon>(shape_); }
    const Ellipse& ellipse() const { return std::get<Ellipse>(shape_); }
    const std::variant<Polygon, Ellipse>& shape() const { return shape_; }

private:
    std::variant<Polygon, Ellipse> shape_;
};

struct GeometricMoments {
    double area = 0.0;
    Vec2 centroid;
    Eigen::Matrix2d moment_matrix = Eigen::Matrix2d::Zero();  // about the centroid
    double inertia_centroid = 0.0;
    double inertia_origin = 0.0;
    double perimeter = 0.0;
};

/// T(x) = T+ x on the closed upper half plane and T- x on the lower one,
/// with T+- = [[a, c+-], [0, b]].
struct PiecewiseLinearMap {
    double a = 1.0;
    double b = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;

    /// Throws InvalidArgument unless a != 0 and b > 0.
    static PiecewiseLinearMap make(double a, double b, double c_plus, double c_minus);

    LinearMap2 plus() const { return {a, c_plus, 0.0, b}; }
    LinearMap2 minus() const { return {a, c_minus, 0.0, b}; }
    Vec2 operator()(Vec2 v) const { return v.x2 >= 0.0 ? plus()(v) : minus()(v); }

    /// Exact image of a polygon; edges crossing the x1 axis get a vertex
    /// at the crossing so the result is again a polygon.
    Polygon image(const Polygon& p) const;
};

struct IdentityPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

// ---- construction helpers ------------------------------------------------

Polygon equilateral_triangle(double side = 1.0);  // centroid at the origin
Polygon rectangle(double l1, double l2);          // centroid at the origin
Polygon regular_polygon(int sides, double circumradius = 1.0);
/// Isosceles triangle with apex angle `aperture` and unit legs.
Polygon isosceles_triangle(double aperture);
Polygon triangle_from_sides(double l1, double l2, double l3);
Ellipse disk(double radius = 1.0);

Domain scaled(const Domain& d, double factor);
Domain translated(const Domain& d, Vec2 offset);

// ---- operations ----------------------------------------------------------

/// Rotation by 2*pi*m/N.
LinearMap2 rotation(int N, int m);

/// (1/N) sum_m |x . (U_m y)|^2 over the N rotations U_m; N >= 3.
double frame_average(Vec2 x, Vec2 y, int N);

/// (1/N) sum_m |x U_m Y|^2 for a row vector x and a 2xK matrix Y; N >= 3.
double matrix_frame_average(Vec2 x, const Eigen::Matrix<double, 2, Eigen::Dynamic>& Y, int N);

GeometricMoments moments(const Domain& d);

/// I = (A/36)(l1^2 + l2^2 + l3^2).
double triangle_inertia_from_sides(double l1, double l2, double l3, double area);

/// I = (A/12)(l1^2 + l2^2) for a parallelogram with adjacent sides l1, l2.
double parallelogram_inertia_from_sides(double l1, double l2, double area);

Domain apply_map(const LinearMap2& T, const Domain& d);

/// (|T^-1|^2, |T|^2 / det(T)^2).
IdentityPair hs_inverse_identity_check(const LinearMap2& T);

/// (|T^-1|^2 / 2, (I/A^3)(TD) / (I/A^3)(D)) for D with symmetry order >= 3.
IdentityPair hs_ratio_check(const Domain& d, const LinearMap2& T);

/// ((I/A^2)(TD), (I/A^2)(T^-1 D)) for D with symmetry order >= 3.
IdentityPair inverse_image_invariance_check(const Domain& d, const LinearMap2& T);

/// Sentinel returned by symmetry_order() for disks.
inline constexpr int kInfiniteSymmetry = 0;

/// Largest N <= 360 such that rotation by 2*pi/N about the centroid maps the
/// domain onto itself; kInfiniteSymmetry for disks.
int symmetry_order(const Domain& d);

/// True when `order` (as returned by symmetry_order) is at least `min_order`.
constexpr bool has_symmetry_at_least(int order, int min_order) {
    return order == kInfiniteSymmetry || order >= min_order;
}

/// ((|T+^-1|^2 + |T-^-1|^2) / 4, (I0/A^3)(TD) / (I0/A^3)(D)) for a polygon
/// centered at the origin with even symmetry order >= 4.
IdentityPair quad_hs_combined_check(const PiecewiseLinearMap& P, const Domain& d);

// ---- text format ---------------------------------------------------------

/// Reads either "x y" vertex lines or a single "ellipse cx cy s1 s2 theta"
/// line. Blank lines and lines starting with '#' are skipped.
Domain read_domain(std::istream& in);
void write_domain(std::ostream& out, const Domain& d);

}  // namespace isospec
