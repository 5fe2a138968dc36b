#include "isospec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExactRelTol = 1e-10;

// One side of an inequality: a normalized sum with its error budget.
struct Side {
    double value = 0.0;
    double error = 0.0;
    bool exact = false;
};

Side side_of(const Spectrum& s, int n, double factor) {
    return {s.sum(n) * factor, s.error_sum(n) * std::abs(factor), s.method == Method::exact};
}

double combined_tolerance(const Side& a, const Side& b) {
    if (a.exact && b.exact) return kExactRelTol * std::max(std::abs(a.value), std::abs(b.value));
    const auto budget = [](const Side& s) { return s.exact ? kExactRelTol * std::abs(s.value) : s.error; };
    return budget(a) + budget(b);
}

BoundReport report_of(const Side& lhs, const Side& rhs, ReportInputs inputs) {
    return make_report(lhs.value, rhs.value, combined_tolerance(lhs, rhs), std::move(inputs));
}

void require_n(int n) {
    if (n < 1) throw InvalidArgument("eigenvalue count must be >= 1");
}

void require_symmetric(const Domain& d) {
    if (!has_symmetry_at_least(symmetry_order(d), 3))
        throw PreconditionViolation("domain needs rotational symmetry of order >= 3");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Spectrum compute_spectrum(const Domain& d, BoundaryCondition bc, int n, Engine engine, const FemOptions& fem) {
    require_n(n);
    switch (engine) {
        case Engine::exact: return exact_spectrum(d, bc, n);
        case Engine::fem: return spectrum_fem(d, bc, n, fem);
        case Engine::automatic: break;
    }
    if (const auto shape = recognize_model_shape(d)) {
        const bool closed_form = shape->kind == ModelShape::Kind::rectangle || !bc.has_boundary_term();
        if (closed_form) return exact_spectrum(d, bc, n);
    }
    return spectrum_fem(d, bc, n, fem);
}

double scale_factor(const Domain& d) {
    const GeometricMoments m = moments(d);
    return m.area * m.area * m.area / m.inertia_centroid;
}

double normalized_sum(const Domain& d, BoundaryCondition bc, int n, Engine engine, const FemOptions& fem) {
    return compute_spectrum(d, bc, n, engine, fem).sum(n) * scale_factor(d);
}

BoundReport make_report(double lhs, double rhs, double tolerance, ReportInputs inputs) {
    if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
    BoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tolerance = tolerance;
    r.holds = r.slack >= -tolerance;
    r.inputs = std::move(inputs);
    return r;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["tolerance"] = r.tolerance;
    j["holds"] = r.holds;
    j["inputs"] = {{"domain", r.inputs.domain}, {"map", r.inputs.map}, {"bc", r.inputs.bc}, {"n", r.inputs.n}};
    return j;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "param,value,method,error\n";
    for (const SweepRow& r : rows)
        out << fmt(r.param) << ',' << fmt(r.value) << ',' << to_string(r.method) << ',' << fmt(r.error) << '\n';
}

std::string describe(const Domain& d) {
    std::ostringstream os;
    os << std::setprecision(12);
    if (d.is_ellipse()) {
        const Ellipse& e = d.ellipse();
        os << "ellipse(" << e.center.x1 << ',' << e.center.x2 << ',' << e.s1 << ',' << e.s2 << ',' << e.rotation
           << ')';
        return os.str();
    }
    os << "polygon[";
    bool first = true;
    for (const Vec2& v : d.polygon().vertices()) {
        os << (first ? "" : ";") << v.x1 << ',' << v.x2;
        first = false;
    }
    os << ']';
    return os.str();
}

std::string describe(const LinearMap2& T) {
    return "[" + fmt(T.a11()) + "," + fmt(T.a12()) + ";" + fmt(T.a21()) + "," + fmt(T.a22()) + "]";
}

std::string describe(BoundaryCondition bc) {
    std::string s(to_string(bc.kind()));
    if (bc.kind() == BoundaryCondition::Kind::robin) s += "(" + fmt(bc.sigma()) + ")";
    return s;
}

std::vector<BoundReport> verify_linear_map_bounds(const Domain& d, const LinearMap2& T, BoundaryCondition bc,
                                                  int n_max, const FemOptions& fem) {
    require_n(n_max);
    if (bc.has_boundary_term()) throw InvalidArgument("Robin conditions need the rescaled Robin check");
    require_symmetric(d);
    const double factor = 0.5 * T.inverse().hs_norm_sq();

    const Spectrum sd = compute_spectrum(d, bc, n_max, Engine::automatic, fem);
    const Spectrum std_ = compute_spectrum(apply_map(T, d), bc, n_max, Engine::automatic, fem);

    std::vector<BoundReport> out;
    for (int n = 1; n <= n_max; ++n)
        out.push_back(report_of(side_of(std_, n, 1.0), side_of(sd, n, factor),
                                {describe(d), describe(T), describe(bc), n}));
    return out;
}

BoundReport verify_linear_map_bound(const Domain& d, const LinearMap2& T, BoundaryCondition bc, int n,
                                    const FemOptions& fem) {
    return verify_linear_map_bounds(d, T, bc, n, fem).back();
}

std::vector<BoundReport> verify_robin_bounds(const Domain& d, const LinearMap2& T, double sigma, int n_max,
                                             const FemOptions& fem) {
    require_n(n_max);
    require_symmetric(d);
    const BoundaryCondition bc = BoundaryCondition::robin(sigma);
    const BoundaryCondition bc_t = BoundaryCondition::robin(sigma * T.inverse().hs_norm() / std::sqrt(2.0));
    const Domain td = apply_map(T, d);

    const Spectrum sd = compute_spectrum(d, bc, n_max, Engine::automatic, fem);
    const Spectrum std_ = compute_spectrum(td, bc_t, n_max, Engine::automatic, fem);
    const double fd = scale_factor(d), ftd = scale_factor(td);

    std::vector<BoundReport> out;
    for (int n = 1; n <= n_max; ++n)
        out.push_back(report_of(side_of(std_, n, ftd), side_of(sd, n, fd),
                                {describe(d), describe(T), describe(bc), n}));
    return out;
}

BoundReport verify_robin_bound(const Domain& d, const LinearMap2& T, double sigma, int n, const FemOptions& fem) {
    return verify_robin_bounds(d, T, sigma, n, fem).back();
}

RobinCorollary verify_robin_corollary(std::span<const Polygon> triangles, double sigma, int n,
                                      const FemOptions& fem) {
    require_n(n);
    const BoundaryCondition bc = BoundaryCondition::robin(sigma);
    RobinCorollary out;
    if (triangles.empty()) return out;

    const double target_area = moments(Domain(triangles.front())).area;
    std::vector<bool> equilateral;
    for (const Polygon& t : triangles) {
        if (t.size() != 3) throw InvalidArgument("corollary inputs must be triangles");
        const Domain d = scaled(Domain(t), std::sqrt(target_area / moments(Domain(t)).area));
        const Side s = side_of(compute_spectrum(d, bc, n, Engine::automatic, fem), n, scale_factor(d));
        out.entries.push_back({s.value, s.exact ? kExactRelTol * std::abs(s.value) : s.error, false});
        const auto shape = recognize_model_shape(d);
        equilateral.push_back(shape && shape->kind == ModelShape::Kind::equilateral);
    }

    const auto best = std::max_element(out.entries.begin(), out.entries.end(),
                                       [](const auto& a, const auto& b) { return a.value < b.value; });
    for (auto& e : out.entries) e.is_max = e.value >= best->value - (e.error + best->error);
    for (std::size_t i = 0; i < equilateral.size(); ++i) {
        if (!equilateral[i]) continue;
        out.equilateral_maximal = out.equilateral_maximal.value_or(true) && out.entries[i].is_max;
    }
    return out;
}

GridSpec default_bound_grid(const PotentialSpec& W, double h, const LinearMap2& T, int n, int points_per_side) {
    const TransformedProblem tp = transformed_problem(W, h, T);
    const GridSpec a = default_grid(W, h, n, points_per_side);
    const GridSpec b = default_grid(tp.potential, tp.h, n, points_per_side);
    return a.half_width >= b.half_width ? a : b;
}

std::vector<BoundReport> verify_schrodinger_bounds(const PotentialSpec& W, double h, const LinearMap2& T,
                                                   int n_max, const GridSpec& grid) {
    require_n(n_max);
    if (!has_symmetry_at_least(W.symmetry_order(), 3))
        throw PreconditionViolation("potential needs rotational symmetry of order >= 3");
    const TransformedProblem tp = transformed_problem(W, h, T);
    const Spectrum lhs = schrodinger_spectrum(tp.potential, tp.h, n_max, grid);
    const Spectrum rhs = schrodinger_spectrum(W, h, n_max, grid);

    std::vector<BoundReport> out;
    for (int n = 1; n <= n_max; ++n)
        out.push_back(report_of(side_of(lhs, n, 1.0), side_of(rhs, n, 1.0),
                                {W.describe() + ", h=" + fmt(h), describe(T), "whole-plane", n}));
    return out;
}

BoundReport verify_schrodinger_bound(const PotentialSpec& W, double h, const LinearMap2& T, int n,
                                     const GridSpec& grid) {
    return verify_schrodinger_bounds(W, h, T, n, grid).back();
}

Polygon quad_reference_square() { return Polygon({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}); }

namespace {

double origin_scale_factor(const Domain& d) {
    const GeometricMoments m = moments(d);
    return m.area * m.area * m.area / m.inertia_origin;
}

std::string describe(const PiecewiseLinearMap& P) {
    return "piecewise[a=" + fmt(P.a) + ",b=" + fmt(P.b) + ",c+=" + fmt(P.c_plus) + ",c-=" + fmt(P.c_minus) + "]";
}

void require_laplace_bc(BoundaryCondition bc) {
    if (bc.has_boundary_term()) throw InvalidArgument("quadrilateral bound needs Dirichlet or Neumann conditions");
}

}  // namespace

std::vector<BoundReport> verify_quad_bounds(const PiecewiseLinearMap& P, BoundaryCondition bc, int n_max,
                                            const FemOptions& fem) {
    require_n(n_max);
    require_laplace_bc(bc);
    const Domain d(quad_reference_square());
    const Domain e(P.image(quad_reference_square()));
    const Spectrum sd = compute_spectrum(d, bc, n_max, Engine::automatic, fem);
    const Spectrum se = compute_spectrum(e, bc, n_max, Engine::automatic, fem);
    const double fd = origin_scale_factor(d), fe = origin_scale_factor(e);

    std::vector<BoundReport> out;
    for (int n = 1; n <= n_max; ++n)
        out.push_back(report_of(side_of(se, n, fe), side_of(sd, n, fd),
                                {describe(d), describe(P), describe(bc), n}));
    return out;
}

BoundReport verify_quad_bound(const PiecewiseLinearMap& P, BoundaryCondition bc, int n, const FemOptions& fem) {
    return verify_quad_bounds(P, bc, n, fem).back();
}

std::vector<SweepRow> scan_quad_centroid_variant(std::span<const PiecewiseLinearMap> maps, BoundaryCondition bc,
                                                 int n, const FemOptions& fem) {
    require_n(n);
    require_laplace_bc(bc);
    const Domain d(quad_reference_square());
    const Side rhs = side_of(compute_spectrum(d, bc, n, Engine::automatic, fem), n, scale_factor(d));
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const Domain e(maps[i].image(quad_reference_square()));
        const Spectrum se = compute_spectrum(e, bc, n, Engine::automatic, fem);
        const Side lhs = side_of(se, n, scale_factor(e));
        const double ratio = lhs.value / rhs.value;
        const double err = std::abs(ratio) * (lhs.error / std::abs(lhs.value) + rhs.error / std::abs(rhs.value));
        rows.push_back({static_cast<double>(i), ratio, se.method, err});
    }
    return rows;
}

std::vector<SweepRow> sweep_isosceles(int n, std::span<const double> apertures, BoundaryCondition bc,
                                      const FemOptions& fem) {
    require_n(n);
    std::vector<Polygon> triangles;
    for (double a : apertures) triangles.push_back(isosceles_triangle(a));

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        const Domain d(triangles[i]);
        const Side s = side_of(compute_spectrum(d, bc, n, Engine::fem, fem), n, scale_factor(d));
        rows.push_back({apertures[i], s.value, Method::fem, s.error});
    }
    return rows;
}

DiskVsSquare disk_vs_square(int n_max) {
    require_n(n_max);
    const Domain square(rectangle(1.0, 1.0));
    const Domain unit_disk(disk(1.0));
    const Spectrum ss = rectangle_spectrum(1.0, 1.0, BoundaryCondition::dirichlet(), n_max);
    const Spectrum sd = disk_spectrum(1.0, BoundaryCondition::dirichlet(), n_max);
    const double fs = scale_factor(square), fd = scale_factor(unit_disk);

    DiskVsSquare out;
    out.min_margin = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        const double vs = ss.sum(n) * fs, vd = sd.sum(n) * fd;
        const double margin = std::abs(vs - vd);
        out.min_margin = std::min(out.min_margin, margin);
        out.error_budget = std::max(out.error_budget, sd.error_sum(n) * fd + ss.error_sum(n) * fs);
        if (margin <= kExactRelTol * std::max(vs, vd))
            out.ties.push_back(n);
        else if (vs > vd)
            out.square_larger.push_back(n);
    }
    if (!(out.min_margin > 1e6 * out.error_budget)) {
        std::ostringstream msg;
        msg << "disk/square margin " << out.min_margin << " is not resolved by the Bessel error budget "
            << out.error_budget;
        throw SolverFailure(msg.str());
    }
    return out;
}

std::vector<SweepRow> rectangle_sum_family(int n, std::span<const double> aspect_ratios) {
    require_n(n);
    std::vector<SweepRow> rows;
    for (double l : aspect_ratios) {
        if (!(l >= 1.0 && std::isfinite(l))) throw InvalidArgument("aspect ratios must be finite and >= 1");
        const Spectrum s = rectangle_spectrum(l, 1.0, BoundaryCondition::dirichlet(), n);
        const Side v = side_of(s, n, scale_factor(Domain(rectangle(l, 1.0))));
        rows.push_back({l, v.value, Method::exact, v.error});
    }
    return rows;
}

KroegerWeyl kroeger_weyl_check(KroegerShape shape, int n_max) {
    require_n(n_max);
    const BoundaryCondition bc = BoundaryCondition::neumann();
    Spectrum s;
    double area = 0.0;
    switch (shape) {
        case KroegerShape::square:
            s = rectangle_spectrum(1.0, 1.0, bc, n_max);
            area = 1.0;
            break;
        case KroegerShape::disk:
            s = disk_spectrum(1.0, bc, n_max);
            area = kPi;
            break;
        case KroegerShape::equilateral:
            s = equilateral_spectrum(1.0, bc, n_max);
            area = std::sqrt(3.0) / 4.0;
            break;
    }
    KroegerWeyl out;
    for (int n = 1; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        const double k = s.sum(n) * area / (nn * nn);
        const double ke = s.error_sum(n) * area / (nn * nn);
        out.kroeger.push_back({nn, k, Method::exact, ke});
        out.weyl.push_back({nn, s.values[n - 1] * area / (4.0 * kPi * nn), Method::exact,
                            s.error_estimates[n - 1] * area / (4.0 * kPi * nn)});
        if (k > 2.0 * kPi + ke) out.bound_holds = false;
    }
    return out;
}

ConjectureScan conjecture_scan_c1(std::span<const Polygon> polygons, const FemOptions& fem,
                                  std::span<const double> params) {
    if (!params.empty() && params.size() != polygons.size())
        throw InvalidArgument("one parameter per polygon expected");
    const double lower = 4.5 * kPi * kPi, upper = 12.0 * kPi * kPi;
    ConjectureScan out;
    for (std::size_t i = 0; i < polygons.size(); ++i) {
        const Domain d(polygons[i]);
        const Spectrum s = compute_spectrum(d, BoundaryCondition::dirichlet(), 1, Engine::automatic, fem);
        const Side v = side_of(s, 1, scale_factor(d));
        const double tol = v.exact ? kExactRelTol * std::abs(v.value) : v.error;
        out.rows.push_back({params.empty() ? static_cast<double>(i) : params[i], v.value, s.method, tol});
        out.within_bounds.push_back(v.value > lower - tol && v.value <= upper + tol);
    }
    return out;
}

std::vector<LinearMap2> random_invertible_maps(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LinearMap2> out;
    while (static_cast<int>(out.size()) < count) {
        double a[4];
        for (double& x : a) x = -2.0 + 4.0 * uniform01(rng);
        const LinearMap2 T(a[0], a[1], a[2], a[3]);
        if (std::abs(T.det()) >= 0.1) out.push_back(T);
    }
    return out;
}

std::vector<LinearMap2> random_scaled_orthogonal_maps(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LinearMap2> out;
    for (int i = 0; i < count; ++i) {
        const double r = 0.5 + 1.5 * uniform01(rng);
        const double theta = 2.0 * kPi * uniform01(rng);
        const bool reflect = uniform01(rng) < 0.5;
        LinearMap2 U = LinearMap2::rotation_by(theta);
        if (reflect) U = U * LinearMap2::diag(1.0, -1.0);
        out.push_back(r * U);
    }
    return out;
}

}  // namespace isospec
