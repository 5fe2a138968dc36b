#include "isospec/spectra_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isospec/bessel.hpp"
#include "isospec/errors.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Relative accuracy of computed Bessel zeros (checked against Boost in tests).
constexpr double kBesselZeroError = 1e-14;

void require_count(int n) {
    if (n < 1) throw InvalidArgument("eigenvalue count must be >= 1");
}

Spectrum make_exact(std::vector<double> values, double rel_error) {
    Spectrum s;
    s.method = Method::exact;
    s.values = std::move(values);
    s.error_estimates.reserve(s.values.size());
    for (double v : s.values) s.error_estimates.push_back(rel_error * std::abs(v));
    return s;
}

// Smallest n values of form(j1, j2) over j1, j2 >= jmin, with multiplicity.
// `reach(Q)` bounds each index for form <= Q, so every value below the cutoff
// is enumerated before the cutoff grows.
template <class Form, class Reach>
std::vector<double> lattice_smallest(int n, int jmin, Form form, Reach reach, double cutoff) {
    while (true) {
        const auto [max1, max2] = reach(cutoff);
        std::vector<double> vals;
        for (int j1 = jmin; j1 <= max1; ++j1)
            for (int j2 = jmin; j2 <= max2; ++j2) {
                const double q = form(j1, j2);
                if (q <= cutoff) vals.push_back(q);
            }
        if (static_cast<int>(vals.size()) >= n) {
            std::partial_sort(vals.begin(), vals.begin() + n, vals.end());
            vals.resize(n);
            return vals;
        }
        cutoff *= 2.0;
    }
}

// Smallest n sums a_i + b_k. The first n entries of each list suffice.
std::vector<double> tensor_smallest(const std::vector<double>& a, const std::vector<double>& b, int n) {
    std::vector<double> sums;
    sums.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) sums.push_back(x + y);
    std::partial_sort(sums.begin(), sums.begin() + n, sums.end());
    sums.resize(n);
    return sums;
}

double interval_robin_root(double l, double sigma, int j) {
    // (k^2 - sigma^2) sin(kl) - 2 sigma k cos(kl) has exactly one root in
    // (j pi / l, (j+1) pi / l); for j = 0 divide out the trivial root at 0.
    const auto g = [l, sigma, j](double k) {
        const double v = (k * k - sigma * sigma) * std::sin(k * l) - 2.0 * sigma * k * std::cos(k * l);
        return j == 0 ? v / k : v;
    };
    double lo = j * kPi / l, hi = (j + 1) * kPi / l;
    if (j == 0) lo = std::min(1e-300, hi);
    double glo = j == 0 ? -(sigma * sigma * l + 2.0 * sigma) : g(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

BoundaryCondition BoundaryCondition::robin(double sigma) {
    if (!(std::isfinite(sigma) && sigma >= 0.0))
        throw InvalidArgument("Robin parameter must be finite and >= 0");
    return BoundaryCondition(Kind::robin, sigma);
}

std::string_view to_string(BoundaryCondition::Kind k) {
    switch (k) {
        case BoundaryCondition::Kind::dirichlet: return "dirichlet";
        case BoundaryCondition::Kind::neumann: return "neumann";
        case BoundaryCondition::Kind::robin: return "robin";
    }
    return "?";
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::fem: return "fem";
        case Method::fd: return "fd";
    }
    return "?";
}

double Spectrum::sum(std::size_t n) const {
    if (n > values.size()) throw InvalidArgument("spectrum has fewer values than requested");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
}

double Spectrum::error_sum(std::size_t n) const {
    if (n > error_estimates.size()) throw InvalidArgument("spectrum has fewer values than requested");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += error_estimates[i];
    return s;
}

Spectrum Spectrum::scaled(double factor) const {
    Spectrum s = *this;
    for (double& v : s.values) v *= factor;
    for (double& e : s.error_estimates) e *= std::abs(factor);
    return s;
}

Spectrum equilateral_spectrum(double side, BoundaryCondition bc, int n) {
    require_count(n);
    if (!(side > 0.0)) throw InvalidArgument("side must be positive");
    if (bc.has_boundary_term())
        throw Unsupported("no closed-form Robin spectrum for the equilateral triangle");
    const int jmin = bc.acts_as_neumann() ? 0 : 1;
    const auto form = [](int j1, int j2) {
        return static_cast<double>(j1 * j1 + j1 * j2 + j2 * j2);
    };
    // j1^2 + j1 j2 + j2^2 >= max(j1, j2)^2 for nonnegative indices.
    const auto reach = [](double Q) {
        const int r = static_cast<int>(std::floor(std::sqrt(Q)));
        return std::pair{r, r};
    };
    auto q = lattice_smallest(n, jmin, form, reach, std::max(3.0, static_cast<double>(n)));
    const double scale = 16.0 * kPi * kPi / (9.0 * side * side);
    for (double& v : q) v *= scale;
    return make_exact(std::move(q), 4 * kEps);
}

Spectrum rectangle_spectrum(double l1, double l2, BoundaryCondition bc, int n) {
    require_count(n);
    if (!(l1 > 0.0 && l2 > 0.0)) throw InvalidArgument("side lengths must be positive");
    if (bc.has_boundary_term()) {
        auto vals = tensor_smallest(robin_interval_eigs(l1, bc.sigma(), n),
                                    robin_interval_eigs(l2, bc.sigma(), n), n);
        return make_exact(std::move(vals), 1e-12);
    }
    const int jmin = bc.acts_as_neumann() ? 0 : 1;
    const auto form = [l1, l2](int j1, int j2) {
        const double a = j1 / l1, b = j2 / l2;
        return a * a + b * b;
    };
    const auto reach = [l1, l2](double Q) {
        return std::pair{static_cast<int>(std::floor(l1 * std::sqrt(Q))),
                         static_cast<int>(std::floor(l2 * std::sqrt(Q)))};
    };
    auto q = lattice_smallest(n, jmin, form, reach, 2.0 * form(1, 1) * n);
    for (double& v : q) v *= kPi * kPi;
    return make_exact(std::move(q), 4 * kEps);
}

Spectrum disk_spectrum(double radius, BoundaryCondition bc, int n) {
    require_count(n);
    if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
    if (bc.has_boundary_term()) throw Unsupported("no closed-form Robin spectrum for the disk");
    const bool derivative = bc.acts_as_neumann();

    // Zeros of J_m and J_m' lie above m (m >= 1), so orders beyond the
    // cutoff contribute nothing below it.
    double cutoff = 4.0 + std::sqrt(4.0 * n);
    while (true) {
        std::vector<double> zeros;  // with multiplicity
        if (derivative) zeros.push_back(0.0);
        for (int m = 0; m <= static_cast<int>(cutoff) + 1; ++m) {
            for (double z : bessel_zeros_below(m, cutoff, derivative)) {
                zeros.push_back(z);
                if (m > 0) zeros.push_back(z);
            }
        }
        if (static_cast<int>(zeros.size()) >= n) {
            std::sort(zeros.begin(), zeros.end());
            zeros.resize(n);
            Spectrum s;
            s.method = Method::exact;
            for (double z : zeros) {
                s.values.push_back(z * z / (radius * radius));
                s.error_estimates.push_back((2.0 * kBesselZeroError + 4 * kEps) * z * z / (radius * radius));
            }
            return s;
        }
        cutoff *= 1.5;
    }
}

std::vector<double> robin_interval_eigs(double l, double sigma, int count) {
    require_count(count);
    if (!(l > 0.0)) throw InvalidArgument("interval length must be positive");
    if (!(std::isfinite(sigma) && sigma >= 0.0)) throw InvalidArgument("Robin parameter must be >= 0");
    std::vector<double> out;
    out.reserve(count);
    for (int j = 0; j < count; ++j) {
        if (sigma == 0.0) {
            const double k = j * kPi / l;
            out.push_back(k * k);
        } else {
            const double k = interval_robin_root(l, sigma, j);
            out.push_back(k * k);
        }
    }
    return out;
}

std::optional<ModelShape> recognize_model_shape(const Domain& d) {
    constexpr double tol = 1e-10;
    if (d.is_ellipse()) {
        const Ellipse& e = d.ellipse();
        if (e.is_circle(tol)) return ModelShape{ModelShape::Kind::disk, 0.5 * (e.s1 + e.s2), 0.0};
        return std::nullopt;
    }
    const auto v = d.polygon().vertices();
    const std::size_t n = v.size();
    std::vector<Vec2> edges;
    for (std::size_t i = 0; i < n; ++i) edges.push_back(v[(i + 1) % n] - v[i]);

    if (n == 3) {
        const double a = edges[0].norm(), b = edges[1].norm(), c = edges[2].norm();
        const double mx = std::max({a, b, c}), mn = std::min({a, b, c});
        if (mx - mn <= tol * mx) return ModelShape{ModelShape::Kind::equilateral, (a + b + c) / 3.0, 0.0};
    }
    if (n == 4) {
        bool right = true;
        for (std::size_t i = 0; i < 4; ++i) {
            const Vec2 e = edges[i], f = edges[(i + 1) % 4];
            if (std::abs(e.dot(f)) > tol * e.norm() * f.norm()) right = false;
        }
        if (right) {
            const double l1 = 0.5 * (edges[0].norm() + edges[2].norm());
            const double l2 = 0.5 * (edges[1].norm() + edges[3].norm());
            return ModelShape{ModelShape::Kind::rectangle, l1, l2};
        }
    }
    return std::nullopt;
}

Spectrum exact_spectrum(const Domain& d, BoundaryCondition bc, int n) {
    const auto shape = recognize_model_shape(d);
    if (!shape) throw Unsupported("domain is not an equilateral triangle, rectangle or disk");
    switch (shape->kind) {
        case ModelShape::Kind::equilateral: return equilateral_spectrum(shape->a, bc, n);
        case ModelShape::Kind::rectangle: return rectangle_spectrum(shape->a, shape->b, bc, n);
        case ModelShape::Kind::disk: return disk_spectrum(shape->a, bc, n);
    }
    throw Unsupported("unknown model shape");
}

}  // namespace isospec
