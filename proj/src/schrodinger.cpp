#include "isospec/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isospec/errors.hpp"
#include "isospec/fem.hpp"

namespace isospec {

namespace {

double min_on_box_edge(const PotentialSpec& W, double L, int samples) {
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double t = -L + 2.0 * L * k / (samples - 1);
        lo = std::min({lo, W({t, -L}), W({t, L}), W({-L, t}), W({L, t})});
    }
    return lo;
}

std::vector<double> solve_on_grid(const PotentialSpec& W, double h, int n, double L, int points) {
    const int m = points - 2;  // interior points per side
    const double s = 2.0 * L / (points - 1);
    const double c = h / (s * s);
    const auto idx = [m](int i, int j) { return j * m + i; };

    double wmin = std::numeric_limits<double>::infinity();
    std::vector<double> w(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const double v = W({-L + (i + 1) * s, -L + (j + 1) * s});
            w[idx(i, j)] = v;
            wmin = std::min(wmin, v);
        }
    // Shift so the operator is positive definite; added back afterwards.
    const double shift = std::min(0.0, wmin) - 1.0;

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(5 * w.size());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const int r = idx(i, j);
            t.emplace_back(r, r, 4.0 * c + w[r] - shift);
            if (i > 0) t.emplace_back(r, idx(i - 1, j), -c);
            if (i + 1 < m) t.emplace_back(r, idx(i + 1, j), -c);
            if (j > 0) t.emplace_back(r, idx(i, j - 1), -c);
            if (j + 1 < m) t.emplace_back(r, idx(i, j + 1), -c);
        }
    const auto dim = static_cast<Eigen::Index>(w.size());
    SparseMatrix A(dim, dim), I(dim, dim);
    A.setFromTriplets(t.begin(), t.end());
    I.setIdentity();

    std::vector<double> vals = solve_eigs(A, I, n, EigenSolverOptions{1e-10, 400});
    for (double& v : vals) v += shift;
    return vals;
}

}  // namespace

PotentialSpec PotentialSpec::harmonic() { return PotentialSpec{Kind::harmonic, 2, 0.0, std::nullopt}; }

PotentialSpec PotentialSpec::power_radial(int q) {
    if (q < 2 || q % 2 != 0) throw InvalidArgument("radial power must be even and >= 2");
    return PotentialSpec{Kind::power_radial, q, 0.0, std::nullopt};
}

PotentialSpec PotentialSpec::tri_sym(double beta) {
    if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
    return PotentialSpec{Kind::tri_sym, 4, beta, std::nullopt};
}

int PotentialSpec::base_symmetry_order() const {
    return kind == Kind::tri_sym && beta != 0.0 ? 3 : kInfiniteSymmetry;
}

int PotentialSpec::symmetry_order() const {
    if (!pushforward || pushforward->is_scaled_orthogonal(1e-12)) return base_symmetry_order();
    return kind == Kind::tri_sym && beta != 0.0 ? 1 : 2;
}

double PotentialSpec::operator()(Vec2 x) const {
    const Vec2 y = pushforward ? pushforward->inverse()(x) : x;
    const double r2 = y.norm_sq();
    switch (kind) {
        case Kind::harmonic: return r2;
        case Kind::power_radial: return std::pow(r2, power / 2);
        case Kind::tri_sym: {
            // Re((x1 + i x2)^3) = x1^3 - 3 x1 x2^2
            const double cubic = y.x1 * y.x1 * y.x1 - 3.0 * y.x1 * y.x2 * y.x2;
            return r2 * r2 + beta * cubic;
        }
    }
    return r2;
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::harmonic: os << "harmonic"; break;
        case Kind::power_radial: os << "power_radial(q=" << power << ")"; break;
        case Kind::tri_sym: os << "tri_sym(beta=" << beta << ")"; break;
    }
    if (pushforward) {
        const LinearMap2& T = *pushforward;
        os << " o inverse[" << T.a11() << "," << T.a12() << "," << T.a21() << "," << T.a22() << "]";
    }
    return os.str();
}

void GridSpec::validate() const {
    if (!(half_width > 0.0 && std::isfinite(half_width))) throw InvalidArgument("half_width must be positive");
    if (points_per_side < 51 || points_per_side % 2 == 0)
        throw InvalidArgument("points_per_side must be odd and >= 51");
}

GridSpec default_grid(const PotentialSpec& W, double h, int n, int points_per_side) {
    if (!(h > 0.0)) throw InvalidArgument("h must be positive");
    if (n < 1) throw InvalidArgument("eigenvalue count must be >= 1");
    // Harmonic oscillator levels 2 sqrt(h) (k + 1) carry k + 1 states.
    int k = 0;
    while ((k + 1) * (k + 2) / 2 < n) ++k;
    const double target = 3.0 * 2.0 * std::sqrt(h) * (k + 1);
    double L = 1.0;
    while (min_on_box_edge(W, L, 257) < target) L += 0.25;
    // The harmonic scale underestimates steeper potentials; confirm with a
    // coarse solve and widen until the edge clears 3 E_n.
    while (min_on_box_edge(W, L, 257) < 3.0 * solve_on_grid(W, h, n, L, 51).back()) L += 0.25;
    GridSpec g{L, points_per_side};
    g.validate();
    return g;
}

Spectrum schrodinger_spectrum(const PotentialSpec& W, double h, int n, const GridSpec& grid) {
    grid.validate();
    if (!(h > 0.0 && std::isfinite(h))) throw InvalidArgument("h must be positive");
    if (n < 1) throw InvalidArgument("eigenvalue count must be >= 1");

    const std::vector<double> fine = solve_on_grid(W, h, n, grid.half_width, grid.points_per_side);
    const double edge_min = min_on_box_edge(W, grid.half_width, grid.points_per_side);
    if (edge_min < fine.back()) {
        double L = grid.half_width;
        while (min_on_box_edge(W, L, grid.points_per_side) < 3.0 * fine.back()) L *= 1.25;
        std::ostringstream msg;
        msg << "box too small: min W on the edge is " << edge_min << " < E_" << n << " = "
            << fine.back() << "; try half_width " << L;
        throw WidenGrid(msg.str(), L);
    }
    const std::vector<double> coarse =
        solve_on_grid(W, h, n, grid.half_width, (grid.points_per_side + 1) / 2);

    Spectrum s;
    s.method = Method::fd;
    s.values = fine;
    for (int i = 0; i < n; ++i) s.error_estimates.push_back(std::abs(fine[i] - coarse[i]) / 3.0);
    return s;
}

TransformedProblem transformed_problem(const PotentialSpec& W, double h, const LinearMap2& T) {
    const LinearMap2 inv = T.inverse();
    if (!(h > 0.0)) throw InvalidArgument("h must be positive");
    PotentialSpec out = W;
    out.pushforward = W.pushforward ? T * *W.pushforward : T;
    return {out, 2.0 * h / inv.hs_norm_sq()};
}

}  // namespace isospec
