#pragma once

// Normalized eigenvalue functionals and the checks built on them: linear
// map bounds for Laplace, Robin and Schrodinger spectra, the quadrilateral
// bound, sweeps and conjecture scans.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isospec/fem.hpp"
#include "isospec/geometry.hpp"
#include "isospec/schrodinger.hpp"
#include "isospec/spectra_exact.hpp"

namespace isospec {

enum class Engine { automatic, exact, fem };

/// Exact spectrum for model shapes with a closed form (automatic) or when
/// asked for; FEM otherwise.
Spectrum compute_spectrum(const Domain& d, BoundaryCondition bc, int n, Engine engine = Engine::automatic,
                          const FemOptions& fem = {});

/// A^3 / I with I about the centroid.
double scale_factor(const Domain& d);

/// (sum of the first n eigenvalues) A^3 / I. Throws Unsupported when the
/// exact engine is requested for a domain without a closed form.
double normalized_sum(const Domain& d, BoundaryCondition bc, int n, Engine engine = Engine::automatic,
                      const FemOptions& fem = {});

struct ReportInputs {
    std::string domain;
    std::string map;
    std::string bc;
    int n = 0;
};

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;      // rhs - lhs
    double tolerance = 0.0;  // combined error budget
    bool holds = false;      // slack >= -tolerance
    ReportInputs inputs;
};

BoundReport make_report(double lhs, double rhs, double tolerance, ReportInputs inputs);

nlohmann::ordered_json to_json(const BoundReport& r);

struct SweepRow {
    double param = 0.0;
    double value = 0.0;
    Method method = Method::exact;
    double error = 0.0;
};

/// Header "param,value,method,error", numbers with 12 significant digits.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

std::string describe(const Domain& d);
std::string describe(const LinearMap2& T);
std::string describe(BoundaryCondition bc);

/// sum lambda(T D) <= |T^-1|^2 / 2 * sum lambda(D) for n = 1..n_max
/// (Dirichlet or Neumann). Throws PreconditionViolation when D has symmetry
/// order below 3 and InvalidArgument for singular T or Robin conditions.
std::vector<BoundReport> verify_linear_map_bounds(const Domain& d, const LinearMap2& T, BoundaryCondition bc,
                                                  int n_max, const FemOptions& fem = {});
BoundReport verify_linear_map_bound(const Domain& d, const LinearMap2& T, BoundaryCondition bc, int n,
                                    const FemOptions& fem = {});

/// Normalized Robin sums: T D at sigma |T^-1| / sqrt 2 against D at sigma,
/// for n = 1..n_max.
std::vector<BoundReport> verify_robin_bounds(const Domain& d, const LinearMap2& T, double sigma, int n_max,
                                             const FemOptions& fem = {});
BoundReport verify_robin_bound(const Domain& d, const LinearMap2& T, double sigma, int n,
                               const FemOptions& fem = {});

struct CorollaryEntry {
    double value = 0.0;
    double error = 0.0;
    bool is_max = false;
};

struct RobinCorollary {
    std::vector<CorollaryEntry> entries;
    /// Set when an equilateral triangle is among the inputs: whether every
    /// equilateral entry is maximal within tolerance.
    std::optional<bool> equilateral_maximal;
};

/// Triangles are rescaled to the area of the first one before evaluating
/// (rho_1 + ... + rho_n) A^3 / I at the fixed sigma >= 0.
RobinCorollary verify_robin_corollary(std::span<const Polygon> triangles, double sigma, int n,
                                      const FemOptions& fem = {});

/// Box wide enough for both (h, W) and its transform under T.
GridSpec default_bound_grid(const PotentialSpec& W, double h, const LinearMap2& T, int n,
                            int points_per_side = 201);

/// Eigenvalue sums of the transformed problem against (h, W), n = 1..n_max.
std::vector<BoundReport> verify_schrodinger_bounds(const PotentialSpec& W, double h, const LinearMap2& T,
                                                   int n_max, const GridSpec& grid);
BoundReport verify_schrodinger_bound(const PotentialSpec& W, double h, const LinearMap2& T, int n,
                                     const GridSpec& grid);

/// The square with vertices (+-1, 0), (0, +-1).
Polygon quad_reference_square();

/// (sum lambda) A^3 / I0 on P(D) against the same on D, D the reference
/// square, for n = 1..n_max.
std::vector<BoundReport> verify_quad_bounds(const PiecewiseLinearMap& P, BoundaryCondition bc, int n_max,
                                            const FemOptions& fem = {});
BoundReport verify_quad_bound(const PiecewiseLinearMap& P, BoundaryCondition bc, int n,
                              const FemOptions& fem = {});

/// The quadrilateral bound with I about the centroid in place of I0:
/// one row per map with value lhs / rhs (at most 1 if the variant holds).
std::vector<SweepRow> scan_quad_centroid_variant(std::span<const PiecewiseLinearMap> maps, BoundaryCondition bc,
                                                 int n, const FemOptions& fem = {});

/// (alpha, normalized sum) for isosceles triangles of aperture alpha via FEM.
std::vector<SweepRow> sweep_isosceles(int n, std::span<const double> apertures, BoundaryCondition bc,
                                      const FemOptions& fem = {});

struct DiskVsSquare {
    std::vector<int> square_larger;
    std::vector<int> ties;
    double min_margin = 0.0;    // min over n of |square - disk|
    double error_budget = 0.0;  // largest normalized Bessel-zero error sum
};

/// Dirichlet normalized sums of the unit square and unit disk for n <= n_max.
/// Throws SolverFailure if the smallest margin is not at least 1e6 times the
/// error budget.
DiskVsSquare disk_vs_square(int n_max);

/// Exact normalized sums of l x 1 rectangles, one row per aspect ratio l >= 1.
std::vector<SweepRow> rectangle_sum_family(int n, std::span<const double> aspect_ratios);

enum class KroegerShape { square, disk, equilateral };

struct KroegerWeyl {
    std::vector<SweepRow> kroeger;  // (n, (mu_1 + ... + mu_n) A / n^2)
    std::vector<SweepRow> weyl;     // (n, mu_n A / (4 pi n))
    bool bound_holds = true;        // every Kroeger value <= 2 pi
};

KroegerWeyl kroeger_weyl_check(KroegerShape shape, int n_max);

struct ConjectureScan {
    std::vector<SweepRow> rows;
    std::vector<bool> within_bounds;  // 9 pi^2 / 2 < value <= 12 pi^2, up to error
};

/// lambda_1 A^3 / I for each polygon (Dirichlet). `params` labels the rows
/// and defaults to the index. Never throws on out-of-range values.
ConjectureScan conjecture_scan_c1(std::span<const Polygon> polygons, const FemOptions& fem = {},
                                  std::span<const double> params = {});

/// Deterministic maps with entries uniform in [-2, 2] and |det| >= 0.1.
std::vector<LinearMap2> random_invertible_maps(int count, std::uint64_t seed);

/// r U with r uniform in [0.5, 2] and U a rotation or reflection.
std::vector<LinearMap2> random_scaled_orthogonal_maps(int count, std::uint64_t seed);

}  // namespace isospec
