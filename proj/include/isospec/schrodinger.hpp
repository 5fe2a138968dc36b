#pragma once

// Five-point finite differences for -h Laplace u + W u = E u on a square
// box with zero boundary values.

#include <optional>
#include <string>

#include "isospec/geometry.hpp"
#include "isospec/spectra_exact.hpp"

namespace isospec {

struct PotentialSpec {
    enum class Kind {
        harmonic,      // |x|^2
        power_radial,  // |x|^q, q even >= 2
        tri_sym,       // |x|^4 + beta Re((x1 + i x2)^3)
    };

    Kind kind = Kind::harmonic;
    int power = 2;
    double beta = 0.2;
    std::optional<LinearMap2> pushforward;  // evaluates W o T^-1 when set

    static PotentialSpec harmonic();
    /// Throws InvalidArgument unless q is even and >= 2.
    static PotentialSpec power_radial(int q);
    /// Throws InvalidArgument for non-finite beta.
    static PotentialSpec tri_sym(double beta = 0.2);

    /// Rotational symmetry order of the base potential (0 for radial).
    int base_symmetry_order() const;

    /// Symmetry order of the potential as evaluated; a non-orthogonal
    /// pushforward leaves only the point symmetry of a radial potential.
    int symmetry_order() const;

    double operator()(Vec2 x) const;

    std::string describe() const;
};

struct GridSpec {
    double half_width = 8.0;
    int points_per_side = 201;  // odd, >= 51, including the box edges

    /// Throws InvalidArgument on violated invariants.
    void validate() const;
    double step() const { return 2.0 * half_width / (points_per_side - 1); }
};

/// Smallest half-width (in steps of 0.25) with min over the box edge of
/// W >= 3 times a harmonic-scale estimate of the n-th eigenvalue, widened
/// further if a 51-point solve puts E_n higher.
GridSpec default_grid(const PotentialSpec& W, double h, int n, int points_per_side = 201);

/// n smallest eigenvalues on `grid`; error estimates compare against the
/// grid with doubled step. Throws WidenGrid when min over the box edge of W
/// is below the n-th eigenvalue.
Spectrum schrodinger_spectrum(const PotentialSpec& W, double h, int n, const GridSpec& grid);

struct TransformedProblem {
    PotentialSpec potential;
    double h = 1.0;
};

/// (W o T^-1, 2h / |T^-1|^2).
TransformedProblem transformed_problem(const PotentialSpec& W, double h, const LinearMap2& T);

}  // namespace isospec
