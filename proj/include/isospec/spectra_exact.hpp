#pragma once

// Closed-form Laplace spectra of the model domains: equilateral triangles,
// rectangles and disks.

#include <optional>
#include <string_view>
#include <vector>

#include "isospec/geometry.hpp"

namespace isospec {

class BoundaryCondition {
public:
    enum class Kind { dirichlet, neumann, robin };

    static BoundaryCondition dirichlet() { return BoundaryCondition(Kind::dirichlet, 0.0); }
    static BoundaryCondition neumann() { return BoundaryCondition(Kind::neumann, 0.0); }
    /// Throws InvalidArgument unless sigma is finite and >= 0.
    static BoundaryCondition robin(double sigma);

    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }

    /// Robin(0) is Neumann.
    bool acts_as_neumann() const { return kind_ == Kind::neumann || (kind_ == Kind::robin && sigma_ == 0.0); }
    bool acts_as_dirichlet() const { return kind_ == Kind::dirichlet; }
    bool has_boundary_term() const { return kind_ == Kind::robin && sigma_ > 0.0; }

    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

private:
    BoundaryCondition(Kind k, double s) : kind_(k), sigma_(s) {}
    Kind kind_;
    double sigma_;
};

std::string_view to_string(BoundaryCondition::Kind k);

enum class Method { exact, fem, fd };

std::string_view to_string(Method m);

struct Spectrum {
    std::vector<double> values;           // nondecreasing
    Method method = Method::exact;
    std::vector<double> error_estimates;  // absolute, same length as values

    std::size_t size() const { return values.size(); }
    /// Sum of the first n values.
    double sum(std::size_t n) const;
    /// Sum of the error estimates of the first n values.
    double error_sum(std::size_t n) const;
    /// Every value multiplied by `factor`.
    Spectrum scaled(double factor) const;
};

/// First n eigenvalues of the equilateral triangle of the given side, with
/// multiplicity. Throws Unsupported for Robin conditions with sigma > 0.
Spectrum equilateral_spectrum(double side, BoundaryCondition bc, int n);

/// First n eigenvalues of the l1 x l2 rectangle. Robin values are sums of
/// two interval eigenvalues.
Spectrum rectangle_spectrum(double l1, double l2, BoundaryCondition bc, int n);

/// First n eigenvalues of the disk. Orders m >= 1 count twice; the Neumann
/// list starts with the zero eigenvalue. Throws Unsupported for Robin.
Spectrum disk_spectrum(double radius, BoundaryCondition bc, int n);

/// First `count` eigenvalues of -u'' = rho u on (0, l) with
/// du/dn + sigma u = 0 at both ends.
std::vector<double> robin_interval_eigs(double l, double sigma, int count);

struct ModelShape {
    enum class Kind { equilateral, rectangle, disk };
    Kind kind;
    double a = 0.0;  // side, first side, or radius
    double b = 0.0;  // second rectangle side
};

/// Recognises equilateral triangles, rectangles and disks in any position.
std::optional<ModelShape> recognize_model_shape(const Domain& d);

/// Exact spectrum of a recognised model shape. Throws Unsupported when the
/// domain is not a model shape or no closed form is available for `bc`.
Spectrum exact_spectrum(const Domain& d, BoundaryCondition bc, int n);

}  // namespace isospec
