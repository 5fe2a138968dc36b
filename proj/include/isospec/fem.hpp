#pragma once

// Piecewise-linear finite elements for the Laplace eigenvalue problem with
// Dirichlet, Neumann or Robin boundary conditions.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "isospec/geometry.hpp"
#include "isospec/spectra_exact.hpp"

namespace isospec {

struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;       // counterclockwise
    std::vector<std::array<int, 2>> boundary_edges;  // domain on the left
    int refinement_level = 0;

    // Set for ellipse meshes: boundary vertices carry their ellipse
    // parameter so refinement can place midpoints on the true curve.
    std::optional<Ellipse> curved_boundary;
    std::vector<double> boundary_param;  // NaN for vertices off the curve

    std::vector<bool> boundary_vertex_mask() const;
};

/// Ear-clipping triangulation (polygons) or a 64-gon fan (ellipses),
/// uniformly refined `level` times.
Mesh mesh_domain(const Domain& d, int level);

/// Splits every triangle into four through its edge midpoints.
Mesh refine(const Mesh& mesh);

/// "v x y", "t i j k" and "b i j" lines.
void write_mesh(std::ostream& out, const Mesh& mesh);

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FemSystem {
    SparseMatrix stiffness;  // int |grad u|^2
    SparseMatrix mass;       // int u^2
    SparseMatrix boundary;   // sigma int_boundary u^2 (zero unless Robin)
    std::vector<int> dof_of_vertex;  // -1 for eliminated Dirichlet vertices
};

FemSystem assemble(const Mesh& mesh, BoundaryCondition bc);

struct EigenSolverOptions {
    double tolerance = 1e-10;  // normwise backward error of each Ritz pair
    int dense_threshold = 400;
    int max_iterations = 2000;
};

/// The n smallest eigenvalues of K u = lambda M u, ascending. Throws
/// InvalidArgument when n exceeds the dimension and SolverFailure when the
/// iteration does not converge.
std::vector<double> solve_eigs(const SparseMatrix& K, const SparseMatrix& M, int n,
                               const EigenSolverOptions& opts = {});

struct FemOptions {
    int max_refinement = 5;
    int dense_threshold = 400;
    double eig_tolerance = 1e-10;
    bool extrapolate = true;
};

/// Solves at refinement levels max_refinement-1 and max_refinement and,
/// when requested, Richardson-extrapolates each eigenvalue.
Spectrum spectrum_fem(const Domain& d, BoundaryCondition bc, int n, const FemOptions& opts = {});

/// Raw eigenvalues on a single refinement level.
std::vector<double> fem_eigenvalues(const Mesh& mesh, BoundaryCondition bc, int n,
                                    const EigenSolverOptions& opts = {});

}  // namespace isospec
