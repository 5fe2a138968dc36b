#include "isospec/fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Orthonormalizes the columns of Y in the M inner product (two passes of
// modified Gram-Schmidt). Columns that collapse are replaced with fresh
// random vectors.
void m_orthonormalize(Eigen::MatrixXd& Y, const SparseMatrix& M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const Eigen::Index p = Y.cols();
    Eigen::MatrixXd MY(Y.rows(), p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            const double before = std::sqrt(std::max(0.0, Y.col(j).dot(M * Y.col(j))));
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index i = 0; i < j; ++i) Y.col(j) -= MY.col(i).dot(Y.col(j)) * Y.col(i);
            Eigen::VectorXd my = M * Y.col(j);
            const double nrm = std::sqrt(std::max(0.0, Y.col(j).dot(my)));
            if (nrm > 1e-10 * before && nrm > 0.0) {
                Y.col(j) /= nrm;
                MY.col(j) = my / nrm;
                break;
            }
            for (Eigen::Index r = 0; r < Y.rows(); ++r) Y(r, j) = unif(rng);
        }
    }
}

std::vector<double> dense_eigs(const SparseMatrix& K, const SparseMatrix& M, int n) {
    const Eigen::MatrixXd Kd(K), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kd, Md, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw SolverFailure("dense generalized eigensolver failed");
    std::vector<double> out(ges.eigenvalues().data(), ges.eigenvalues().data() + n);
    return out;
}

std::vector<double> iterative_eigs(const SparseMatrix& K, const SparseMatrix& M, int n,
                                   const EigenSolverOptions& opts) {
    const Eigen::Index dim = K.rows();

    // Shift 0 unless K is (numerically) singular, then factor K + eps M.
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    ldlt.compute(K);
    bool singular = ldlt.info() != Eigen::Success;
    if (!singular) {
        const Eigen::VectorXd D = ldlt.vectorD();
        singular = D.minCoeff() <= 1e-12 * D.cwiseAbs().maxCoeff();
    }
    if (singular) {
        const double eps = 1e-8 * K.diagonal().sum() / static_cast<double>(dim);
        const SparseMatrix shifted = K + eps * M;
        ldlt.compute(shifted);
        if (ldlt.info() != Eigen::Success) throw SolverFailure("factorization of K + eps M failed");
    }

    const Eigen::Index p = std::min<Eigen::Index>(dim, std::max(2 * n, n + 8));
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd X(dim, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index r = 0; r < dim; ++r) X(r, j) = unif(rng);

    const auto one_norm = [](const SparseMatrix& A) {
        double m = 0.0;
        for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
            double col = 0.0;
            for (SparseMatrix::InnerIterator it(A, k); it; ++it) col += std::abs(it.value());
            m = std::max(m, col);
        }
        return m;
    };
    const double norm_k = one_norm(K), norm_m = one_norm(M);

    Eigen::Index locked = 0;
    Eigen::VectorXd theta;
    double worst = 0.0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        for (Eigen::Index j = locked; j < p; ++j) X.col(j) = ldlt.solve(M * X.col(j));
        m_orthonormalize(X, M, rng);

        const Eigen::MatrixXd KX = K * X;
        Eigen::MatrixXd Kr = X.transpose() * KX;
        Kr = 0.5 * (Kr + Kr.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kr);
        theta = es.eigenvalues();
        X = (X * es.eigenvectors()).eval();

        // Lock the leading run of converged Ritz pairs. The test is on the
        // normwise backward error, whose roundoff floor stays near machine
        // epsilon even for badly shaped meshes where |K| is large.
        locked = 0;
        worst = 0.0;
        const Eigen::MatrixXd KXn = K * X.leftCols(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double res = (KXn.col(i) - theta(i) * (M * X.col(i))).norm();
            const double backward = res / ((norm_k + std::abs(theta(i)) * norm_m) * X.col(i).norm());
            worst = std::max(worst, backward);
            if (backward <= opts.tolerance && locked == i) ++locked;
        }
        if (locked >= n) return std::vector<double>(theta.data(), theta.data() + n);
    }
    std::ostringstream msg;
    msg << "shift-invert subspace iteration did not converge after " << opts.max_iterations
        << " iterations (dimension " << dim << ", " << locked << "/" << n
        << " locked, worst backward error " << worst << ")";
    throw SolverFailure(msg.str());
}

}  // namespace

FemSystem assemble(const Mesh& mesh, BoundaryCondition bc) {
    FemSystem sys;
    const int nv = static_cast<int>(mesh.vertices.size());
    sys.dof_of_vertex.assign(nv, -1);
    const std::vector<bool> on_boundary = mesh.boundary_vertex_mask();
    int ndof = 0;
    for (int i = 0; i < nv; ++i)
        if (!(bc.acts_as_dirichlet() && on_boundary[i])) sys.dof_of_vertex[i] = ndof++;

    Triplets kt, mt, bt;
    kt.reserve(9 * mesh.triangles.size());
    mt.reserve(9 * mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const Vec2 p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
        const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
        // grad phi_i = rot90(p_{i+2} - p_{i+1}) / (2 area)
        Vec2 g[3];
        for (int i = 0; i < 3; ++i) {
            const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
            g[i] = (1.0 / (2.0 * area)) * Vec2{-e.x2, e.x1};
        }
        for (int i = 0; i < 3; ++i) {
            const int di = sys.dof_of_vertex[t[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int dj = sys.dof_of_vertex[t[j]];
                if (dj < 0) continue;
                kt.emplace_back(di, dj, area * g[i].dot(g[j]));
                mt.emplace_back(di, dj, area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    if (bc.has_boundary_term()) {
        for (const auto& e : mesh.boundary_edges) {
            const double len = (mesh.vertices[e[1]] - mesh.vertices[e[0]]).norm();
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    bt.emplace_back(sys.dof_of_vertex[e[i]], sys.dof_of_vertex[e[j]],
                                    bc.sigma() * len / 6.0 * (i == j ? 2.0 : 1.0));
        }
    }
    sys.stiffness.resize(ndof, ndof);
    sys.mass.resize(ndof, ndof);
    sys.boundary.resize(ndof, ndof);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    sys.boundary.setFromTriplets(bt.begin(), bt.end());
    return sys;
}

std::vector<double> solve_eigs(const SparseMatrix& K, const SparseMatrix& M, int n,
                               const EigenSolverOptions& opts) {
    if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows())
        throw InvalidArgument("K and M must be square and of equal size");
    if (n < 1 || n > K.rows()) throw InvalidArgument("requested more eigenvalues than the dimension");
    if (K.rows() <= opts.dense_threshold) return dense_eigs(K, M, n);
    return iterative_eigs(K, M, n, opts);
}

std::vector<double> fem_eigenvalues(const Mesh& mesh, BoundaryCondition bc, int n,
                                    const EigenSolverOptions& opts) {
    const FemSystem sys = assemble(mesh, bc);
    if (bc.has_boundary_term()) {
        const SparseMatrix A = sys.stiffness + sys.boundary;
        return solve_eigs(A, sys.mass, n, opts);
    }
    return solve_eigs(sys.stiffness, sys.mass, n, opts);
}

Spectrum spectrum_fem(const Domain& d, BoundaryCondition bc, int n, const FemOptions& opts) {
    if (opts.max_refinement < 1) throw InvalidArgument("max_refinement must be >= 1");
    if (opts.dense_threshold < 100) throw InvalidArgument("dense_threshold must be >= 100");
    if (!(opts.eig_tolerance > 0.0)) throw InvalidArgument("eig_tolerance must be positive");
    if (n < 1) throw InvalidArgument("eigenvalue count must be >= 1");

    const EigenSolverOptions eopts{opts.eig_tolerance, opts.dense_threshold};
    const Mesh coarse = mesh_domain(d, opts.max_refinement - 1);
    const Mesh fine = refine(coarse);
    const std::vector<double> lc = fem_eigenvalues(coarse, bc, n, eopts);
    const std::vector<double> lf = fem_eigenvalues(fine, bc, n, eopts);

    Spectrum s;
    s.method = Method::fem;
    for (int i = 0; i < n; ++i) {
        const double v = opts.extrapolate ? (4.0 * lf[i] - lc[i]) / 3.0 : lf[i];
        s.values.push_back(v);
        // The solver residual bound is a floor: level differences vanish
        // for exactly represented modes such as the Neumann constant.
        s.error_estimates.push_back(
            std::max(std::abs(lc[i] - lf[i]) / 3.0, opts.eig_tolerance * (1.0 + std::abs(v))));
    }
    // Extrapolation can reorder nearly equal values.
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.values[a] < s.values[b]; });
    Spectrum sorted = s;
    for (int i = 0; i < n; ++i) {
        sorted.values[i] = s.values[order[i]];
        sorted.error_estimates[i] = s.error_estimates[order[i]];
    }
    return sorted;
}

}  // namespace isospec
