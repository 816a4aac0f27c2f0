#pragma once

#include <Eigen/Core>
#include <vector>

#include "geoindex/errors.hpp"
#include "geoindex/profile.hpp"

namespace geoindex::jacobi {

struct Defaults {
    static constexpr int steps = 2000;
    // Relative to path_scale: a singular value sigma of J(t) counts as zero
    // when sigma <= kernel_tol * max_t ||J(t)||_F.
    static constexpr double kernel_tol = 1e-7;
};

// Matrix solution of u'' + S(x) u = 0 with J(0) = 0, J'(0) = Id; the columns
// of J(t) span the space of Jacobi fields vanishing at the left endpoint.
struct JacobiSolution {
    std::vector<double> grid;
    std::vector<Eigen::MatrixXd> J;
    std::vector<Eigen::MatrixXd> Jp;
    CurvatureProfile profile;  // retained for dense output between nodes
    double path_scale = 0.0;   // max Frobenius norm of J over the grid

    int dim() const { return profile.n_normal; }
    int step_count() const { return static_cast<int>(grid.size()) - 1; }

    // J and J' at arbitrary t in [0, 1]: stored values at nodes, one RK4 step
    // of the remaining fraction inside a cell (the step is < 1/steps, so its
    // local error sits far below the global error of the stored values).
    void eval_at(double t, Eigen::MatrixXd& jt, Eigen::MatrixXd& jpt) const;
};

JacobiSolution solve_jacobi(const CurvatureProfile& s, int steps = Defaults::steps);

struct ConjugatePoint {
    double t = 0.0;
    int multiplicity = 0;
};

// Conjugate instants in the open interval (0, 1), ascending.  nondegenerate
// is false when J(1) is rank-deficient at the tolerance or an instant was
// localized within 1e-9 of t = 1; such instants are not listed as interior
// points.
struct ConjugateReport {
    std::vector<ConjugatePoint> points;
    bool nondegenerate = true;
    int total = 0;  // sum of interior multiplicities
};

// Scan the solution grid for rank drops of J(t): determinant sign changes are
// refined by bisection, sign-preserving dips of the smallest singular value
// by golden-section search (both to width 1e-10).  Multiplicity is the count
// of singular values below kernel_tol * path_scale.  Throws
// UnresolvedClusterError when the multiplicity found after refinement
// contradicts the determinant sign pattern around it (distinct instants
// closer than the grid step look like this; raise steps).
ConjugateReport conjugate_points(const JacobiSolution& sol,
                                 double kernel_tol = Defaults::kernel_tol);

struct KernelField {
    Eigen::VectorXd v;            // unit vector with J(t0) v = 0
    Eigen::VectorXd u_prime_end;  // d/dx at x = 1 of u(x) = J(t0 x) v
};

// Orthonormal kernel directions of J(t0) (right singular vectors with
// singular value <= kernel_tol * path_scale, most singular first), each with
// the endpoint derivative of the associated normalized Jacobi field.  Throws
// NotAConjugateInstantError when J(t0) has full numerical rank.
std::vector<KernelField> kernel_fields(const JacobiSolution& sol, double t0,
                                       double kernel_tol = Defaults::kernel_tol);

}  // namespace geoindex::jacobi
