#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace geoindex {

// Dense real symmetric matrix.  Construction symmetrizes the input as
// (m + m^T)/2, so (i,j) and (j,i) are computed from the same two addends and
// compare equal exactly; downstream eigensolvers may assume perfect symmetry.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols() || m.rows() < 1)
            throw std::invalid_argument("SymMatrix: input must be square and non-empty");
        mat_ = 0.5 * (m + m.transpose());
    }

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& mat() const { return mat_; }
    double operator()(int i, int j) const { return mat_(i, j); }

private:
    Eigen::MatrixXd mat_;
};

// Continuous one-parameter family of symmetric matrices over [0, 1].
// smoothness_hint is the coarsest uniform grid the caller believes separates
// consecutive parameter values where the path loses invertibility.
struct SymMatrixPath {
    int dim = 0;
    std::function<SymMatrix(double)> eval;
    int smoothness_hint = 512;
};

// One regular crossing of a SymMatrixPath: an isolated parameter where the
// path has a kernel, together with the spectral data of the parameter
// derivative restricted to that kernel.
struct Crossing {
    double lambda0 = 0.0;
    std::vector<Eigen::VectorXd> kernel_basis;   // orthonormal
    std::vector<double> form_eigenvalues;        // ascending
    int signature = 0;                           // #positive - #negative

    int kernel_dim() const { return static_cast<int>(kernel_basis.size()); }
};

}  // namespace geoindex
