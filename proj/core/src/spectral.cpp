#include "geoindex/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace geoindex::spectral {

namespace {

constexpr double kRefineWidth = 1e-10;   // bisection / golden-section target
constexpr double kMergeTol = 1e-8;       // candidates closer than this are one crossing
constexpr int kDirectEigenMaxDim = 48;   // full eigensolve per grid node up to here
constexpr double kDerivativeStep = 1e-5;

// What the grid scan needs at each node: the sign of det L and an estimate of
// the distance of the spectrum to zero.
struct Probe {
    int det_sign = 0;
    double sigma_min = 0.0;
};

Probe probe_eigen(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    Probe p;
    p.sigma_min = ev.cwiseAbs().minCoeff();
    if ((ev.array() == 0.0).any()) {
        p.det_sign = 0;
    } else {
        const auto negatives = (ev.array() < 0.0).count();
        p.det_sign = (negatives % 2 == 0) ? 1 : -1;
    }
    return p;
}

// For large matrices a full eigensolve per node is wasteful.  The sign of det
// comes from an LU factorization; sigma_min from a few rounds of inverse
// iteration reusing the same factorization.  The estimate only has to be
// good enough to expose local minima, refinement re-checks with a full solve.
Probe probe_lu(const Eigen::MatrixXd& m) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const auto& diag = lu.matrixLU().diagonal();
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag(i) == 0.0) return {0, 0.0};
        if (diag(i) < 0.0) sign = -sign;
    }
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
    double sigma = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 4; ++iter) {
        Eigen::VectorXd w = lu.solve(v);
        const double norm = w.norm();
        if (!std::isfinite(norm) || norm == 0.0) return {sign, 0.0};
        sigma = 1.0 / norm;
        v = w / norm;
    }
    return {sign, sigma};
}

class PathScanner {
public:
    explicit PathScanner(const SymMatrixPath& path) : path_(path) {}

    Probe probe(double lambda) const {
        const Eigen::MatrixXd m = path_.eval(lambda).mat();
        return path_.dim <= kDirectEigenMaxDim ? probe_eigen(m) : probe_lu(m);
    }

    int det_sign(double lambda) const { return probe(lambda).det_sign; }
    double sigma_min(double lambda) const { return probe(lambda).sigma_min; }

private:
    const SymMatrixPath& path_;
};

double bisect_sign_change(const PathScanner& scan, double a, double b, int sign_a) {
    while (b - a > kRefineWidth) {
        const double mid = 0.5 * (a + b);
        const int sm = scan.det_sign(mid);
        if (sm == 0) return mid;
        if (sm == sign_a) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

double golden_minimize(const PathScanner& scan, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = scan.sigma_min(x1);
    double f2 = scan.sigma_min(x2);
    while (b - a > kRefineWidth) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = scan.sigma_min(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = scan.sigma_min(x2);
        }
    }
    return 0.5 * (a + b);
}

// Flip each vector so its largest-magnitude entry is positive.  Eigensolver
// output is only determined up to sign; reports should be reproducible.
void normalize_sign(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
}

void validate_path(const SymMatrixPath& path) {
    if (!path.eval) throw std::invalid_argument("SymMatrixPath: eval is empty");
    if (path.dim < 1) throw std::invalid_argument("SymMatrixPath: dim must be >= 1");
}

}  // namespace

MorseCount morse_count(const SymMatrix& m, double zero_tol) {
    if (!(zero_tol > 0.0)) throw std::invalid_argument("morse_count: zero_tol must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(), Eigen::EigenvaluesOnly);
    MorseCount c;
    for (double ev : es.eigenvalues()) {
        if (ev < -zero_tol) {
            ++c.index;
        } else if (ev > zero_tol) {
            ++c.positive;
        } else {
            ++c.nullity;
        }
    }
    return c;
}

int morse_index(const SymMatrix& m, double zero_tol) {
    return morse_count(m, zero_tol).index;
}

int signature(const SymMatrix& m, double zero_tol) {
    const MorseCount c = morse_count(m, zero_tol);
    if (c.nullity > 0) {
        std::ostringstream msg;
        msg << "signature undefined: " << c.nullity << " eigenvalue(s) within " << zero_tol
            << " of zero";
        throw DegenerateFormError(msg.str());
    }
    return c.positive - c.index;
}

std::vector<Crossing> find_crossings(const SymMatrixPath& path, int grid_size, double kernel_tol,
                                     double regularity_tol) {
    validate_path(path);
    if (grid_size < 2) throw std::invalid_argument("find_crossings: grid_size must be >= 2");
    if (!(kernel_tol > 0.0)) throw std::invalid_argument("find_crossings: kernel_tol must be positive");
    if (!(regularity_tol > 0.0))
        throw std::invalid_argument("find_crossings: regularity_tol must be positive");

    const PathScanner scan(path);

    for (double lambda : {0.0, 1.0}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(path.eval(lambda).mat(),
                                                          Eigen::EigenvaluesOnly);
        const double smallest = es.eigenvalues().cwiseAbs().minCoeff();
        if (smallest <= kernel_tol) {
            std::ostringstream msg;
            msg << "path endpoint lambda=" << lambda << " has an eigenvalue of magnitude "
                << smallest << " (kernel_tol " << kernel_tol << ")";
            throw EndpointDegenerateError(msg.str());
        }
    }

    std::vector<double> lambda(grid_size + 1);
    std::vector<Probe> node(grid_size + 1);
    for (int i = 0; i <= grid_size; ++i) {
        lambda[i] = static_cast<double>(i) / grid_size;
        node[i] = scan.probe(lambda[i]);
    }

    // A candidate remembers how it was detected: a det sign flip forces an
    // odd-dimensional kernel, a sign-preserving dip an even-dimensional one.
    struct Candidate {
        double lambda0;
        bool parity_odd;
    };
    std::vector<Candidate> candidates;

    std::vector<bool> cell_flip(grid_size, false);
    for (int i = 0; i < grid_size; ++i) {
        if (node[i].det_sign != 0 && node[i + 1].det_sign != 0 &&
            node[i].det_sign != node[i + 1].det_sign) {
            cell_flip[i] = true;
            candidates.push_back(
                {bisect_sign_change(scan, lambda[i], lambda[i + 1], node[i].det_sign), true});
        }
    }
    for (int i = 1; i < grid_size; ++i) {
        if (node[i].det_sign == 0) {
            candidates.push_back({lambda[i], node[i - 1].det_sign * node[i + 1].det_sign < 0});
            continue;
        }
        if (cell_flip[i - 1] || cell_flip[i]) continue;
        if (node[i].sigma_min < node[i - 1].sigma_min &&
            node[i].sigma_min <= node[i + 1].sigma_min) {
            candidates.push_back({golden_minimize(scan, lambda[i - 1], lambda[i + 1]), false});
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.lambda0 < b.lambda0; });
    std::vector<Candidate> merged;
    for (const Candidate& c : candidates) {
        if (!merged.empty() && c.lambda0 - merged.back().lambda0 <= kMergeTol) {
            merged.back().parity_odd = merged.back().parity_odd || c.parity_odd;
        } else {
            merged.push_back(c);
        }
    }

    std::vector<Crossing> out;
    for (const Candidate& c : merged) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(path.eval(c.lambda0).mat());
        const Eigen::VectorXd& ev = es.eigenvalues();

        std::vector<int> kernel_idx;
        for (int j = 0; j < path.dim; ++j) {
            if (std::abs(ev(j)) <= kernel_tol) kernel_idx.push_back(j);
        }
        if (kernel_idx.empty()) continue;  // a dip that never reached the tolerance

        const bool kernel_odd = kernel_idx.size() % 2 == 1;
        if (kernel_odd != c.parity_odd) {
            std::ostringstream msg;
            msg << "kernel dimension " << kernel_idx.size() << " near lambda=" << c.lambda0
                << " contradicts the determinant sign pattern of its bracket; crossings are"
                << " likely unresolved at grid_size=" << grid_size << ", re-run with a larger grid";
            throw UnresolvedClusterError(msg.str());
        }

        const double h = std::min(kDerivativeStep, 0.5 * std::min(c.lambda0, 1.0 - c.lambda0));
        const Eigen::MatrixXd derivative =
            (path.eval(c.lambda0 + h).mat() - path.eval(c.lambda0 - h).mat()) / (2.0 * h);

        Eigen::MatrixXd basis(path.dim, kernel_idx.size());
        for (std::size_t k = 0; k < kernel_idx.size(); ++k)
            basis.col(k) = es.eigenvectors().col(kernel_idx[k]);

        const SymMatrix restricted(basis.transpose() * derivative * basis);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> form(restricted.mat(),
                                                            Eigen::EigenvaluesOnly);

        Crossing crossing;
        crossing.lambda0 = c.lambda0;
        for (std::size_t k = 0; k < kernel_idx.size(); ++k) {
            Eigen::VectorXd v = basis.col(k);
            normalize_sign(v);
            crossing.kernel_basis.push_back(std::move(v));
        }
        for (double fe : form.eigenvalues()) {
            if (std::abs(fe) <= regularity_tol) {
                std::ostringstream msg;
                msg << "crossing at lambda=" << c.lambda0
                    << " has a restricted-derivative eigenvalue of magnitude " << std::abs(fe)
                    << " (regularity_tol " << regularity_tol << ")";
                throw IrregularCrossingError(msg.str());
            }
            crossing.form_eigenvalues.push_back(fe);
            crossing.signature += fe > 0.0 ? 1 : -1;
        }
        out.push_back(std::move(crossing));
    }
    return out;
}

CrossingSumResult crossing_sum_identity(const SymMatrixPath& path, int grid_size,
                                        double kernel_tol, double regularity_tol) {
    CrossingSumResult result;
    result.crossings = find_crossings(path, grid_size, kernel_tol, regularity_tol);
    result.index_drop =
        morse_index(path.eval(0.0), kernel_tol) - morse_index(path.eval(1.0), kernel_tol);
    for (const Crossing& c : result.crossings) result.signature_sum += c.signature;
    result.equal = result.index_drop == result.signature_sum;
    return result;
}

}  // namespace geoindex::spectral
