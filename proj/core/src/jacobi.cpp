#include "geoindex/jacobi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace geoindex::jacobi {

namespace {

constexpr double kRefineWidth = 1e-10;
constexpr double kMergeTol = 1e-8;
constexpr double kEndpointFold = 1e-9;  // instants this close to 1 flag degeneracy

void rk4_step(Eigen::MatrixXd& j, Eigen::MatrixXd& jp, const Eigen::MatrixXd& s_left,
              const Eigen::MatrixXd& s_mid, const Eigen::MatrixXd& s_right, double h) {
    const Eigen::MatrixXd k1j = jp;
    const Eigen::MatrixXd k1p = -(s_left * j);
    const Eigen::MatrixXd k2j = jp + 0.5 * h * k1p;
    const Eigen::MatrixXd k2p = -(s_mid * (j + 0.5 * h * k1j));
    const Eigen::MatrixXd k3j = jp + 0.5 * h * k2p;
    const Eigen::MatrixXd k3p = -(s_mid * (j + 0.5 * h * k2j));
    const Eigen::MatrixXd k4j = jp + h * k3p;
    const Eigen::MatrixXd k4p = -(s_right * (j + h * k3j));
    j += (h / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
    jp += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

int det_sign(const Eigen::MatrixXd& m) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const auto& diag = lu.matrixLU().diagonal();
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag(i) == 0.0) return 0;
        if (diag(i) < 0.0) sign = -sign;
    }
    return sign;
}

double sigma_min(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return std::abs(m(0, 0));
    return m.jacobiSvd().singularValues().minCoeff();
}

void normalize_sign(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
}

}  // namespace

void JacobiSolution::eval_at(double t, Eigen::MatrixXd& jt, Eigen::MatrixXd& jpt) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("JacobiSolution::eval_at: t outside [0, 1]");
    const int steps = step_count();
    int cell = std::min(static_cast<int>(t * steps), steps - 1);
    if (t < grid[cell]) --cell;  // guard against floor landing one node high
    if (t == grid[cell + 1]) ++cell;
    jt = J[cell];
    jpt = Jp[cell];
    const double dt = t - grid[cell];
    if (dt <= 0.0) return;
    const Eigen::MatrixXd s_left = profile.eval(grid[cell]).mat();
    const Eigen::MatrixXd s_mid = profile.eval(grid[cell] + 0.5 * dt).mat();
    const Eigen::MatrixXd s_right = profile.eval(t).mat();
    rk4_step(jt, jpt, s_left, s_mid, s_right, dt);
}

JacobiSolution solve_jacobi(const CurvatureProfile& s, int steps) {
    if (s.n_normal < 1 || !s.eval) throw std::invalid_argument("solve_jacobi: empty profile");
    if (steps < 100) throw std::invalid_argument("solve_jacobi: steps must be >= 100");
    const int n = s.n_normal;

    JacobiSolution sol;
    sol.profile = s;
    sol.grid.resize(steps + 1);
    sol.J.resize(steps + 1);
    sol.Jp.resize(steps + 1);

    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd jp = Eigen::MatrixXd::Identity(n, n);
    sol.grid[0] = 0.0;
    sol.J[0] = j;
    sol.Jp[0] = jp;

    const double h = 1.0 / steps;
    Eigen::MatrixXd s_left = s.eval(0.0).mat();
    for (int i = 0; i < steps; ++i) {
        const double t = sol.grid[i];
        const Eigen::MatrixXd s_mid = s.eval(t + 0.5 * h).mat();
        const double t_next = static_cast<double>(i + 1) / steps;
        const Eigen::MatrixXd s_right = s.eval(t_next).mat();
        rk4_step(j, jp, s_left, s_mid, s_right, h);
        sol.grid[i + 1] = t_next;
        sol.J[i + 1] = j;
        sol.Jp[i + 1] = jp;
        s_left = s_right;
    }
    for (const Eigen::MatrixXd& m : sol.J) sol.path_scale = std::max(sol.path_scale, m.norm());
    return sol;
}

ConjugateReport conjugate_points(const JacobiSolution& sol, double kernel_tol) {
    if (!(kernel_tol > 0.0))
        throw std::invalid_argument("conjugate_points: kernel_tol must be positive");
    const int steps = sol.step_count();
    const double threshold = kernel_tol * sol.path_scale;

    // Node probes, skipping t = 0 where J vanishes by construction.
    std::vector<int> sign(steps + 1, 0);
    std::vector<double> smin(steps + 1, 0.0);
    for (int i = 1; i <= steps; ++i) {
        sign[i] = det_sign(sol.J[i]);
        smin[i] = sigma_min(sol.J[i]);
    }

    const auto probe_sign = [&sol](double t) {
        Eigen::MatrixXd j, jp;
        sol.eval_at(t, j, jp);
        return det_sign(j);
    };
    const auto probe_smin = [&sol](double t) {
        Eigen::MatrixXd j, jp;
        sol.eval_at(t, j, jp);
        return sigma_min(j);
    };

    struct Candidate {
        double t;
        bool parity_odd;
    };
    std::vector<Candidate> candidates;
    std::vector<bool> cell_flip(steps + 1, false);
    for (int i = 1; i < steps; ++i) {
        if (sign[i] != 0 && sign[i + 1] != 0 && sign[i] != sign[i + 1]) {
            cell_flip[i] = true;
            double a = sol.grid[i], b = sol.grid[i + 1];
            const int sa = sign[i];
            while (b - a > kRefineWidth) {
                const double mid = 0.5 * (a + b);
                const int sm = probe_sign(mid);
                if (sm == 0) {
                    a = b = mid;
                    break;
                }
                (sm == sa ? a : b) = mid;
            }
            candidates.push_back({0.5 * (a + b), true});
        }
    }
    for (int i = 2; i < steps; ++i) {
        if (sign[i] == 0) {
            candidates.push_back({sol.grid[i], sign[i - 1] * sign[i + 1] < 0});
            continue;
        }
        if (cell_flip[i - 1] || cell_flip[i]) continue;
        if (smin[i] < smin[i - 1] && smin[i] <= smin[i + 1]) {
            constexpr double invphi = 0.6180339887498949;
            double a = sol.grid[i - 1], b = sol.grid[i + 1];
            double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
            double f1 = probe_smin(x1), f2 = probe_smin(x2);
            while (b - a > kRefineWidth) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - invphi * (b - a);
                    f1 = probe_smin(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + invphi * (b - a);
                    f2 = probe_smin(x2);
                }
            }
            candidates.push_back({0.5 * (a + b), false});
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    std::vector<Candidate> merged;
    for (const Candidate& c : candidates) {
        if (!merged.empty() && c.t - merged.back().t <= kMergeTol) {
            merged.back().parity_odd = merged.back().parity_odd || c.parity_odd;
        } else {
            merged.push_back(c);
        }
    }

    ConjugateReport report;
    report.nondegenerate = smin[steps] > threshold;
    for (const Candidate& c : merged) {
        Eigen::MatrixXd j, jp;
        sol.eval_at(c.t, j, jp);
        int multiplicity = 0;
        if (sol.dim() == 1) {
            multiplicity = std::abs(j(0, 0)) <= threshold ? 1 : 0;
        } else {
            const Eigen::VectorXd sv = j.jacobiSvd().singularValues();
            multiplicity = static_cast<int>((sv.array() <= threshold).count());
        }
        if (multiplicity == 0) continue;  // dip that never reached the tolerance
        if ((multiplicity % 2 == 1) != c.parity_odd) {
            std::ostringstream msg;
            msg << "multiplicity " << multiplicity << " near t=" << c.t
                << " contradicts the determinant sign pattern of its bracket; conjugate"
                << " instants are likely unresolved at steps=" << steps
                << ", re-solve with more steps";
            throw UnresolvedClusterError(msg.str());
        }
        if (c.t >= 1.0 - kEndpointFold) {
            report.nondegenerate = false;
            continue;
        }
        report.points.push_back({c.t, multiplicity});
        report.total += multiplicity;
    }
    return report;
}

std::vector<KernelField> kernel_fields(const JacobiSolution& sol, double t0, double kernel_tol) {
    if (!(kernel_tol > 0.0))
        throw std::invalid_argument("kernel_fields: kernel_tol must be positive");
    if (!(t0 > 0.0 && t0 <= 1.0))
        throw std::invalid_argument("kernel_fields: t0 must lie in (0, 1]");

    Eigen::MatrixXd j, jp;
    sol.eval_at(t0, j, jp);
    const double threshold = kernel_tol * sol.path_scale;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();

    std::vector<KernelField> fields;
    for (int k = sol.dim() - 1; k >= 0; --k) {  // ascending singular value
        if (sv(k) > threshold) break;
        KernelField f;
        f.v = svd.matrixV().col(k);
        normalize_sign(f.v);
        f.u_prime_end = t0 * (jp * f.v);
        fields.push_back(std::move(f));
    }
    if (fields.empty()) {
        std::ostringstream msg;
        msg << "J(t0) has full numerical rank at t0=" << t0 << " (smallest singular value "
            << sv(sol.dim() - 1) << ", threshold " << threshold << ")";
        throw NotAConjugateInstantError(msg.str());
    }
    return fields;
}

}  // namespace geoindex::jacobi
