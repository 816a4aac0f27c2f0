#include "geoindex/indexform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace geoindex::indexform {

namespace {

constexpr double kMinUPrimeNorm = 1e-6;  // per unit kernel vector

void validate_basis(const CurvatureProfile& s, const GalerkinBasis& basis) {
    if (s.n_normal < 1 || !s.eval) throw std::invalid_argument("empty curvature profile");
    if (basis.fiber_dim != s.n_normal)
        throw std::invalid_argument("basis fiber_dim does not match the profile");
    if (basis.modes < 1) throw std::invalid_argument("basis needs at least one mode");
    if (basis.quad_panels < 2) throw std::invalid_argument("need at least two quadrature panels");
}

// Composite Simpson weights on 2*panels + 1 equispaced nodes over [0, 1].
std::vector<double> simpson_weights(int panels) {
    const int nodes = 2 * panels + 1;
    std::vector<double> w(nodes);
    const double unit = 1.0 / (6.0 * panels);
    for (int m = 0; m < nodes; ++m) {
        if (m == 0 || m == nodes - 1) {
            w[m] = unit;
        } else {
            w[m] = (m % 2 == 1) ? 4.0 * unit : 2.0 * unit;
        }
    }
    return w;
}

}  // namespace

SymMatrix assemble(const CurvatureProfile& s, double lambda, const GalerkinBasis& basis) {
    validate_basis(s, basis);
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("assemble: lambda must lie in [0, 1]");

    const int n = s.n_normal;
    const int modes = basis.modes;
    const int panels = basis.quad_panels;
    const int nodes = 2 * panels + 1;
    const std::vector<double> w = simpson_weights(panels);

    // mom[q] = int S(lambda x) cos(q pi x) dx, q = 0 .. 2 modes
    std::vector<Eigen::MatrixXd> mom(2 * modes + 1, Eigen::MatrixXd::Zero(n, n));
    for (int m = 0; m < nodes; ++m) {
        const double x = static_cast<double>(m) / (2 * panels);
        const Eigen::MatrixXd ws = w[m] * s.eval(lambda * x).mat();
        const double c1 = std::cos(M_PI * x);
        // three-term recurrence cos(q th) = 2 cos(th) cos((q-1) th) - cos((q-2) th)
        double c_prev = 1.0, c_cur = c1;
        mom[0] += ws;
        if (modes >= 1) mom[1] += c1 * ws;
        for (int q = 2; q <= 2 * modes; ++q) {
            const double c_next = 2.0 * c1 * c_cur - c_prev;
            c_prev = c_cur;
            c_cur = c_next;
            mom[q] += c_cur * ws;
        }
    }

    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n * modes, n * modes);
    const double factor = lambda * lambda / (M_PI * M_PI);
    for (int k = 1; k <= modes; ++k) {
        for (int l = 1; l <= modes; ++l) {
            g.block((k - 1) * n, (l - 1) * n, n, n) -=
                (factor / (k * l)) * (mom[std::abs(k - l)] - mom[k + l]);
        }
    }
    return SymMatrix(g);
}

SymMatrixPath assemble_path(const CurvatureProfile& s, const GalerkinBasis& basis) {
    validate_basis(s, basis);
    SymMatrixPath path;
    path.dim = basis.size();
    path.eval = [s, basis](double lambda) { return assemble(s, lambda, basis); };
    path.smoothness_hint = spectral::Defaults::grid_size;
    return path;
}

int galerkin_index(const CurvatureProfile& s, double lambda, const GalerkinBasis& basis,
                   double zero_tol) {
    const SymMatrix g = assemble(s, lambda, basis);
    const spectral::MorseCount count = spectral::morse_count(g, zero_tol);
    if (count.nullity > 0) {
        std::ostringstream msg;
        msg << "assembled form at lambda=" << lambda << " has " << count.nullity
            << " eigenvalue(s) within " << zero_tol
            << " of zero; the parameter is numerically a crossing";
        throw DegenerateFormError(msg.str());
    }
    return count.index;
}

std::vector<double> crossing_form_closed(const jacobi::JacobiSolution& sol, double lambda0,
                                         double kernel_tol) {
    if (!(lambda0 > 0.0 && lambda0 < 1.0))
        throw std::invalid_argument("crossing_form_closed: lambda0 must lie in (0, 1)");
    std::vector<jacobi::KernelField> fields;
    try {
        fields = jacobi::kernel_fields(sol, lambda0, kernel_tol);
    } catch (const NotAConjugateInstantError& e) {
        throw NotACrossingError(e.what());
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (const jacobi::KernelField& f : fields)
        values.push_back(-f.u_prime_end.squaredNorm() / lambda0);
    return values;
}

H1Function kernel_h1_function(const jacobi::JacobiSolution& sol, double t0,
                              const Eigen::VectorXd& v) {
    if (!(t0 > 0.0 && t0 <= 1.0))
        throw std::invalid_argument("kernel_h1_function: t0 must lie in (0, 1]");
    if (v.size() != sol.dim())
        throw std::invalid_argument("kernel_h1_function: vector size does not match");
    H1Function f;
    f.value = [&sol, t0, v](double x) -> Eigen::VectorXd {
        Eigen::MatrixXd j, jp;
        sol.eval_at(t0 * x, j, jp);
        return j * v;
    };
    f.deriv = [&sol, t0, v](double x) -> Eigen::VectorXd {
        Eigen::MatrixXd j, jp;
        sol.eval_at(t0 * x, j, jp);
        return t0 * (jp * v);
    };
    return f;
}

std::vector<double> crossing_form_fd(const CurvatureProfile& s, double lambda0,
                                     const std::vector<H1Function>& kernel, double h,
                                     int quad_panels) {
    if (s.n_normal < 1 || !s.eval) throw std::invalid_argument("empty curvature profile");
    if (kernel.empty()) throw std::invalid_argument("crossing_form_fd: no kernel functions");
    if (!(h > 0.0)) throw std::invalid_argument("crossing_form_fd: h must be positive");
    if (!(lambda0 - h > 0.0 && lambda0 + h <= 1.0))
        throw std::invalid_argument("crossing_form_fd: lambda0 +/- h must stay inside (0, 1]");
    if (quad_panels < 2) throw std::invalid_argument("need at least two quadrature panels");

    const int nodes = 2 * quad_panels + 1;
    const std::vector<double> w = simpson_weights(quad_panels);

    // q_lambda(u) node-by-node for both offsets and all kernel functions;
    // the profile is sampled once per (lambda, node) pair.
    std::vector<double> q_plus(kernel.size(), 0.0), q_minus(kernel.size(), 0.0);
    for (int side = 0; side < 2; ++side) {
        const double lambda = side == 0 ? lambda0 + h : lambda0 - h;
        std::vector<double>& q = side == 0 ? q_plus : q_minus;
        for (int m = 0; m < nodes; ++m) {
            const double x = static_cast<double>(m) / (2 * quad_panels);
            const Eigen::MatrixXd sm = s.eval(lambda * x).mat();
            for (std::size_t f = 0; f < kernel.size(); ++f) {
                const Eigen::VectorXd u = kernel[f].value(x);
                const Eigen::VectorXd up = kernel[f].deriv(x);
                q[f] += w[m] * (up.squaredNorm() - lambda * lambda * u.dot(sm * u));
            }
        }
    }

    std::vector<double> out(kernel.size());
    for (std::size_t f = 0; f < kernel.size(); ++f) out[f] = (q_plus[f] - q_minus[f]) / (2.0 * h);
    return out;
}

IndexReport verify_theorem(const CurvatureProfile& s, const GalerkinBasis& basis,
                           const VerifyOptions& opts) {
    validate_basis(s, basis);

    const jacobi::JacobiSolution sol = jacobi::solve_jacobi(s, opts.steps);
    const jacobi::ConjugateReport conj = jacobi::conjugate_points(sol, opts.kernel_tol);
    if (!conj.nondegenerate)
        throw DegenerateGeodesicError(
            "the right endpoint is conjugate to the left one; the index count is undefined");

    const spectral::MorseCount at_zero =
        spectral::morse_count(assemble(s, 0.0, basis), opts.zero_tol);
    if (at_zero.index != 0 || at_zero.nullity != 0)
        throw Error("internal", "the form at lambda = 0 must be positive definite");

    IndexReport report;
    report.mu_galerkin = galerkin_index(s, 1.0, basis, opts.zero_tol);
    report.conjugate_total = conj.total;

    for (const jacobi::ConjugatePoint& pt : conj.points) {
        const std::vector<jacobi::KernelField> fields =
            jacobi::kernel_fields(sol, pt.t, opts.kernel_tol);
        if (static_cast<int>(fields.size()) != pt.multiplicity) {
            std::ostringstream msg;
            msg << "kernel dimension " << fields.size() << " at lambda0=" << pt.t
                << " does not match the reported multiplicity " << pt.multiplicity;
            throw ResolutionError("kernel-mismatch", msg.str());
        }

        CrossingDiagnostic diag;
        diag.lambda0 = pt.t;
        diag.multiplicity = pt.multiplicity;
        diag.closed_form = crossing_form_closed(sol, pt.t, opts.kernel_tol);

        std::vector<H1Function> fns;
        fns.reserve(fields.size());
        for (const jacobi::KernelField& f : fields) {
            if (f.u_prime_end.norm() < kMinUPrimeNorm * f.v.norm()) {
                std::ostringstream msg;
                msg << "kernel field at lambda0=" << pt.t
                    << " has endpoint derivative norm below " << kMinUPrimeNorm
                    << "; the crossing form is numerically singular";
                throw IrregularCrossingError(msg.str());
            }
            fns.push_back(kernel_h1_function(sol, pt.t, f.v));
        }
        // keep the finite-difference stencil inside (0, 1]
        const double h = std::min(opts.fd_step, 0.25 * std::min(pt.t, 1.0 - pt.t));
        diag.finite_diff = crossing_form_fd(s, pt.t, fns, h, basis.quad_panels);

        for (std::size_t i = 0; i < diag.closed_form.size(); ++i) {
            const double closed = diag.closed_form[i];
            const double fd = diag.finite_diff[i];
            if (!(closed < 0.0)) {
                std::ostringstream msg;
                msg << "closed-form crossing value " << closed << " at lambda0=" << pt.t
                    << " is not strictly negative";
                throw IrregularCrossingError(msg.str());
            }
            if (std::abs(closed - fd) > opts.fd_rel_tol * std::max(std::abs(closed), 1e-6)) {
                std::ostringstream msg;
                msg << "crossing-form routes disagree at lambda0=" << pt.t << ": closed " << closed
                    << " vs finite-difference " << fd;
                throw ResolutionError("oracle-mismatch", msg.str());
            }
        }
        report.crossing_signature_sum -= pt.multiplicity;
        report.diagnostics.push_back(std::move(diag));
    }

    report.agree = report.mu_galerkin == report.conjugate_total &&
                   report.conjugate_total == -report.crossing_signature_sum;
    return report;
}

}  // namespace geoindex::indexform
