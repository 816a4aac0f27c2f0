// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances and budgets are pinned here on purpose; loosening them is a
// contract change, not a tuning knob.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <geoindex/errors.hpp>
#include <geoindex/geometry.hpp>
#include <geoindex/indexform.hpp>
#include <geoindex/jacobi.hpp>
#include <geoindex/profile.hpp>
#include <geoindex/rng.hpp>
#include <geoindex/spectral.hpp>
#include <geoindex/suite.hpp>
#include <geoindex/sym.hpp>

namespace {

using namespace geoindex;

constexpr std::uint64_t kSuiteSeed = 20260819;

class Check {
public:
    void that(bool ok, const std::string& what) {
        if (ok) return;
        if (++failed_ <= 8) detail_ << (failed_ > 1 ? "; " : "") << what;
    }
    bool passed() const { return failed_ == 0; }
    std::string detail() const {
        return failed_ > 8 ? detail_.str() + "; ... (" + std::to_string(failed_) + " failures)"
                           : detail_.str();
    }

private:
    int failed_ = 0;
    std::ostringstream detail_;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

CurvatureProfile constant_profile(int n, double value) {
    return {n, [n, value](double) {
                return SymMatrix(value * Eigen::MatrixXd::Identity(n, n));
            }};
}

// ---------------------------------------------------------------------------
// 1. Constant profile (2.5 pi)^2 I_n for n = 1 and 2: instants {0.4, 0.8} to
//    1e-6, conjugate total = Galerkin index = -signature sum = 2n, and the
//    Galerkin index is already exact at N = 4.  Budget 5 s.
// ---------------------------------------------------------------------------
void criterion_sphere_oracle(Check& check, std::vector<indexform::IndexReport>& out) {
    const double c = 2.5 * M_PI;
    for (int n : {1, 2}) {
        const CurvatureProfile s = constant_profile(n, c * c);
        const indexform::GalerkinBasis basis{n, 128, 4096};
        const auto report = indexform::verify_theorem(s, basis);
        const std::string tag = "n=" + std::to_string(n) + ": ";

        check.that(report.agree, tag + "routes disagree");
        check.that(report.conjugate_total == 2 * n,
                   tag + "conjugate total " + std::to_string(report.conjugate_total));
        check.that(report.mu_galerkin == 2 * n,
                   tag + "galerkin index " + std::to_string(report.mu_galerkin));
        check.that(report.crossing_signature_sum == -2 * n,
                   tag + "signature sum " + std::to_string(report.crossing_signature_sum));
        check.that(report.diagnostics.size() == 2,
                   tag + std::to_string(report.diagnostics.size()) + " instants");
        if (report.diagnostics.size() == 2) {
            const double expected[2] = {0.4, 0.8};
            for (int i = 0; i < 2; ++i) {
                const auto& d = report.diagnostics[i];
                check.that(std::abs(d.lambda0 - expected[i]) <= 1e-6,
                           tag + "instant " + fmt(d.lambda0) + " vs " + fmt(expected[i]));
                check.that(d.multiplicity == n,
                           tag + "multiplicity " + std::to_string(d.multiplicity));
            }
        }
        check.that(indexform::galerkin_index(s, 1.0, {n, 4, 4096}) == 2 * n,
                   tag + "index not exact at N=4");
        out.push_back(report);
    }
}

// ---------------------------------------------------------------------------
// 2. S = 0 and S = -c^2 I: index 0, no conjugate instants, empty crossing
//    set.  Budget 1 s.
// ---------------------------------------------------------------------------
void criterion_nonpositive(Check& check) {
    const struct {
        const char* tag;
        double value;
    } cases[] = {{"flat: ", 0.0}, {"negative: ", -4.0}};
    for (const auto& c : cases) {
        const CurvatureProfile s = constant_profile(2, c.value);
        const auto conj = jacobi::conjugate_points(jacobi::solve_jacobi(s, 1000));
        check.that(conj.nondegenerate, std::string(c.tag) + "degenerate endpoint");
        check.that(conj.total == 0 && conj.points.empty(),
                   std::string(c.tag) + std::to_string(conj.total) + " conjugate instants");

        const indexform::GalerkinBasis basis{2, 32, 512};
        check.that(indexform::galerkin_index(s, 1.0, basis) == 0,
                   std::string(c.tag) + "nonzero index");
        const auto crossings = spectral::find_crossings(indexform::assemble_path(s, basis), 256);
        check.that(crossings.empty(),
                   std::string(c.tag) + std::to_string(crossings.size()) + " crossings");
    }
}

// ---------------------------------------------------------------------------
// 3. 50 random smooth profiles, fiber dimension in {1, 2, 3}, N = 128,
//    2000 integration steps: every completed trial agrees and at most 10%
//    of the trials needed a degenerate redraw.  Budget 180 s.
// ---------------------------------------------------------------------------
void criterion_random_suite(Check& check, suite::SuiteReport& out) {
    suite::SuiteOptions options;
    options.modes = 128;
    options.quad_panels = 4096;
    out = suite::run_random_verification(50, kSuiteSeed, options);

    check.that(static_cast<int>(out.trials.size()) == 50,
               std::to_string(out.trials.size()) + " trials completed");
    check.that(out.all_agree, "a trial disagreed");
    for (const auto& trial : out.trials)
        check.that(trial.report.agree, "trial " + std::to_string(trial.trial) + " disagrees");
    check.that(out.total_redraws <= 5,
               std::to_string(out.total_redraws) + " redraws exceeds 10%");
}

// ---------------------------------------------------------------------------
// 4. At every crossing recorded by criteria 1 and 3, the closed-form
//    derivative is strictly negative and the finite-difference oracle
//    matches it within 1e-3 relative.
// ---------------------------------------------------------------------------
void criterion_crossing_forms(Check& check, const std::vector<indexform::IndexReport>& oracles,
                              const suite::SuiteReport& suite_report) {
    int checked = 0;
    const auto walk = [&](const indexform::IndexReport& report, const std::string& tag) {
        for (const auto& d : report.diagnostics) {
            check.that(d.closed_form.size() == d.finite_diff.size() &&
                           static_cast<int>(d.closed_form.size()) == d.multiplicity,
                       tag + "ragged diagnostic at " + fmt(d.lambda0));
            for (std::size_t i = 0; i < d.closed_form.size(); ++i) {
                const double closed = d.closed_form[i];
                const double fd = d.finite_diff[i];
                ++checked;
                check.that(closed < 0.0, tag + "closed form " + fmt(closed) + " not negative");
                check.that(std::abs(closed - fd) <= 1e-3 * std::abs(closed),
                           tag + "routes differ at " + fmt(d.lambda0) + ": " + fmt(closed) +
                               " vs " + fmt(fd));
            }
        }
    };
    for (std::size_t i = 0; i < oracles.size(); ++i)
        walk(oracles[i], "oracle " + std::to_string(i) + ": ");
    for (const auto& trial : suite_report.trials)
        walk(trial.report, "trial " + std::to_string(trial.trial) + ": ");
    check.that(checked > 0, "no crossings were recorded upstream");
}

// ---------------------------------------------------------------------------
// 5. 100 paths with planted regular crossings: the crossing identity holds
//    exactly against the planted index drop.  Budget 30 s.
// ---------------------------------------------------------------------------
struct PlantedPath {
    Eigen::VectorXd slopes, roots;  // size k
    Eigen::VectorXd constants;      // size n - k
    Eigen::MatrixXd perturbation;   // n x n symmetric

    SymMatrixPath path() const {
        const int n = static_cast<int>(slopes.size() + constants.size());
        return SymMatrixPath{n,
                             [*this, n](double lambda) {
                                 Eigen::MatrixXd m = perturbation;
                                 for (int i = 0; i < slopes.size(); ++i)
                                     m(i, i) += slopes(i) * (lambda - roots(i));
                                 for (int i = 0; i < constants.size(); ++i)
                                     m(slopes.size() + i, slopes.size() + i) += constants(i);
                                 return SymMatrix(m);
                             },
                             512};
    }
};

PlantedPath draw_planted(rng::Rng& rng) {
    const int n = rng.uniform_int(2, 8);
    const int k = rng.uniform_int(1, n);
    PlantedPath p;
    p.slopes.resize(k);
    p.roots.resize(k);
    p.constants.resize(n - k);
    for (int i = 0; i < k; ++i) {
        const double mag = rng.uniform(0.5, 2.0);
        p.slopes(i) = rng.unit() < 0.5 ? -mag : mag;
    }
    for (;;) {
        for (int i = 0; i < k; ++i) p.roots(i) = rng.uniform(0.05, 0.95);
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k; ++j)
                if (std::abs(p.roots(i) - p.roots(j)) < 0.02) ok = false;
        if (ok) break;
    }
    for (int i = 0; i < n - k; ++i) {
        const double mag = rng.uniform(0.5, 2.0);
        p.constants(i) = rng.unit() < 0.5 ? -mag : mag;
    }
    const Eigen::MatrixXd g = rng.gaussian_matrix(n, n);
    p.perturbation = 1e-4 * 0.5 * (g + g.transpose());
    return p;
}

void criterion_planted_identity(Check& check) {
    rng::Rng rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const PlantedPath p = draw_planted(rng);
        const std::string tag = "trial " + std::to_string(trial) + ": ";
        const auto result = spectral::crossing_sum_identity(p.path());

        int planted_drop = 0;
        for (int i = 0; i < p.slopes.size(); ++i) planted_drop += p.slopes(i) > 0.0 ? 1 : -1;

        check.that(result.equal, tag + "identity fails");
        check.that(result.index_drop == planted_drop,
                   tag + "drop " + std::to_string(result.index_drop) + " vs planted " +
                       std::to_string(planted_drop));
        check.that(static_cast<int>(result.crossings.size()) == p.slopes.size(),
                   tag + std::to_string(result.crossings.size()) + " crossings vs " +
                       std::to_string(p.slopes.size()) + " planted");
        for (const auto& crossing : result.crossings) {
            int nearest = 0;
            for (int i = 1; i < p.roots.size(); ++i)
                if (std::abs(p.roots(i) - crossing.lambda0) <
                    std::abs(p.roots(nearest) - crossing.lambda0))
                    nearest = i;
            check.that(std::abs(p.roots(nearest) - crossing.lambda0) <= 0.01,
                       tag + "crossing " + fmt(crossing.lambda0) + " matches no root");
            check.that(crossing.kernel_dim() == 1,
                       tag + "kernel dim " + std::to_string(crossing.kernel_dim()));
            const int expected_sign = p.slopes(nearest) > 0.0 ? 1 : -1;
            check.that(crossing.signature == expected_sign,
                       tag + "signature " + std::to_string(crossing.signature) + " at " +
                           fmt(crossing.lambda0));
        }
    }
}

// ---------------------------------------------------------------------------
// 6. Morse index properties, 100 trials each at n <= 8, exact: invariance
//    under orthogonal conjugation, additivity over block sums, constancy
//    along crossing-free homotopies.
// ---------------------------------------------------------------------------
SymMatrix random_safe(rng::Rng& rng, int n, double* gap = nullptr) {
    for (;;) {
        const Eigen::MatrixXd g = rng.gaussian_matrix(n, n);
        const SymMatrix m(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(), Eigen::EigenvaluesOnly);
        const double smallest = es.eigenvalues().cwiseAbs().minCoeff();
        if (smallest > 1e-6) {
            if (gap) *gap = smallest;
            return m;
        }
    }
}

void criterion_morse_properties(Check& check) {
    rng::Rng rng(606);
    constexpr double tol = 1e-9;

    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        const SymMatrix m = random_safe(rng, n);
        const Eigen::MatrixXd u = rng.random_orthogonal(n);
        const SymMatrix conjugated(u.transpose() * m.mat() * u);
        check.that(spectral::morse_index(conjugated, tol) == spectral::morse_index(m, tol),
                   "conjugation trial " + std::to_string(trial));
    }

    for (int trial = 0; trial < 100; ++trial) {
        const int na = rng.uniform_int(1, 4);
        const int nb = rng.uniform_int(1, 4);
        const SymMatrix a = random_safe(rng, na);
        const SymMatrix b = random_safe(rng, nb);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(na + nb, na + nb);
        block.topLeftCorner(na, na) = a.mat();
        block.bottomRightCorner(nb, nb) = b.mat();
        check.that(spectral::morse_index(SymMatrix(block), tol) ==
                       spectral::morse_index(a, tol) + spectral::morse_index(b, tol),
                   "additivity trial " + std::to_string(trial));
    }

    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        double gap = 0.0;
        const SymMatrix m = random_safe(rng, n, &gap);
        const Eigen::MatrixXd g = rng.gaussian_matrix(n, n);
        const SymMatrix raw(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(raw.mat(), Eigen::EigenvaluesOnly);
        const double norm = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
        const Eigen::MatrixXd p = (0.45 * gap / norm) * raw.mat();

        const int index_at_start = spectral::morse_index(m, tol);
        bool constant = true;
        for (int i = 0; i <= 20; ++i) {
            const SymMatrix along(m.mat() + (i / 20.0) * p);
            if (spectral::morse_index(along, tol) != index_at_start) constant = false;
        }
        check.that(constant, "homotopy trial " + std::to_string(trial));
    }
}

// ---------------------------------------------------------------------------
// 7. Geometry pipeline: metric speed conserved to 1e-8 relative, RK4 error
//    contracts by the fourth-order factor under step halving, and the
//    coordinate pipeline reproduces the space-form profiles to 1e-6 * c^2.
// ---------------------------------------------------------------------------
double metric_norm(const Eigen::Matrix2d& g, const Eigen::Vector2d& v) {
    return std::sqrt(v.dot(g * v));
}

void criterion_geometry(Check& check) {
    const auto& halfplane = geom::catalog_entry("halfplane-metric2d");
    const auto& hp = std::get<geom::Metric2D>(halfplane.spec);
    const double c = 2.5 * M_PI;

    const auto rec = geom::shoot_geodesic(hp, halfplane.start, c * halfplane.direction, 2000);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.grid.size(); ++i) {
        const Eigen::Matrix2d g = geom::metric_at(hp, rec.position[i]);
        worst = std::max(worst, std::abs(metric_norm(g, rec.velocity[i]) - c) / c);
    }
    check.that(worst <= 1e-8, "speed drifts by " + fmt(worst) + " relative");

    const double c2 = 2.0;  // exact endpoint y(1) = exp(c2)
    const auto coarse = geom::shoot_geodesic(hp, halfplane.start, c2 * halfplane.direction, 100);
    const auto fine = geom::shoot_geodesic(hp, halfplane.start, c2 * halfplane.direction, 200);
    const double exact = std::exp(c2);
    const double factor = std::abs(coarse.position.back().y() - exact) /
                          std::abs(fine.position.back().y() - exact);
    check.that(factor >= 12.0 && factor <= 20.0,
               "halving factor " + fmt(factor) + " outside [12, 20]");

    const struct {
        const char* metric;
        const char* form;
    } pairs[] = {{"sphere-metric2d", "sphere-constcurv"},
                 {"halfplane-metric2d", "hyperbolic-constcurv"}};
    for (const auto& pair : pairs) {
        const auto& entry = geom::catalog_entry(pair.metric);
        const auto& metric = std::get<geom::Metric2D>(entry.spec);
        auto record = geom::shoot_geodesic(metric, entry.start, c * entry.direction, 2000);
        geom::parallel_frame(metric, record);
        const CurvatureProfile via_metric = geom::curvature_profile(entry.spec, record);
        const CurvatureProfile via_form = geom::curvature_profile(
            geom::catalog_entry(pair.form).spec, geom::synthetic_record(2, c, 2000));

        double deviation = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            deviation =
                std::max(deviation, std::abs(via_metric.eval(x)(0, 0) - via_form.eval(x)(0, 0)));
        }
        check.that(deviation <= 1e-6 * c * c, std::string(pair.metric) + " deviates by " +
                                                  fmt(deviation) + " from " + pair.form);
    }
}

// ---------------------------------------------------------------------------
// 8. For every profile of criterion 3, the crossings of the assembled family
//    coincide with the conjugate instants: same count, parameters within
//    1e-6, matching multiplicities.
// ---------------------------------------------------------------------------
void criterion_crossings_match_instants(Check& check, const suite::SuiteReport& suite_report) {
    rng::Rng master(kSuiteSeed);
    std::vector<std::uint64_t> trial_seeds(suite_report.trials.size());
    for (auto& s : trial_seeds) s = master.raw();

    for (const auto& trial : suite_report.trials) {
        rng::Rng rng(trial_seeds[trial.trial]);
        int n = 0;
        CurvatureProfile s;
        for (int draw = 0; draw <= trial.redraws; ++draw) {
            n = rng.uniform_int(1, 3);
            s = suite::random_profile(rng, n);
        }
        const std::string tag = "trial " + std::to_string(trial.trial) + ": ";

        const auto path = indexform::assemble_path(s, {n, 64, 2048});
        std::vector<Crossing> crossings;
        bool resolved = false;
        try {
            for (int grid : {512, 2048, 8192}) {
                try {
                    crossings = spectral::find_crossings(path, grid);
                    resolved = true;
                    break;
                } catch (const UnresolvedClusterError&) {
                    if (grid == 8192) throw;
                }
            }
        } catch (const Error& e) {
            check.that(false, tag + e.what());
            continue;
        }
        check.that(resolved, tag + "crossings unresolved");

        const auto& instants = trial.report.diagnostics;
        check.that(crossings.size() == instants.size(),
                   tag + std::to_string(crossings.size()) + " crossings vs " +
                       std::to_string(instants.size()) + " instants");
        if (crossings.size() != instants.size()) continue;
        for (std::size_t i = 0; i < crossings.size(); ++i) {
            check.that(std::abs(crossings[i].lambda0 - instants[i].lambda0) <= 1e-6,
                       tag + "crossing " + fmt(crossings[i].lambda0) + " vs instant " +
                           fmt(instants[i].lambda0));
            check.that(crossings[i].kernel_dim() == instants[i].multiplicity,
                       tag + "multiplicity " + std::to_string(crossings[i].kernel_dim()) +
                           " vs " + std::to_string(instants[i].multiplicity) + " at " +
                           fmt(instants[i].lambda0));
        }
    }
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* label;
        double budget_sec;  // 0 = unbudgeted
        std::function<void(Check&)> run;
    };

    std::vector<indexform::IndexReport> oracle_reports;
    suite::SuiteReport suite_report;

    const std::vector<Row> rows = {
        {1, "constant-curvature oracle, fibers 1 and 2", 5.0,
         [&](Check& c) { criterion_sphere_oracle(c, oracle_reports); }},
        {2, "flat and negative profiles have index 0", 1.0, criterion_nonpositive},
        {3, "random verification suite, 50 trials", 180.0,
         [&](Check& c) { criterion_random_suite(c, suite_report); }},
        {4, "derivative routes agree at every crossing", 0.0,
         [&](Check& c) { criterion_crossing_forms(c, oracle_reports, suite_report); }},
        {5, "planted crossing identity, 100 paths", 30.0, criterion_planted_identity},
        {6, "morse index properties, 100 trials each", 0.0, criterion_morse_properties},
        {7, "geometry pipeline oracles", 0.0, criterion_geometry},
        {8, "assembled crossings match conjugate instants", 0.0,
         [&](Check& c) { criterion_crossings_match_instants(c, suite_report); }},
    };

    int failures = 0;
    for (const auto& row : rows) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            row.run(check);
        } catch (const std::exception& e) {
            check.that(false, std::string("unhandled: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        std::string detail = check.detail();
        bool pass = check.passed();
        if (row.budget_sec > 0.0 && seconds > row.budget_sec) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += "took " + fmt(seconds) + " s, budget " + fmt(row.budget_sec) + " s";
        }
        std::printf("%s  %d  %-46s (%.2f s)\n", pass ? "PASS" : "FAIL", row.id, row.label,
                    seconds);
        if (!pass) {
            std::printf("         %s\n", detail.c_str());
            ++failures;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(rows.size()) - failures,
                rows.size());
    return failures == 0 ? 0 : 1;
}
