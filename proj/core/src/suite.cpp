#include "geoindex/suite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "geoindex/errors.hpp"

namespace geoindex::suite {

CurvatureProfile random_profile(rng::Rng& rng, int fiber_dim) {
    if (fiber_dim < 1) throw std::invalid_argument("fiber_dim must be positive");
    const double cap = 9.0 * M_PI * M_PI;
    Eigen::VectorXd a(fiber_dim), b(fiber_dim), phi(fiber_dim);
    for (int i = 0; i < fiber_dim; ++i) {
        a(i) = rng.uniform(-cap, cap);
        b(i) = rng.uniform(-cap, cap);
        phi(i) = rng.uniform(0.0, 2.0 * M_PI);
    }
    const Eigen::MatrixXd q = rng.random_orthogonal(fiber_dim);
    CurvatureProfile profile;
    profile.n_normal = fiber_dim;
    profile.eval = [a, b, phi, q, fiber_dim](double x) {
        Eigen::VectorXd d(fiber_dim);
        for (int i = 0; i < fiber_dim; ++i) d(i) = a(i) + b(i) * std::sin(M_PI * x + phi(i));
        return SymMatrix(q.transpose() * d.asDiagonal() * q);
    };
    return profile;
}

namespace {

TrialResult run_trial(int trial, std::uint64_t trial_seed, const SuiteOptions& options) {
    rng::Rng rng(trial_seed);
    TrialResult result;
    result.trial = trial;
    for (;;) {
        const int n = rng.uniform_int(1, 3);
        const CurvatureProfile s = random_profile(rng, n);
        const indexform::GalerkinBasis basis{n, options.modes, options.quad_panels};
        try {
            try {
                result.report = indexform::verify_theorem(s, basis, options.verify);
            } catch (const UnresolvedClusterError&) {
                // instants closer than the step grid; one escalation before giving up
                indexform::VerifyOptions finer = options.verify;
                finer.steps *= 8;
                result.report = indexform::verify_theorem(s, basis, finer);
            }
        } catch (const DegenerateError&) {
            if (++result.redraws > options.max_redraws) throw;
            continue;
        }
        result.fiber_dim = n;
        return result;
    }
}

}  // namespace

SuiteReport run_random_verification(int count, std::uint64_t seed, const SuiteOptions& options) {
    if (count < 1) throw std::invalid_argument("trial count must be positive");

    rng::Rng master(seed);
    std::vector<std::uint64_t> trial_seeds(count);
    for (auto& s : trial_seeds) s = master.raw();

    SuiteReport report;
    report.rng_name = rng::Rng::name();
    report.seed = seed;
    report.requested = count;
    report.trials.resize(count);
    std::vector<std::exception_ptr> failures(count);

    int workers = options.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, count);

    std::atomic<int> next{0};
    const auto body = [&] {
        for (;;) {
            const int trial = next.fetch_add(1);
            if (trial >= count) return;
            try {
                report.trials[trial] = run_trial(trial, trial_seeds[trial], options);
            } catch (...) {
                failures[trial] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(body);
        for (auto& worker : pool) worker.join();
    }

    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    report.all_agree = true;
    for (const auto& trial : report.trials) {
        report.total_redraws += trial.redraws;
        if (!trial.report.agree) report.all_agree = false;
    }
    return report;
}

}  // namespace geoindex::suite
