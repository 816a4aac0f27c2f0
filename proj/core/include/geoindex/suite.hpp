#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoindex/indexform.hpp"
#include "geoindex/profile.hpp"
#include "geoindex/rng.hpp"

namespace geoindex::suite {

// One verification trial: the profile draw that ran to completion, plus how
// many endpoint-degenerate draws were discarded to get there.
struct TrialResult {
    int trial = 0;
    int fiber_dim = 0;
    int redraws = 0;
    indexform::IndexReport report;
};

struct SuiteReport {
    std::string rng_name;
    std::uint64_t seed = 0;
    int requested = 0;
    int total_redraws = 0;
    bool all_agree = false;
    std::vector<TrialResult> trials;  // ordered by trial index
};

struct SuiteOptions {
    int modes = indexform::Defaults::modes;  // per fiber dimension
    int quad_panels = indexform::Defaults::quad_panels;
    indexform::VerifyOptions verify;
    int workers = 0;       // 0 = one per hardware thread
    int max_redraws = 32;  // per trial, before the degeneracy propagates
};

// Random smooth profile S(x) = Q^T diag(a_i + b_i sin(pi x + phi_i)) Q with
// |a_i|, |b_i| <= (3 pi)^2 and Q a random orthogonal matrix.
CurvatureProfile random_profile(rng::Rng& rng, int fiber_dim);

// Run `count` independent verification trials on random profiles with fiber
// dimension drawn from {1, 2, 3}.  Every trial draws its own seed up front,
// so the report does not depend on worker scheduling.  Profiles whose
// endpoint is degenerate at tolerance are re-drawn and counted; a trial whose
// conjugate instants fall closer than the step grid is retried once with
// verify.steps * 8 before the cluster error propagates; any other failure
// propagates, smallest trial index first.
SuiteReport run_random_verification(int count, std::uint64_t seed,
                                    const SuiteOptions& options = {});

}  // namespace geoindex::suite
