#pragma once

#include <string>
#include <vector>

#include "geoindex/errors.hpp"
#include "geoindex/indexform.hpp"
#include "geoindex/jacobi.hpp"
#include "geoindex/spectral.hpp"
#include "geoindex/suite.hpp"
#include "geoindex/sym.hpp"

// Renderers for the computation results.  Every function returns the full
// document as a string; writing it anywhere is the caller's business.
//
// JSON documents carry "schema": 1 and a "kind" discriminator, use sorted
// keys and a two-space indent, and round-trip byte-identically through
// parse + re-serialize.  Text is for terminals; CSV is a single rectangular
// table per document, with exact (17 significant digit) floats for external
// plotting.
namespace geoindex::report {

std::string conjugate_text(const jacobi::ConjugateReport& rep);
std::string conjugate_json(const jacobi::ConjugateReport& rep);
// Rows t, det_J, sigma_min over the solution grid; the trajectories whose
// zeros are the conjugate instants.
std::string conjugate_csv(const jacobi::JacobiSolution& sol);

std::string index_text(int mu);
std::string index_json(int mu);
std::string index_csv(int mu);

std::string crossings_text(const std::vector<Crossing>& crossings);
std::string crossings_json(const std::vector<Crossing>& crossings);
// Eigenvalue trajectories of path(lambda) on a uniform grid: rows
// lambda, nu_1 .. nu_dim (ascending per row).
std::string crossings_csv(const SymMatrixPath& path, int grid_size);

std::string verify_text(const indexform::IndexReport& rep);
std::string verify_json(const indexform::IndexReport& rep);
// One row per (crossing, kernel vector): lambda0, multiplicity, closed, fd.
std::string verify_csv(const indexform::IndexReport& rep);

std::string suite_text(const suite::SuiteReport& rep);
std::string suite_json(const suite::SuiteReport& rep);
// One row per trial: trial, fiber_dim, redraws, mu, total, signature_sum,
// agree.
std::string suite_csv(const suite::SuiteReport& rep);

std::string error_text(const std::string& kind, const std::string& message);
std::string error_json(const std::string& kind, const std::string& message);

}  // namespace geoindex::report
