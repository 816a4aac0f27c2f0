#pragma once

#include <vector>

#include "geoindex/errors.hpp"
#include "geoindex/sym.hpp"

namespace geoindex::spectral {

struct Defaults {
    static constexpr double kernel_tol = 1e-8;
    static constexpr double regularity_tol = 1e-6;
    static constexpr int grid_size = 512;
};

struct MorseCount {
    int index = 0;    // eigenvalues < -zero_tol
    int nullity = 0;  // eigenvalues within [-zero_tol, zero_tol]
    int positive = 0; // eigenvalues > zero_tol
};

// Full inertia of a symmetric matrix at the given zero tolerance.  Nullity is
// reported, never thrown on.
MorseCount morse_count(const SymMatrix& m, double zero_tol);

// Number of eigenvalues strictly below -zero_tol.
int morse_index(const SymMatrix& m, double zero_tol);

// #positive - #negative eigenvalues.  Throws DegenerateFormError when any
// eigenvalue lies within zero_tol of zero: the signature of a degenerate form
// is not a stable quantity and callers must decide how to perturb.
int signature(const SymMatrix& m, double zero_tol);

// Locate every parameter in (0, 1) where the path has a kernel and package
// each with the eigendata of the restricted derivative form.
//
// Strategy: sample grid_size + 1 nodes; brackets where det changes sign are
// refined by bisection, local minima of the smallest singular value without a
// sign change are refined by golden-section search (both to width 1e-10).
// Kernel vectors are the eigenvectors of the refined matrix with |eigenvalue|
// <= kernel_tol.  The derivative is a central difference with step
// min(1e-5, half the distance to the nearer endpoint), restricted to the
// kernel.
//
// Throws EndpointDegenerateError when either endpoint has a kernel,
// IrregularCrossingError when a restricted form has an eigenvalue within
// regularity_tol of zero, and UnresolvedClusterError when the kernel found
// after refinement is inconsistent with the sign-change parity of the bracket
// (two crossings inside one grid cell look exactly like this; re-run with a
// larger grid_size).
std::vector<Crossing> find_crossings(const SymMatrixPath& path,
                                     int grid_size = Defaults::grid_size,
                                     double kernel_tol = Defaults::kernel_tol,
                                     double regularity_tol = Defaults::regularity_tol);

struct CrossingSumResult {
    int index_drop = 0;      // morse_index(path(0)) - morse_index(path(1))
    int signature_sum = 0;   // sum of crossing signatures
    bool equal = false;
    std::vector<Crossing> crossings;
};

// Evaluate both sides of the crossing identity
//   morse_index(path(0)) - morse_index(path(1)) = sum of crossing signatures
// and report whether they agree.  Endpoint inertia uses kernel_tol as the
// zero tolerance; find_crossings supplies the right-hand side.
CrossingSumResult crossing_sum_identity(const SymMatrixPath& path,
                                        int grid_size = Defaults::grid_size,
                                        double kernel_tol = Defaults::kernel_tol,
                                        double regularity_tol = Defaults::regularity_tol);

}  // namespace geoindex::spectral
