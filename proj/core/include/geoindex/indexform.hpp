#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "geoindex/errors.hpp"
#include "geoindex/jacobi.hpp"
#include "geoindex/profile.hpp"
#include "geoindex/spectral.hpp"
#include "geoindex/sym.hpp"

namespace geoindex::indexform {

struct Defaults {
    static constexpr int modes = 128;
    static constexpr int quad_panels = 4096;
    static constexpr double zero_tol = 1e-9;
    static constexpr double fd_step = 1e-5;
    static constexpr double fd_rel_tol = 1e-3;
};

// Finite-dimensional trial space for the index form: the first `modes` sine
// modes in each of the fiber_dim normal directions,
//   b_{k,i}(x) = (sqrt(2)/(k pi)) sin(k pi x) e_i ,
// orthonormal in the H^1_0 inner product <u, v> = int u' . v' dx.
struct GalerkinBasis {
    int fiber_dim = 1;
    int modes = Defaults::modes;
    int quad_panels = Defaults::quad_panels;

    int size() const { return fiber_dim * modes; }
};

// Matrix of the scaled index form over the basis:
//   G[(k,i),(l,j)] = delta_kl delta_ij
//                    - lambda^2 (2/(k l pi^2)) int S_ij(lambda x) sin(k pi x) sin(l pi x) dx
// with the integrals evaluated by composite Simpson quadrature on quad_panels
// panels.  The n^2 N^2 sine products reduce to the 2N+1 cosine moments
// int S_ij(lambda x) cos(m pi x) dx via the product-to-sum identity, so the
// profile is sampled once per quadrature node regardless of N.
SymMatrix assemble(const CurvatureProfile& s, double lambda, const GalerkinBasis& basis);

// lambda -> assemble(s, lambda, basis), packaged for find_crossings.
SymMatrixPath assemble_path(const CurvatureProfile& s, const GalerkinBasis& basis);

// Morse index of the assembled form at this lambda.  Throws
// DegenerateFormError when an eigenvalue lies within zero_tol of zero, i.e.
// lambda is numerically a crossing and the index is about to jump.
int galerkin_index(const CurvatureProfile& s, double lambda, const GalerkinBasis& basis,
                   double zero_tol = Defaults::zero_tol);

// Derivative of the form family at a crossing lambda0, evaluated on each
// normalized kernel direction of J(lambda0): closed form
//   -(1/lambda0) ||u'(1)||^2   for   u(x) = J(lambda0 x) v .
// One value per kernel direction, in kernel_fields order.  Throws
// NotACrossingError when J(lambda0) has full numerical rank.
std::vector<double> crossing_form_closed(const jacobi::JacobiSolution& sol, double lambda0,
                                         double kernel_tol = jacobi::Defaults::kernel_tol);

// A kernel field as a function on [0, 1].  Holds a pointer into `sol`; valid
// only while the solution is alive.
struct H1Function {
    std::function<Eigen::VectorXd(double)> value;
    std::function<Eigen::VectorXd(double)> deriv;
};

// u(x) = J(t0 x) v together with u'(x) = t0 J'(t0 x) v.
H1Function kernel_h1_function(const jacobi::JacobiSolution& sol, double t0,
                              const Eigen::VectorXd& v);

// Independent derivative oracle, sharing no code path with the closed form:
//   [ q_{lambda0+h}(u) - q_{lambda0-h}(u) ] / (2h)
// with q_lambda(u) = int ||u'||^2 - lambda^2 u^T S(lambda x) u dx evaluated
// by direct Simpson quadrature.  Requires 0 < lambda0 - h and
// lambda0 + h <= 1.
std::vector<double> crossing_form_fd(const CurvatureProfile& s, double lambda0,
                                     const std::vector<H1Function>& kernel,
                                     double h = Defaults::fd_step,
                                     int quad_panels = Defaults::quad_panels);

struct CrossingDiagnostic {
    double lambda0 = 0.0;
    int multiplicity = 0;
    std::vector<double> closed_form;   // strictly negative by the time a report exists
    std::vector<double> finite_diff;   // matches closed_form within fd_rel_tol
};

struct IndexReport {
    int mu_galerkin = 0;
    int conjugate_total = 0;
    int crossing_signature_sum = 0;
    bool agree = false;  // mu_galerkin == conjugate_total == -crossing_signature_sum
    std::vector<CrossingDiagnostic> diagnostics;
};

struct VerifyOptions {
    int steps = jacobi::Defaults::steps;
    double kernel_tol = jacobi::Defaults::kernel_tol;
    double zero_tol = Defaults::zero_tol;
    double fd_step = Defaults::fd_step;
    double fd_rel_tol = Defaults::fd_rel_tol;
};

// Run the full three-way verification for one curvature profile:
//
//   1. conjugate_total from the Jacobi solution,
//   2. mu_galerkin from the assembled form at lambda = 1 (after checking the
//      form at lambda = 0 is positive definite),
//   3. one crossing of the scaled family per conjugate instant; every
//      closed-form derivative value must be strictly negative and must match
//      the finite-difference oracle within fd_rel_tol relative, so each
//      crossing contributes -multiplicity to crossing_signature_sum.
//
// Throws DegenerateGeodesicError when t = 1 is conjugate, and ResolutionError
// when kernels cannot be matched or the two derivative routes disagree.
IndexReport verify_theorem(const CurvatureProfile& s, const GalerkinBasis& basis,
                           const VerifyOptions& opts = {});

}  // namespace geoindex::indexform
