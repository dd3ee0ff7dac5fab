#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "krylab/barrier.hpp"
#include "krylab/domain.hpp"
#include "krylab/fields.hpp"
#include "krylab/radial.hpp"

namespace krylab {

// --- identity suite -----------------------------------------------------------

struct SuiteOptions {
    int samples = 200;
    std::uint64_t seed = 1;
    double fault_injection = 0.0; // added to the operator gradient diagonal
};

struct IdentityRow {
    long id = 0;
    int n = 0;
    std::string op;
    std::string check;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct IdentitySuiteResult {
    std::vector<IdentityRow> rows;
    bool pass = false;
    double runtime_sec = 0.0;
};

IdentitySuiteResult run_identity_suite(const SuiteOptions& opt);

// --- epsilon sweep --------------------------------------------------------------

struct SweepOptions {
    int n = 2;
    std::vector<double> g_coeffs = {0.0, 0.0, 1.0}; // default g = t^2
    double boundary_constant = 0.0;
    std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> deltas = {0.0, 0.1, 0.2};
};

struct SweepRow {
    double eps = 0.0;
    NormReport norms;
    double ma_residual = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepOptions& opt);

// --- boundary profile fits ------------------------------------------------------

struct ProfileFit {
    CVec base_point;
    std::vector<double> linear_coeff; // fitted tangential linear term
    double C1 = 0.0;                  // quadratic constant on the boundary
    double C2 = 0.0;                  // quartic (M-weighted) constant
    double C4 = 0.0;                  // interior constant including the M psi term
    double M = 0.0;
    bool flagged = false;             // non-tangential input or unstable fit
    double prefix_ratio = 1.0;        // small-radius vs all-radius C1 ratio
    double min_tangential_slope = 0.0;
};

ProfileFit boundary_profile(const RadialSolution& sol, const DefiningFunction& dom, const CVec& p,
                            const AffineSkewHermitianField& xi,
                            const std::vector<double>& radii = {});

// chart pullback of the radial solution: value/derivative data for
// u_{(xi)(xi)} at a chart point (shared by profile fits and tests)
double chart_field_second_derivative(const RadialSolution& sol, const AdaptedChart& chart,
                                     const AffineSkewHermitianField& xi, const CVec& y);

} // namespace krylab
