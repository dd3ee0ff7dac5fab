#pragma once

#include <vector>

#include "krylab/domain.hpp"
#include "krylab/hessian_ops.hpp"
#include "krylab/linalg.hpp"
#include "krylab/poly_jet.hpp"

namespace krylab {

// Holomorphic field xi_k(z) = a_k + A_{kl} z_l with A* = -A.
struct AffineSkewHermitianField {
    CVec a;
    CMat A;

    int dim() const { return int(a.size()); }
    CVec at(const CVec& z) const;
    HoloField as_holo_field() const;
    double skew_defect() const; // max |A + A*|
};

// The 2n-1 fields that are approximately tangential in adapted coordinates
// and span the real tangent space at the origin.
std::vector<AffineSkewHermitianField> standard_fields(int n);

// xi = c * eta + zeta with c = (xi,eta)/(eta,eta), so Re(zeta) is exactly
// tangent to the level set of the defining function.
struct TangentialSplit {
    double pairing = 0.0;    // (xi, eta) = Re<xi, eta>
    double coefficient = 0.0; // (xi,eta)/(eta,eta)
    CVec zeta;
};

TangentialSplit tangential_split(const CVec& xi_at_z, const DefiningFunction& dom, const CVec& z);

// Vanishing-order report for the three approximate-tangentiality conditions,
// sampled on the boundary of the adapted chart over dyadic radii.
struct TangentialOrderReport {
    SlopeFit pairing;    // Re(xi_j rho_{z_j}) = O(s^2)
    SlopeFit projection; // |xi - zeta| <= C s^2
    SlopeFit unit_norm;  // |xi| = 1 + O(s^2)
    double min_slope() const;
};

TangentialOrderReport approx_tangential_check(const AffineSkewHermitianField& xi,
                                              const AdaptedChart& chart, int dirs_per_radius = 48);

// Residuals of the commutation identities between bracket derivatives and
// partial derivatives for an affine skew-hermitian field.
struct CommutationResiduals {
    double coeff = 0.0;  // (xi_k)_l vs A and skewness
    double third = 0.0;  // first-order commutation, max over (i,j)
    double fourth = 0.0; // second-order commutation, max over (i,j)
    double max() const { return std::max(coeff, std::max(third, fourth)); }
};

CommutationResiduals commutation_check(const PolyJet& u, const AffineSkewHermitianField& xi,
                                       const CVec& z);

// Residual of the differentiated-operator identity
//   F^{ij}u_{(xi)(xi)ij} = (F(D^2 u))_{(xi)(xi)} - F^{ij,pq} u_{(xi)ij} u_{(xi)pq}
// plus the slack of the concavity inequality form.  grad_bias adds a fault
// to the operator gradient (diagnostic hook for the harness fault injection).
struct FQuadraticResult {
    double residual = 0.0;
    double concavity_slack = 0.0; // LHS - (F(u))_{(xi)(xi)}, >= 0 for concave F
    double scale = 1.0;
};

FQuadraticResult f_quadratic_check(const HessianOperator& F, const PolyJet& u,
                                   const AffineSkewHermitianField& xi, const CVec& z,
                                   double grad_bias = 0.0);

// First-variation identity F^{ij}((xibar_i)_kbar u_{kj} + (xi_j)_k u_{ik}) = 0.
double first_variation_residual(const HessianOperator& F, const PolyJet& u,
                                const AffineSkewHermitianField& xi, const CVec& z);

// Obstruction analysis at a normalized boundary expansion.  The defining
// expansion is rotated/scaled so rho_{z_j}(0) = 0 (j < n), rho_{z_n}(0) = -1
// and rho_{z_k z_k}(0) real, then the skew-hermitian completions are solved
// for the 2n-2 tangential directions; the i d/dz_n direction carries the
// obstruction vector rho_{y_n z_l}(0).
struct ObstructionResult {
    std::vector<CMat> solved;      // per direction (2n-2 entries + final attempt)
    CVec obstruction;              // rho_{y_n z_l}(0), l = 1..n-1
    double system_residual = 0.0;  // worst linear-cancellation residual
    PolyJet normalized_rho;        // the normalized local expansion
};

ObstructionResult obstruction(const DefiningFunction& dom, const CVec& p);

} // namespace krylab
