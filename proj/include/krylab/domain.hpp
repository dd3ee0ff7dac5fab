#pragma once

#include <string>
#include <vector>

#include "krylab/linalg.hpp"
#include "krylab/poly_jet.hpp"
#include "krylab/sampling.hpp"

namespace krylab {

enum class DomainKind { ball, ellipsoid, perturbed_ball };

// A quadratic perturbation amp*Re(z_i z_j) (holomorphic == true) or
// amp*Re(z_i zbar_j) (false).  Only the mixed kind can change the complex
// Hessian of the defining function.
struct Perturbation {
    int i = 0;
    int j = 1;
    double amp = 0.0;
    bool holomorphic = true;
};

struct DomainSpec {
    DomainKind kind = DomainKind::ball;
    int n = 2;
    std::vector<double> axes;              // ellipsoid semi-axes
    std::vector<Perturbation> perturbations; // perturbed_ball terms

    static DomainSpec ball(int n) { return {DomainKind::ball, n, {}, {}}; }
    static DomainSpec ellipsoid(int n, std::vector<double> a) {
        return {DomainKind::ellipsoid, n, std::move(a), {}};
    }
    static DomainSpec perturbed(int n, std::vector<Perturbation> p) {
        return {DomainKind::perturbed_ball, n, {}, std::move(p)};
    }
};

// psi > 0 inside, psi = 0 on the boundary, |grad psi| >= 1 there, and -psi
// strictly plurisubharmonic with positive margin.
struct DefiningFunction {
    PolyJet psi;            // real-flagged polynomial
    int n = 0;
    double psh_margin = 0.0; // min eigenvalue of D^2_C(-psi) over the closure
    DomainSpec spec;

    PolyJet rho() const { return psi.scaled(-1.0); }
    double value(const CVec& z) const { return psi.eval(z).real(); }
    bool inside(const CVec& z, double tol = 0.0) const { return value(z) > tol; }
};

DefiningFunction make_domain(const DomainSpec& spec);

// Boundary point along the ray through `direction` (unit, from the origin).
CVec boundary_point(const DefiningFunction& dom, const std::vector<double>& direction);

// Quasi-random boundary / interior samples (deterministic).
std::vector<CVec> sample_boundary(const DefiningFunction& dom, int count, std::uint64_t offset = 0);
std::vector<CVec> sample_interior(const DefiningFunction& dom, int count, std::uint64_t offset = 0);

// Holomorphic quadratic chart at a boundary point in which the local
// negative defining function reads -2 Re(z_n) + |z|^2 + O(|z|^3).
struct AdaptedChart {
    CVec base_point;
    CMat linear;                       // derivative of the chart map at 0
    std::vector<CMat> quadratic;       // symmetric coefficient array per component
    double defining_scale = 1.0;       // factor applied to the pulled-back rho
    PolyJet local_rho;                 // scale * (-psi)(Phi(y)), exact jet
    std::vector<PolyJet> chart_map;    // Phi components (holomorphic, degree 2)

    struct Residuals {
        double constant = 0.0;
        double linear = 0.0;
        double quad20 = 0.0;
        double levi = 0.0;
        double max() const;
    };
    Residuals residuals() const;

    // Max coefficient magnitude of local_rho beyond total degree 2.
    double third_order_mass() const;
};

AdaptedChart adapted_coordinates(const DefiningFunction& dom, const CVec& p);

// Boundary point of the chart near the origin: tangential data
// (x'_1,y'_1,...,x'_{n-1},y'_{n-1},y_n) = r * dir with x_n solved from
// local_rho = 0 by Newton iteration.
CVec chart_boundary_point(const AdaptedChart& chart, const std::vector<double>& dir, double r);

// Boundary frame at a point with nonvanishing gradient.
// eta = rho_{zbar_i} d/dz_i; gamma is represented by the (1,0) field
// gamma_field with Re(gamma_field) the unit inner normal (so directional
// derivatives are u_gamma = dir1(u, z, gamma_field)/2).
struct BoundaryFrame {
    CVec eta;
    CVec gamma_field;
};

BoundaryFrame boundary_frame(const DefiningFunction& dom, const CVec& z);

// Normal curvature of the level set through z in the unit real tangent
// direction T (real vector of length 2n, (x_1,y_1,...)).  Positive for the
// sphere with the inner normal.
double normal_curvature(const DefiningFunction& dom, const CVec& z, const std::vector<double>& T);

// Real 2n x 2n Hessian of a real jet at z, coordinates (x_1,y_1,...,x_n,y_n).
Eigen::MatrixXd real_hessian(const PolyJet& u, const CVec& z);

// Real gradient in the same coordinates.
std::vector<double> real_gradient(const PolyJet& u, const CVec& z);

// Taylor coefficient groups of rho = -psi at p (after translation):
// rho(p+w) = 2 Re(lin . w) + Re(w^T quad20 w) + w* levi w + O(|w|^3).
struct TaylorGroups {
    CVec linear;   // rho_{z_j}(p)
    CMat quad20;   // rho_{z_k z_l}(p), symmetric
    CMat levi;     // rho_{z_k zbar_l}(p), Hermitian
};
TaylorGroups taylor_expand(const DefiningFunction& dom, const CVec& p);

} // namespace krylab
