#pragma once

#include <functional>
#include <vector>

#include "krylab/domain.hpp"
#include "krylab/hessian_ops.hpp"
#include "krylab/radial.hpp"

namespace krylab {

struct BarrierParams {
    double alpha = 0.05;
    double beta = 2.5e-4;
};

// Point of Omega x C^{n+1}; inside the shell 1/2 < |(zeta,zeta0)| < 2 when
// used for the extended maximum principle.
struct ExtendedPoint {
    CVec z;
    CVec zeta;
    cplx zeta0 = 0.0;

    double zeta_norm() const;
    double zeta_prime_norm() const; // |(zeta, zeta0)|
};

// Value, holomorphic gradient and mixed Hessian w_{I Jbar} of a real scalar
// on the 2n+1 complex variables (z_1..z_n, zeta_1..zeta_n, zeta_0).
struct ExtendedScalar {
    double val = 0.0;
    CVec grad;  // size 2n+1
    CMat hess;  // (2n+1) x (2n+1), Hermitian

    static ExtendedScalar zero(int n);
    ExtendedScalar& operator+=(const ExtendedScalar& o);
    ExtendedScalar scaled(double s) const;
};

// Pointwise defining-function data used by the extended operator.
struct PsiData {
    double val = 0.0;
    CVec d1;                 // psi_{z_i}
    CMat d2h;                // psi_{z_i z_j}
    CMat d2m;                // psi_{z_i zbar_j}
    std::vector<CMat> d3hha; // psi_{z_k z_i zbar_j}, index [k](i,j)
};

// The degenerate elliptic operator on Omega x C^{n+1} built from a trace-one
// dual-cone coefficient field a(z), the defining function and (alpha, beta).
class LOperator {
  public:
    using CoeffField = std::function<CMat(const CVec&)>; // a^{i jbar}: Hermitian, pairs entrywise with w_{i jbar}

    int n() const { return n_; }
    const BarrierParams& params() const { return params_; }
    const DefiningFunction& domain() const { return dom_; }
    const PolyJet& psi() const { return psi_; }
    double psi_scale() const { return scale_; }

    CMat a_at(const CVec& z) const { return a_(z); }
    PsiData psi_data(const CVec& z) const;

    // r, q and the drift vector at an extended point
    cplx r_of(const PsiData& pd, const CVec& zeta) const;
    CVec q_of(const PsiData& pd, const CVec& zeta) const;

    // full (2n+1)^2 coefficient matrix A^{I Jbar}
    CMat extended_matrix(const ExtendedPoint& p) const;

    double apply(const ExtendedScalar& w, const ExtendedPoint& p) const;

    // same application with the drift term dropped (cancellation diagnostics)
    double apply_without_drift(const ExtendedScalar& w, const ExtendedPoint& p) const;

  private:
    friend LOperator build_l(const DefiningFunction&, LOperator::CoeffField, BarrierParams);
    int n_ = 0;
    DefiningFunction dom_;
    PolyJet psi_; // rescaled so that a^{i jbar} psi_{i jbar} <= -2
    double scale_ = 1.0;
    BarrierParams params_;
    CoeffField a_;
    // derivative jets of the rescaled psi
    std::vector<PolyJet> j1_;
    std::vector<std::vector<PolyJet>> j2h_, j2m_;
    std::vector<std::vector<std::vector<PolyJet>>> j3_;
};

LOperator build_l(const DefiningFunction& dom, LOperator::CoeffField a, BarrierParams params);

// constant coefficient field a = I/n
LOperator::CoeffField identity_field(int n);
// Monge-Ampere linearization along a solved radial profile
LOperator::CoeffField radial_ma_field(const RadialSolution& sol);

// --- barrier jets -----------------------------------------------------------

ExtendedScalar barrier_v1(const LOperator& L, const ExtendedPoint& p);
ExtendedScalar barrier_v2(const LOperator& L, const ExtendedPoint& p);
ExtendedScalar barrier_v3(const LOperator& L, const ExtendedPoint& p);
ExtendedScalar barrier_sum(const LOperator& L, const ExtendedPoint& p); // v1 + v2 + beta/4 v3
ExtendedScalar barrier_sqrt(const LOperator& L, const ExtendedPoint& p); // sqrt of the sum

struct BarrierValues {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0, v = 0.0;
};
BarrierValues barrier_eval(const LOperator& L, const ExtendedPoint& p);

// extended jet of a z-only real polynomial (for reduction tests)
ExtendedScalar extend_poly(const PolyJet& u, const CVec& z, int n);

// Lemma-style perturbation jets along a solved radial profile:
// order 1: w = u_{(zeta)} + 2 Re(zeta0) u
// order 2: w = u_{(zeta)(zeta)} + 4 Re(zeta0) u_{(zeta)} + |2 Re(zeta0)|^2 u
ExtendedScalar perturbation_jet(const RadialSolution& sol, const ExtendedPoint& p, int order);

// --- sampling and certification checks ---------------------------------------

std::vector<ExtendedPoint> sample_extended_interior(const LOperator& L, int count,
                                                    std::uint64_t seed);
std::vector<ExtendedPoint> sample_extended_boundary(const LOperator& L, int count,
                                                    std::uint64_t seed);

struct BarrierCheckReport {
    bool pass = false;
    double worst_margin = 0.0; // max of L[v1+v2+beta/4 v3]; negative when certified
    double c_emp = 0.0;        // smallest constant for the bracket inequality
    int samples = 0;
    ExtendedPoint worst_point;
};
BarrierCheckReport barrier_lemma_check(const LOperator& L, int samples, std::uint64_t seed = 1);

struct PerturbationReport {
    double mu = 0.0;            // smallest constant making the lower bound hold
    double worst_deficit = 0.0; // max of -L[w]
    int samples = 0;
};
PerturbationReport perturbation_check(const LOperator& L, const RadialSolution& sol, int order,
                                      int samples, std::uint64_t seed = 1);

struct KrylovReport {
    bool hypothesis_ok = false; // v > 0 and L[v] < 0 everywhere on the sample
    bool pass = false;
    double interior_ratio_sup = 0.0; // sup L[w]/L[v]
    double boundary_ratio_sup = 0.0; // sup w/v on the boundary sample
    double worst_slack = 0.0;        // min over samples of bound - w/v
    int samples = 0;
};
KrylovReport krylov_ratio_check(const LOperator& L, const RadialSolution& sol, int samples,
                                std::uint64_t seed = 1);

struct AlphaSearchResult {
    bool found = false;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> tried;
};
AlphaSearchResult search_alpha(const DefiningFunction& dom, LOperator::CoeffField a,
                               int samples = 2000, std::uint64_t seed = 1);

} // namespace krylab
