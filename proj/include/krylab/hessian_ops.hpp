#pragma once

#include <vector>

#include "krylab/linalg.hpp"
#include "krylab/poly_jet.hpp"

namespace krylab {

// Cone Gamma_k = { lambda : sigma_j(lambda) > 0 for j <= k }.
struct ConeTag {
    int k = 1;
    int n = 1;
};

// k-th elementary symmetric polynomial.
double sigma_k(const std::vector<double>& lambda, int k);

bool cone_member(const std::vector<double>& lambda, const ConeTag& tag);
bool cone_member(const CMat& H, const ConeTag& tag);

// lambda is treated as interior when min_j sigma_j / (binom(n,j) scale^j)
// exceeds this margin.
double cone_interior_margin(const std::vector<double>& lambda, int k);

enum class OperatorKind { sigma_root, monge_ampere };

// Degree-one homogeneous operator f = sigma_k^{1/k} on Gamma_k; the
// Monge-Ampere kind is the k = n case, f = det^{1/n}.
//
// Derivative convention: op_grad returns the Hermitian matrix P with
//   d/dt F(H + tV)|_0 = tr(P V).
// Written in index form with Hmat[i][j] = u_{i jbar} this is
//   sum_{ij} F^{i jbar} u_{i jbar} = tr(P Hmat),  F^{i jbar} = P^T[i][j].
struct HessianOperator {
    OperatorKind kind = OperatorKind::monge_ampere;
    int k = 1;
    int n = 1;

    static HessianOperator sigma_root(int k, int n) { return {OperatorKind::sigma_root, k, n}; }
    static HessianOperator ma(int n) { return {OperatorKind::monge_ampere, n, n}; }

    ConeTag cone() const { return {k, n}; }
    const char* name() const;
};

double f_of_lambda(const HessianOperator& F, const std::vector<double>& lambda);

double op_eval(const HessianOperator& F, const CMat& H);

// P with dF(H)[V] = tr(P V); Hermitian positive definite in the cone interior.
CMat op_grad(const HessianOperator& F, const CMat& H);

// d^2/dt^2 F(H + tV)|_0 for Hermitian V; <= 0 by concavity.  Falls back to a
// central second difference when an eigenvalue gap is below 1e-8 (the divided
// difference formula is ill conditioned there).
double op_second_form(const HessianOperator& F, const CMat& H, const CMat& V);

// Bilinear version via polarization (X, Y Hermitian).
double op_second_bilinear(const HessianOperator& F, const CMat& H, const CMat& X, const CMat& Y);

// a = P / tr(P): trace one, positive definite, dual-cone valued.
CMat normalized_linearization(const HessianOperator& F, const CMat& H);

// | det^{1/n}(D^2_C (u o G))(w) - det^{1/n}(D^2_C u)(G(w)) |det G'(w)|^{2/n} |
// for a holomorphic polynomial map G.
double ma_holo_residual(const PolyJet& u, const std::vector<PolyJet>& G, const CVec& w);

} // namespace krylab
