#include "krylab/hessian_ops.hpp"

#include <algorithm>
#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// sigma_j for all j = 0..n via the product expansion of prod (x + lambda_i).
std::vector<double> sigma_all(const std::vector<double>& lambda) {
    std::vector<double> e(lambda.size() + 1, 0.0);
    e[0] = 1.0;
    for (double l : lambda)
        for (int j = int(lambda.size()); j >= 1; --j) e[j] += l * e[j - 1];
    return e;
}

// sigma_k of lambda with indices in `skip` removed (n <= 7, direct).
double sigma_k_excluding(const std::vector<double>& lambda, int k, int skip1, int skip2 = -1) {
    std::vector<double> rest;
    for (int i = 0; i < int(lambda.size()); ++i)
        if (i != skip1 && i != skip2) rest.push_back(lambda[i]);
    if (k < 0 || k > int(rest.size())) return 0.0;
    return sigma_all(rest)[k];
}

struct LambdaDerivs {
    std::vector<double> f1;              // df/dlambda_i
    std::vector<std::vector<double>> f2; // d2f/dlambda_i dlambda_j
};

// f = sigma_k^{1/k}: closed-form first and second partials.
LambdaDerivs lambda_derivs(const HessianOperator& F, const std::vector<double>& lambda) {
    int n = F.n, k = F.k;
    double g = sigma_k(lambda, k);
    if (g <= 0.0) fail(ErrKind::admissibility, "operator derivative outside cone");
    double p = 1.0 / double(k);
    double gp = std::pow(g, p - 1.0);
    double gpp = std::pow(g, p - 2.0);
    LambdaDerivs d;
    d.f1.resize(n);
    d.f2.assign(n, std::vector<double>(n, 0.0));
    std::vector<double> gi(n);
    for (int i = 0; i < n; ++i) gi[i] = sigma_k_excluding(lambda, k - 1, i);
    for (int i = 0; i < n; ++i) d.f1[i] = p * gp * gi[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double gij = (i == j) ? 0.0 : sigma_k_excluding(lambda, k - 2, i, j);
            d.f2[i][j] = p * (p - 1.0) * gpp * gi[i] * gi[j] + p * gp * gij;
        }
    return d;
}

std::vector<double> eigenvalues_of(const CMat& H) {
    if (!is_hermitian(H, 1e-10)) fail(ErrKind::invalid_argument, "matrix is not Hermitian");
    HermEig e = herm_eig(H);
    std::vector<double> l(e.evals.size());
    for (int i = 0; i < e.evals.size(); ++i) l[i] = e.evals(i);
    return l;
}

void require_interior(const HessianOperator& F, const std::vector<double>& lambda) {
    if (cone_interior_margin(lambda, F.k) <= 1e-10)
        fail(ErrKind::admissibility, "singular linearization: spectrum on the cone boundary");
}

} // namespace

double sigma_k(const std::vector<double>& lambda, int k) {
    if (k < 1 || k > int(lambda.size())) fail(ErrKind::invalid_argument, "sigma_k order out of range");
    return sigma_all(lambda)[k];
}

bool cone_member(const std::vector<double>& lambda, const ConeTag& tag) {
    if (int(lambda.size()) != tag.n) fail(ErrKind::invalid_argument, "cone dimension mismatch");
    auto e = sigma_all(lambda);
    for (int j = 1; j <= tag.k; ++j)
        if (e[j] <= 0.0) return false;
    return true;
}

bool cone_member(const CMat& H, const ConeTag& tag) { return cone_member(eigenvalues_of(H), tag); }

double cone_interior_margin(const std::vector<double>& lambda, int k) {
    int n = int(lambda.size());
    double scale = 0.0;
    for (double l : lambda) scale = std::max(scale, std::abs(l));
    if (scale == 0.0) return 0.0;
    auto e = sigma_all(lambda);
    double margin = 1e300;
    for (int j = 1; j <= k; ++j) margin = std::min(margin, e[j] / (binom(n, j) * std::pow(scale, j)));
    return margin;
}

const char* HessianOperator::name() const {
    switch (kind) {
        case OperatorKind::monge_ampere: return "monge-ampere";
        default: return "sigma-root";
    }
}

double f_of_lambda(const HessianOperator& F, const std::vector<double>& lambda) {
    double g = sigma_k(lambda, F.k);
    if (g < 0.0) fail(ErrKind::admissibility, "spectrum outside the closed cone");
    return std::pow(g, 1.0 / double(F.k));
}

double op_eval(const HessianOperator& F, const CMat& H) {
    auto lambda = eigenvalues_of(H);
    auto e = sigma_all(lambda);
    double scale = 1.0;
    for (double l : lambda) scale = std::max(scale, std::abs(l));
    for (int j = 1; j <= F.k; ++j)
        if (e[j] < -1e-10 * binom(F.n, j) * std::pow(scale, j))
            fail(ErrKind::admissibility, "matrix not admissible for the operator cone");
    double g = std::max(e[F.k], 0.0);
    return std::pow(g, 1.0 / double(F.k));
}

CMat op_grad(const HessianOperator& F, const CMat& H) {
    HermEig e = herm_eig(H);
    std::vector<double> lambda(e.evals.data(), e.evals.data() + e.evals.size());
    require_interior(F, lambda);
    LambdaDerivs d = lambda_derivs(F, lambda);
    int n = F.n;
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = d.f1[i];
    return e.frame * D * e.frame.adjoint();
}

double op_second_form(const HessianOperator& F, const CMat& H, const CMat& V) {
    HermEig e = herm_eig(H);
    int n = F.n;
    std::vector<double> lambda(e.evals.data(), e.evals.data() + e.evals.size());
    require_interior(F, lambda);

    LambdaDerivs d = lambda_derivs(F, lambda);
    CMat W = e.frame.adjoint() * V * e.frame;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += d.f2[i][j] * W(i, i).real() * W(j, j).real();
    // For f = sigma_k^{1/k} the eigenvalue divided difference collapses to
    //   (f_i - f_j)/(lambda_i - lambda_j) = -(1/k) g^{1/k-1} sigma_{k-2}(rest),
    // which stays well conditioned through eigenvalue collisions.
    double g = sigma_k(lambda, F.k);
    double p = 1.0 / double(F.k);
    double gp = std::pow(g, p - 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dd = -p * gp * sigma_k_excluding(lambda, F.k - 2, i, j);
            s += 2.0 * dd * std::norm(W(i, j));
        }
    return s;
}

double op_second_bilinear(const HessianOperator& F, const CMat& H, const CMat& X, const CMat& Y) {
    double qp = op_second_form(F, H, X + Y);
    double qm = op_second_form(F, H, X - Y);
    return 0.25 * (qp - qm);
}

CMat normalized_linearization(const HessianOperator& F, const CMat& H) {
    CMat P = op_grad(F, H);
    double tr = P.trace().real();
    if (tr <= 0.0) fail(ErrKind::admissibility, "degenerate linearization trace");
    return P / tr;
}

double ma_holo_residual(const PolyJet& u, const std::vector<PolyJet>& G, const CVec& w) {
    int n = u.dim();
    PolyJet uG = u.compose(G);
    CMat HL = to_cmat(hess_c(uG, w));
    CMat HR = to_cmat(hess_c(u, [&] {
        CVec gw(n);
        for (int j = 0; j < n; ++j) gw[j] = G[j].eval(w);
        return gw;
    }()));
    CMat J(n, n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) J(s, t) = G[s].dz(t).eval(w);
    double jac = std::abs(J.determinant());
    double lhs = std::pow(std::max(HL.determinant().real(), 0.0), 1.0 / double(n));
    double rhs = std::pow(std::max(HR.determinant().real(), 0.0), 1.0 / double(n)) *
                 std::pow(jac, 2.0 / double(n));
    return std::abs(lhs - rhs);
}

} // namespace krylab
