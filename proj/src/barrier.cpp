#include "krylab/barrier.hpp"

#include <algorithm>
#include <cmath>

#include "krylab/error.hpp"
#include "krylab/sampling.hpp"

namespace krylab {

double ExtendedPoint::zeta_norm() const {
    double s = 0.0;
    for (auto& c : zeta) s += std::norm(c);
    return std::sqrt(s);
}

double ExtendedPoint::zeta_prime_norm() const {
    double s = std::norm(zeta0);
    for (auto& c : zeta) s += std::norm(c);
    return std::sqrt(s);
}

ExtendedScalar ExtendedScalar::zero(int n) {
    ExtendedScalar w;
    w.grad.assign(2 * n + 1, 0.0);
    w.hess = CMat::Zero(2 * n + 1, 2 * n + 1);
    return w;
}

ExtendedScalar& ExtendedScalar::operator+=(const ExtendedScalar& o) {
    val += o.val;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += o.grad[i];
    hess += o.hess;
    return *this;
}

ExtendedScalar ExtendedScalar::scaled(double s) const {
    ExtendedScalar w = *this;
    w.val *= s;
    for (auto& g : w.grad) g *= s;
    w.hess *= s;
    return w;
}

// --- operator construction ----------------------------------------------------

LOperator build_l(const DefiningFunction& dom, LOperator::CoeffField a, BarrierParams params) {
    if (!(params.alpha > 0.0 && params.alpha < 1.0 && params.beta > 0.0 && params.beta < 1.0))
        fail(ErrKind::config, "alpha and beta must lie in (0,1)");
    if (params.beta > params.alpha * params.alpha / 10.0 + 1e-15)
        fail(ErrKind::config, "beta must satisfy beta <= alpha^2/10");

    LOperator L;
    L.n_ = dom.n;
    L.dom_ = dom;
    L.params_ = params;
    L.a_ = std::move(a);

    int n = dom.n;
    auto pair_with_levi = [&](const PolyJet& psi, const CVec& z) {
        CMat aP = L.a_(z);
        if (!is_hermitian(aP, 1e-10)) fail(ErrKind::invalid_argument, "coefficient field not Hermitian");
        HermEig e = herm_eig(aP);
        if (e.evals(n - 1) <= 0.0) fail(ErrKind::invalid_argument, "coefficient field not positive");
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) {
            PolyJet pi = psi.dz(i);
            for (int j = 0; j < n; ++j) s += aP(i, j) * pi.dzbar(j).eval(z);
        }
        return s.real();
    };

    // rescale psi so that a^{i jbar} psi_{i jbar} <= -2 on the closure
    double m = 1e300;
    auto interior = sample_interior(dom, 160);
    auto boundary = sample_boundary(dom, 80);
    for (auto& z : interior) m = std::min(m, -pair_with_levi(dom.psi, z));
    for (auto& z : boundary) m = std::min(m, -pair_with_levi(dom.psi, z));
    if (m <= 1e-9) fail(ErrKind::geometry, "coefficient field fails the ellipticity pairing");
    L.scale_ = (m < 2.0) ? 2.0 / m : 1.0;
    L.psi_ = dom.psi.scaled(L.scale_);
    L.psi_.set_real_flag(true);

    for (auto& z : interior)
        if (pair_with_levi(L.psi_, z) > -2.0 + 1e-9)
            fail(ErrKind::geometry, "rescaled pairing bound violated");

    L.j1_.resize(n);
    L.j2h_.assign(n, std::vector<PolyJet>(n));
    L.j2m_.assign(n, std::vector<PolyJet>(n));
    L.j3_.assign(n, std::vector<std::vector<PolyJet>>(n, std::vector<PolyJet>(n)));
    for (int i = 0; i < n; ++i) L.j1_[i] = L.psi_.dz(i);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            L.j2h_[i][j] = L.j1_[i].dz(j);
            L.j2m_[i][j] = L.j1_[i].dzbar(j);
        }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) L.j3_[k][i][j] = L.j2h_[k][i].dzbar(j);
    return L;
}

LOperator::CoeffField identity_field(int n) {
    return [n](const CVec&) { return CMat(CMat::Identity(n, n) / double(n)); };
}

LOperator::CoeffField radial_ma_field(const RadialSolution& sol) {
    int n = sol.n();
    HessianOperator F = HessianOperator::ma(n);
    return [sol, F](const CVec& z) {
        CMat H = to_cmat(sol.hess(z));
        CMat P = normalized_linearization(F, H);
        return CMat(P.transpose()); // transpose: a^{i jbar} pairs entrywise with u_{i jbar}
    };
}

PsiData LOperator::psi_data(const CVec& z) const {
    PsiData pd;
    pd.val = psi_.eval(z).real();
    pd.d1.resize(n_);
    pd.d2h = CMat::Zero(n_, n_);
    pd.d2m = CMat::Zero(n_, n_);
    pd.d3hha.assign(n_, CMat::Zero(n_, n_));
    for (int i = 0; i < n_; ++i) pd.d1[i] = j1_[i].eval(z);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            pd.d2h(i, j) = j2h_[i][j].eval(z);
            pd.d2m(i, j) = j2m_[i][j].eval(z);
        }
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) pd.d3hha[k](i, j) = j3_[k][i][j].eval(z);
    return pd;
}

cplx LOperator::r_of(const PsiData& pd, const CVec& zeta) const {
    cplx u1 = 0.0;
    for (int k = 0; k < n_; ++k) u1 += zeta[k] * pd.d1[k];
    double S = pd.val + params_.beta;
    return params_.alpha * std::conj(u1) / S;
}

CVec LOperator::q_of(const PsiData& pd, const CVec& zeta) const {
    cplx u1 = 0.0;
    for (int k = 0; k < n_; ++k) u1 += zeta[k] * pd.d1[k];
    double S = pd.val + params_.beta;
    CVec q(n_);
    for (int j = 0; j < n_; ++j)
        q[j] = (std::conj(zeta[j]) / 4.0 + params_.alpha * pd.d1[j] * std::conj(u1) / S) / S;
    return q;
}

CMat LOperator::extended_matrix(const ExtendedPoint& p) const {
    int n = n_;
    PsiData pd = psi_data(p.z);
    CMat aP = a_(p.z);
    cplx r = r_of(pd, p.zeta);
    CVec q = q_of(pd, p.zeta);
    CVec aq(n, 0.0), qa(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            aq[i] += aP(i, j) * std::conj(q[j]);
            qa[j] += q[i] * aP(i, j);
        }
    cplx qaq = 0.0;
    for (int j = 0; j < n; ++j) qaq += qa[j] * std::conj(q[j]);

    CMat A = CMat::Zero(2 * n + 1, 2 * n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = aP(i, j);
            A(i, n + j) = r * aP(i, j);
            A(n + i, j) = std::conj(r) * aP(i, j);
            A(n + i, n + j) = std::norm(r) * aP(i, j);
        }
    for (int i = 0; i < n; ++i) {
        A(i, 2 * n) = aq[i];
        A(n + i, 2 * n) = std::conj(r) * aq[i];
        A(2 * n, i) = qa[i];
        A(2 * n, n + i) = r * qa[i];
    }
    A(2 * n, 2 * n) = qaq;
    return A;
}

double LOperator::apply(const ExtendedScalar& w, const ExtendedPoint& p) const {
    double base = apply_without_drift(w, p);
    PsiData pd = psi_data(p.z);
    CMat aP = a_(p.z);
    CVec q = q_of(pd, p.zeta);
    cplx drift = 0.0;
    for (int k = 0; k < n_; ++k) {
        cplx bk = 0.0;
        for (int j = 0; j < n_; ++j) bk += aP(k, j) * std::conj(q[j]);
        drift += bk * w.grad[n_ + k];
    }
    return base - 2.0 * drift.real();
}

double LOperator::apply_without_drift(const ExtendedScalar& w, const ExtendedPoint& p) const {
    CMat A = extended_matrix(p);
    cplx s = 0.0;
    for (int I = 0; I < 2 * n_ + 1; ++I)
        for (int J = 0; J < 2 * n_ + 1; ++J) s += A(I, J) * w.hess(I, J);
    return s.real();
}

// --- barrier jets -------------------------------------------------------------

ExtendedScalar barrier_v1(const LOperator& L, const ExtendedPoint& p) {
    int n = L.n();
    double alpha = L.params().alpha, beta = L.params().beta;
    PsiData pd = L.psi_data(p.z);
    double S = pd.val + beta;
    double Sa = std::pow(S, -alpha);

    cplx u1 = 0.0;
    for (int k = 0; k < n; ++k) u1 += p.zeta[k] * pd.d1[k];
    CVec u1_h(n, 0.0), u1_a(n, 0.0); // d/dz_i of u1, and d/dzbar_i of u1
    CMat u1_ha = CMat::Zero(n, n);   // d^2 u1 / dz_i dzbar_j
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            u1_h[i] += p.zeta[k] * pd.d2h(k, i);
            u1_a[i] += p.zeta[k] * pd.d2m(k, i);
        }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) u1_ha(i, j) += p.zeta[k] * pd.d3hha[k](i, j);
    }
    // conjugate-side derivatives: (u1bar)_{,i} = conj(u1_a[i]),
    // (u1bar)_{,ibar} = conj(u1_h[i]), (u1bar)_{,i jbar} = conj(u1_ha(j, i))
    cplx ub = std::conj(u1);
    double absu2 = std::norm(u1);

    ExtendedScalar w = ExtendedScalar::zero(n);
    w.val = absu2 * Sa;
    for (int i = 0; i < n; ++i) {
        w.grad[i] = (u1_h[i] * ub + u1 * std::conj(u1_a[i])) * Sa -
                    alpha * absu2 * Sa / S * pd.d1[i];
        w.grad[n + i] = pd.d1[i] * ub * Sa;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx t = u1_ha(i, j) * ub + u1_h[i] * std::conj(u1_h[j]) +
                     u1_a[j] * std::conj(u1_a[i]) + u1 * std::conj(u1_ha(j, i));
            t *= Sa;
            t -= alpha * Sa / S *
                 (std::conj(pd.d1[j]) * (u1_h[i] * ub + u1 * std::conj(u1_a[i])) +
                  pd.d1[i] * (u1_a[j] * ub + u1 * std::conj(u1_h[j])));
            t -= alpha * absu2 * Sa / S * pd.d2m(i, j);
            t += alpha * (alpha + 1.0) * absu2 * Sa / (S * S) * pd.d1[i] * std::conj(pd.d1[j]);
            w.hess(i, j) = t;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // (z_i, zetabar_j)
            cplx t = (u1_h[i] * std::conj(pd.d1[j]) + u1 * pd.d2m(i, j)) * Sa -
                     alpha * u1 * std::conj(pd.d1[j]) * pd.d1[i] * Sa / S;
            w.hess(i, n + j) = t;
            w.hess(n + j, i) = std::conj(t);
            // (zeta_i, zetabar_j)
            w.hess(n + i, n + j) = pd.d1[i] * std::conj(pd.d1[j]) * Sa;
        }
    return w;
}

ExtendedScalar barrier_v2(const LOperator& L, const ExtendedPoint& p) {
    int n = L.n();
    double alpha = L.params().alpha, beta = L.params().beta;
    PsiData pd = L.psi_data(p.z);
    double S = pd.val + beta;
    double S1a = std::pow(S, 1.0 - alpha);
    double Sa = std::pow(S, -alpha);
    double z2 = 0.0;
    for (auto& c : p.zeta) z2 += std::norm(c);

    ExtendedScalar w = ExtendedScalar::zero(n);
    w.val = S1a * z2 / alpha;
    for (int i = 0; i < n; ++i) {
        w.grad[i] = (1.0 - alpha) / alpha * Sa * pd.d1[i] * z2;
        w.grad[n + i] = S1a * std::conj(p.zeta[i]) / alpha;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            w.hess(i, j) = (1.0 - alpha) / alpha * z2 *
                           (Sa * pd.d2m(i, j) - alpha * Sa / S * pd.d1[i] * std::conj(pd.d1[j]));
            cplx t = (1.0 - alpha) / alpha * Sa * pd.d1[i] * p.zeta[j];
            w.hess(i, n + j) = t;
            w.hess(n + j, i) = std::conj(t);
            if (i == j) w.hess(n + i, n + j) = S1a / alpha;
        }
    return w;
}

ExtendedScalar barrier_v3(const LOperator& L, const ExtendedPoint& p) {
    int n = L.n();
    double alpha = L.params().alpha, beta = L.params().beta;
    PsiData pd = L.psi_data(p.z);
    double S = pd.val + beta;
    double S1a = std::pow(S, 1.0 - alpha);
    double Sa = std::pow(S, -alpha);
    double z02 = std::norm(p.zeta0);

    ExtendedScalar w = ExtendedScalar::zero(n);
    int i0 = 2 * n;
    w.val = S1a * z02;
    for (int i = 0; i < n; ++i) w.grad[i] = (1.0 - alpha) * Sa * pd.d1[i] * z02;
    w.grad[i0] = S1a * std::conj(p.zeta0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            w.hess(i, j) = (1.0 - alpha) * z02 *
                           (Sa * pd.d2m(i, j) - alpha * Sa / S * pd.d1[i] * std::conj(pd.d1[j]));
        cplx t = (1.0 - alpha) * Sa * pd.d1[i] * p.zeta0;
        w.hess(i, i0) = t;
        w.hess(i0, i) = std::conj(t);
    }
    w.hess(i0, i0) = S1a;
    return w;
}

ExtendedScalar barrier_sum(const LOperator& L, const ExtendedPoint& p) {
    ExtendedScalar w = barrier_v1(L, p);
    w += barrier_v2(L, p);
    w += barrier_v3(L, p).scaled(L.params().beta / 4.0);
    return w;
}

ExtendedScalar barrier_sqrt(const LOperator& L, const ExtendedPoint& p) {
    ExtendedScalar s = barrier_sum(L, p);
    if (s.val <= 0.0) fail(ErrKind::invalid_argument, "barrier root requires zeta' != 0");
    double V = std::sqrt(s.val);
    ExtendedScalar w = ExtendedScalar::zero(L.n());
    w.val = V;
    for (std::size_t i = 0; i < s.grad.size(); ++i) w.grad[i] = s.grad[i] / (2.0 * V);
    for (int I = 0; I < int(s.grad.size()); ++I)
        for (int J = 0; J < int(s.grad.size()); ++J)
            w.hess(I, J) = s.hess(I, J) / (2.0 * V) -
                           s.grad[I] * std::conj(s.grad[J]) / (4.0 * V * V * V);
    return w;
}

BarrierValues barrier_eval(const LOperator& L, const ExtendedPoint& p) {
    BarrierValues b;
    b.v1 = barrier_v1(L, p).val;
    b.v2 = barrier_v2(L, p).val;
    b.v3 = barrier_v3(L, p).val;
    double s = b.v1 + b.v2 + L.params().beta / 4.0 * b.v3;
    b.v = s > 0.0 ? std::sqrt(s) : 0.0;
    return b;
}

ExtendedScalar extend_poly(const PolyJet& u, const CVec& z, int n) {
    ExtendedScalar w = ExtendedScalar::zero(n);
    w.val = u.eval(z).real();
    for (int i = 0; i < n; ++i) w.grad[i] = u.dz(i).eval(z);
    auto H = hess_c(u, z);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w.hess(i, j) = H[i][j];
    return w;
}

ExtendedScalar perturbation_jet(const RadialSolution& sol, const ExtendedPoint& p, int order) {
    int n = sol.n();
    double t = 0.0;
    for (auto& c : p.z) t += std::norm(c);
    double f1 = sol.dphi(t), f2 = sol.d2phi(t), f3 = sol.d3phi(t), f4 = sol.d4phi(t);
    cplx P = 0.0; // sum zeta_k conj(z_k)
    for (int k = 0; k < n; ++k) P += p.zeta[k] * std::conj(p.z[k]);
    double R = 2.0 * P.real();
    double re0 = 2.0 * p.zeta0.real();
    double z2 = 0.0;
    for (auto& c : p.zeta) z2 += std::norm(c);

    auto zb = [&](int i) { return std::conj(p.z[i]); };

    ExtendedScalar w = ExtendedScalar::zero(n);
    if (order == 1) {
        w.val = f1 * R + re0 * sol.phi(t);
        for (int i = 0; i < n; ++i) {
            w.grad[i] = f2 * zb(i) * R + f1 * std::conj(p.zeta[i]) + re0 * f1 * zb(i);
            w.grad[n + i] = f1 * zb(i); // u_k
        }
        w.grad[2 * n] = sol.phi(t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx uij = (i == j ? f1 : 0.0) + f2 * zb(i) * p.z[j];
                cplx uzij = f3 * R * zb(i) * p.z[j] + (i == j ? f2 * R : 0.0) +
                            f2 * (zb(i) * p.zeta[j] + std::conj(p.zeta[i]) * p.z[j]);
                w.hess(i, j) = uzij + re0 * uij;
                w.hess(i, n + j) = uij;
                w.hess(n + i, j) = uij;
            }
        for (int i = 0; i < n; ++i) {
            w.hess(i, 2 * n) = f1 * zb(i);
            w.hess(2 * n, i) = std::conj(f1 * zb(i));
        }
        return w;
    }
    if (order != 2) fail(ErrKind::invalid_argument, "perturbation order must be 1 or 2");

    w.val = f2 * R * R + 2.0 * f1 * z2 + 2.0 * re0 * f1 * R + re0 * re0 * sol.phi(t);
    for (int i = 0; i < n; ++i) {
        cplx uzz_i = f3 * R * R * zb(i) + 2.0 * f2 * R * std::conj(p.zeta[i]) + 2.0 * f2 * z2 * zb(i);
        cplx uz_i = f2 * zb(i) * R + f1 * std::conj(p.zeta[i]);
        w.grad[i] = uzz_i + 2.0 * re0 * uz_i + re0 * re0 * f1 * zb(i);
        w.grad[n + i] = 2.0 * uz_i + 2.0 * re0 * f1 * zb(i); // 2 u_{(zeta)i} + 4Re(zeta0)u_i
    }
    w.grad[2 * n] = 2.0 * f1 * R + 2.0 * re0 * sol.phi(t);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx uij = (i == j ? f1 : 0.0) + f2 * zb(i) * p.z[j];
            cplx uzij = f3 * R * zb(i) * p.z[j] + (i == j ? f2 * R : 0.0) +
                        f2 * (zb(i) * p.zeta[j] + std::conj(p.zeta[i]) * p.z[j]);
            cplx uzzij = f4 * R * R * zb(i) * p.z[j] + (i == j ? f3 * R * R : 0.0) +
                         2.0 * f3 * R * (zb(i) * p.zeta[j] + std::conj(p.zeta[i]) * p.z[j]) +
                         2.0 * f2 * std::conj(p.zeta[i]) * p.zeta[j] +
                         2.0 * f3 * z2 * zb(i) * p.z[j] + (i == j ? 2.0 * f2 * z2 : 0.0);
            w.hess(i, j) = uzzij + 2.0 * re0 * uzij + re0 * re0 * uij;
            cplx cross = 2.0 * uzij + 2.0 * re0 * uij;
            w.hess(i, n + j) = cross;
            w.hess(n + i, j) = std::conj(2.0 * uzij + 2.0 * re0 * uij); // Hermitian mirror
            w.hess(n + i, n + j) = 2.0 * uij;
        }
    for (int i = 0; i < n; ++i) {
        cplx uz_i = f2 * zb(i) * R + f1 * std::conj(p.zeta[i]);
        cplx t1 = 2.0 * uz_i + 2.0 * re0 * f1 * zb(i);
        w.hess(i, 2 * n) = t1;
        w.hess(2 * n, i) = std::conj(t1);
        w.hess(n + i, 2 * n) = 2.0 * f1 * zb(i);
        w.hess(2 * n, n + i) = std::conj(2.0 * f1 * zb(i));
    }
    w.hess(2 * n, 2 * n) = 2.0 * sol.phi(t);
    return w;
}

// --- sampling -----------------------------------------------------------------

namespace {

CVec shell_zeta_prime(Rng& rng, int n, double lo = 0.5, double hi = 2.0) {
    CVec zp(n + 1);
    double nrm = 0.0;
    for (int k = 0; k <= n; ++k) {
        zp[k] = rng.cnormal();
        nrm += std::norm(zp[k]);
    }
    nrm = std::sqrt(nrm);
    int d = 2 * (n + 1);
    double u = rng.uniform();
    double r = std::pow(std::pow(lo, d) + u * (std::pow(hi, d) - std::pow(lo, d)), 1.0 / d);
    for (auto& c : zp) c *= r / nrm;
    return zp;
}

ExtendedPoint assemble(const CVec& z, const CVec& zp) {
    ExtendedPoint p;
    p.z = z;
    p.zeta.assign(zp.begin(), zp.end() - 1);
    p.zeta0 = zp.back();
    return p;
}

} // namespace

std::vector<ExtendedPoint> sample_extended_interior(const LOperator& L, int count,
                                                    std::uint64_t seed) {
    auto zs = sample_interior(L.domain(), count, seed * 7919);
    Rng rng(seed * 1315423911ULL + 17);
    std::vector<ExtendedPoint> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(assemble(zs[i], shell_zeta_prime(rng, L.n())));
    return out;
}

std::vector<ExtendedPoint> sample_extended_boundary(const LOperator& L, int count,
                                                    std::uint64_t seed) {
    int half = count / 2;
    auto zb = sample_boundary(L.domain(), half, seed * 104729);
    auto zi = sample_interior(L.domain(), count - half, seed * 7919 + 1);
    Rng rng(seed * 2654435761ULL + 3);
    std::vector<ExtendedPoint> out;
    out.reserve(count);
    for (auto& z : zb) out.push_back(assemble(z, shell_zeta_prime(rng, L.n())));
    for (std::size_t i = 0; i < zi.size(); ++i) {
        double r = (i % 2 == 0) ? 0.5 : 2.0; // the shell ends
        CVec zp = shell_zeta_prime(rng, L.n(), r, r);
        out.push_back(assemble(zi[i], zp));
    }
    return out;
}

// --- certification checks ------------------------------------------------------

BarrierCheckReport barrier_lemma_check(const LOperator& L, int samples, std::uint64_t seed) {
    auto pts = sample_extended_interior(L, samples, seed);
    double alpha = L.params().alpha, beta = L.params().beta;
    BarrierCheckReport rep;
    rep.samples = samples;
    rep.worst_margin = -1e300;
    std::vector<double> margins(samples), brackets(samples), Ss(samples);
    parallel_for(samples, [&](int i) {
        const ExtendedPoint& p = pts[i];
        margins[i] = L.apply(barrier_sum(L, p), p);
        PsiData pd = L.psi_data(p.z);
        cplx u1 = 0.0;
        for (int k = 0; k < L.n(); ++k) u1 += p.zeta[k] * pd.d1[k];
        double S = pd.val + beta;
        double z2 = 0.0;
        for (auto& c : p.zeta) z2 += std::norm(c);
        brackets[i] = z2 / alpha + alpha * std::norm(u1) / S + beta * std::norm(p.zeta0);
        Ss[i] = S;
    });
    double c = 0.0;
    for (int i = 0; i < samples; ++i) {
        if (margins[i] > rep.worst_margin) {
            rep.worst_margin = margins[i];
            rep.worst_point = pts[i];
        }
        if (margins[i] < 0.0)
            c = std::max(c, brackets[i] / (std::pow(Ss[i], alpha) * (-margins[i])));
    }
    rep.pass = rep.worst_margin < 0.0;
    rep.c_emp = c;
    return rep;
}

PerturbationReport perturbation_check(const LOperator& L, const RadialSolution& sol, int order,
                                      int samples, std::uint64_t seed) {
    auto pts = sample_extended_interior(L, samples, seed);
    double beta = L.params().beta;
    PerturbationReport rep;
    rep.samples = samples;
    std::vector<double> mus(samples), defs(samples);
    parallel_for(samples, [&](int i) {
        const ExtendedPoint& p = pts[i];
        double Lw = L.apply(perturbation_jet(sol, p, order), p);
        double deficit = -Lw;
        double denom;
        if (order == 1)
            denom = p.zeta_norm() * (1.0 + 1.0 / beta) + std::abs(p.zeta0);
        else
            denom = p.zeta_prime_norm() * p.zeta_prime_norm();
        mus[i] = std::max(0.0, deficit / denom);
        defs[i] = deficit;
    });
    for (int i = 0; i < samples; ++i) {
        rep.mu = std::max(rep.mu, mus[i]);
        rep.worst_deficit = std::max(rep.worst_deficit, defs[i]);
    }
    return rep;
}

KrylovReport krylov_ratio_check(const LOperator& L, const RadialSolution& sol, int samples,
                                std::uint64_t seed) {
    auto interior = sample_extended_interior(L, samples, seed);
    auto boundary = sample_extended_boundary(L, samples / 2, seed + 1);
    KrylovReport rep;
    rep.samples = samples + int(boundary.size());
    rep.hypothesis_ok = true;
    rep.interior_ratio_sup = -1e300;
    rep.boundary_ratio_sup = -1e300;

    int ni = int(interior.size());
    std::vector<double> lw(ni), lv(ni), wv(ni);
    parallel_for(ni, [&](int i) {
        const ExtendedPoint& p = interior[i];
        ExtendedScalar w = perturbation_jet(sol, p, 1);
        ExtendedScalar v = barrier_sqrt(L, p);
        lw[i] = L.apply(w, p);
        lv[i] = L.apply(v, p);
        wv[i] = w.val / v.val;
        if (v.val <= 0.0) lv[i] = 1.0; // flag below
    });
    for (int i = 0; i < ni; ++i) {
        if (lv[i] >= 0.0) rep.hypothesis_ok = false;
        rep.interior_ratio_sup = std::max(rep.interior_ratio_sup, lw[i] / lv[i]);
    }
    std::vector<double> bwv(boundary.size());
    parallel_for(int(boundary.size()), [&](int i) {
        const ExtendedPoint& p = boundary[i];
        ExtendedScalar w = perturbation_jet(sol, p, 1);
        double v = barrier_eval(L, p).v;
        bwv[i] = v > 0.0 ? w.val / v : 0.0;
    });
    for (double r : bwv) rep.boundary_ratio_sup = std::max(rep.boundary_ratio_sup, r);
    if (!rep.hypothesis_ok) return rep;

    double bound = std::max(rep.interior_ratio_sup, rep.boundary_ratio_sup);
    double slack = 1e300;
    for (int i = 0; i < ni; ++i) slack = std::min(slack, bound - wv[i]);
    for (double r : bwv) slack = std::min(slack, bound - r);
    rep.worst_slack = slack;
    rep.pass = slack >= -1e-9 * std::max(1.0, std::abs(bound));
    return rep;
}

AlphaSearchResult search_alpha(const DefiningFunction& dom, LOperator::CoeffField a, int samples,
                               std::uint64_t seed) {
    AlphaSearchResult out;
    for (int k = 1; k <= 10; ++k) {
        double alpha = std::pow(2.0, -k);
        double beta = alpha * alpha / 10.0;
        out.tried.push_back(alpha);
        LOperator L = build_l(dom, a, BarrierParams{alpha, beta});
        BarrierCheckReport rep = barrier_lemma_check(L, samples, seed);
        if (rep.pass) {
            out.found = true;
            out.alpha = alpha;
            out.beta = beta;
            return out;
        }
    }
    return out;
}

} // namespace krylab
