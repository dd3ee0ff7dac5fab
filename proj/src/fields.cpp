#include "krylab/fields.hpp"

#include <algorithm>
#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

CVec AffineSkewHermitianField::at(const CVec& z) const {
    int n = dim();
    if (int(z.size()) != n) fail(ErrKind::invalid_argument, "field evaluation dimension");
    CVec v(n);
    for (int k = 0; k < n; ++k) {
        v[k] = a[k];
        for (int l = 0; l < n; ++l) v[k] += A(k, l) * z[l];
    }
    return v;
}

HoloField AffineSkewHermitianField::as_holo_field() const {
    int n = dim();
    HoloField f;
    f.comps.reserve(n);
    for (int k = 0; k < n; ++k) {
        PolyJet c = PolyJet::constant(n, a[k]);
        for (int l = 0; l < n; ++l)
            if (A(k, l) != cplx(0.0)) c = c + PolyJet::coord(n, l).scaled(A(k, l));
        f.comps.push_back(c);
    }
    return f;
}

double AffineSkewHermitianField::skew_defect() const { return max_abs(CMat(A + A.adjoint())); }

std::vector<AffineSkewHermitianField> standard_fields(int n) {
    if (n < 1) fail(ErrKind::invalid_argument, "dimension must be positive");
    std::vector<AffineSkewHermitianField> out;
    const cplx I(0.0, 1.0);
    // xi_k = d/dz_k + z_k d/dz_n - z_n d/dz_k
    for (int k = 0; k + 1 < n; ++k) {
        AffineSkewHermitianField f;
        f.a.assign(n, 0.0);
        f.a[k] = 1.0;
        f.A = CMat::Zero(n, n);
        f.A(n - 1, k) = 1.0;
        f.A(k, n - 1) = -1.0;
        out.push_back(std::move(f));
    }
    // xi_{n-1+j} = i d/dz_j - i z_j d/dz_n - i z_n d/dz_j
    for (int j = 0; j + 1 < n; ++j) {
        AffineSkewHermitianField f;
        f.a.assign(n, 0.0);
        f.a[j] = I;
        f.A = CMat::Zero(n, n);
        f.A(n - 1, j) = -I;
        f.A(j, n - 1) = -I;
        out.push_back(std::move(f));
    }
    // xi_{2n-1} = i d/dz_n - i z_n d/dz_n
    {
        AffineSkewHermitianField f;
        f.a.assign(n, 0.0);
        f.a[n - 1] = I;
        f.A = CMat::Zero(n, n);
        f.A(n - 1, n - 1) = -I;
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

TangentialSplit split_against_rho(const CVec& xi_at_z, const PolyJet& rho, const CVec& z) {
    int n = int(z.size());
    CVec eta(n);
    double ee = 0.0;
    for (int i = 0; i < n; ++i) {
        eta[i] = rho.dzbar(i).eval(z);
        ee += std::norm(eta[i]);
    }
    if (ee < 1e-24) fail(ErrKind::geometry, "vanishing gradient in tangential split");
    double pairing = 0.0;
    for (int i = 0; i < n; ++i) pairing += (xi_at_z[i] * std::conj(eta[i])).real();
    TangentialSplit s;
    s.pairing = pairing;
    s.coefficient = pairing / ee;
    s.zeta.resize(n);
    for (int i = 0; i < n; ++i) s.zeta[i] = xi_at_z[i] - s.coefficient * eta[i];
    return s;
}

} // namespace

TangentialSplit tangential_split(const CVec& xi_at_z, const DefiningFunction& dom, const CVec& z) {
    return split_against_rho(xi_at_z, dom.rho(), z);
}

double TangentialOrderReport::min_slope() const {
    return std::min(pairing.slope, std::min(projection.slope, unit_norm.slope));
}

TangentialOrderReport approx_tangential_check(const AffineSkewHermitianField& xi,
                                              const AdaptedChart& chart, int dirs_per_radius) {
    int n = int(chart.base_point.size());
    if (xi.dim() != n) fail(ErrKind::invalid_argument, "field dimension mismatch");
    if (chart.residuals().max() > 1e-6)
        fail(ErrKind::invalid_argument, "chart is not in adapted form");

    const PolyJet& rho = chart.local_rho;
    std::vector<double> radii, e1, e2, e3;
    auto dirs = quasi_sphere(2 * n - 1, dirs_per_radius);
    // include the coordinate directions for reproducible coverage
    for (int d = 0; d < 2 * n - 1; ++d) {
        std::vector<double> unit(2 * n - 1, 0.0);
        unit[d] = 1.0;
        dirs.push_back(unit);
        unit[d] = -1.0;
        dirs.push_back(unit);
    }
    for (int k = 3; k <= 10; ++k) {
        double r = std::pow(2.0, -k);
        double m1 = 0.0, m2 = 0.0, m3 = 0.0;
        for (auto& d : dirs) {
            CVec z = chart_boundary_point(chart, d, r);
            CVec v = xi.at(z);
            cplx pair_c = 0.0;
            for (int i = 0; i < n; ++i) pair_c += v[i] * rho.dz(i).eval(z);
            m1 = std::max(m1, std::abs(pair_c.real()));
            TangentialSplit s = split_against_rho(v, rho, z);
            double eta_norm = 0.0;
            for (int i = 0; i < n; ++i) eta_norm += std::norm(v[i] - s.zeta[i]);
            m2 = std::max(m2, std::sqrt(eta_norm));
            double xn = 0.0;
            for (int i = 0; i < n; ++i) xn += std::norm(v[i]);
            m3 = std::max(m3, std::abs(std::sqrt(xn) - 1.0));
        }
        radii.push_back(r);
        e1.push_back(m1);
        e2.push_back(m2);
        e3.push_back(m3);
    }
    TangentialOrderReport rep;
    rep.pairing = fit_log_slope(radii, e1);
    rep.projection = fit_log_slope(radii, e2);
    rep.unit_norm = fit_log_slope(radii, e3);
    return rep;
}

CommutationResiduals commutation_check(const PolyJet& u, const AffineSkewHermitianField& xi,
                                       const CVec& z) {
    int n = u.dim();
    if (xi.dim() != n) fail(ErrKind::invalid_argument, "field dimension mismatch");
    CommutationResiduals res;
    // coefficient relation: (xi_k)_l = A_{kl} and skewness
    HoloField hf = xi.as_holo_field();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            res.coeff = std::max(res.coeff, std::abs(hf.comps[k].dz(l).eval(z) - xi.A(k, l)));
    res.coeff = std::max(res.coeff, xi.skew_defect());

    PolyJet u1 = field_deriv(u, hf);
    PolyJet u2 = field_deriv(u1, hf);
    auto Hu = hess_c(u, z);
    auto Hu1 = hess_c(u1, z);
    auto Hu2 = hess_c(u2, z);

    // jets of u_{i jbar} and their field derivatives
    std::vector<std::vector<PolyJet>> Hjet(n, std::vector<PolyJet>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Hjet[i][j] = u.dz(i).dzbar(j);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx rhs = field_deriv(Hjet[i][j], hf).eval(z);
            for (int k = 0; k < n; ++k) {
                rhs += xi.A(k, i) * Hu[k][j];
                rhs += std::conj(xi.A(k, j)) * Hu[i][k];
            }
            res.third = std::max(res.third, std::abs(Hu1[i][j] - rhs));
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PolyJet hj1 = field_deriv(Hjet[i][j], hf);
            cplx rhs = field_deriv(hj1, hf).eval(z);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    rhs += xi.A(l, i) * xi.A(k, l) * Hu[k][j];
                    rhs += std::conj(xi.A(l, j)) * std::conj(xi.A(k, l)) * Hu[i][k];
                    rhs += std::conj(xi.A(l, j)) * xi.A(k, i) * Hu[k][l];
                    rhs += xi.A(l, i) * std::conj(xi.A(k, j)) * Hu[l][k];
                }
            for (int k = 0; k < n; ++k) {
                cplx hk = field_deriv(Hjet[k][j], hf).eval(z);
                cplx hik = field_deriv(Hjet[i][k], hf).eval(z);
                rhs += 2.0 * xi.A(k, i) * hk;
                rhs += 2.0 * std::conj(xi.A(k, j)) * hik;
            }
            res.fourth = std::max(res.fourth, std::abs(Hu2[i][j] - rhs));
        }
    return res;
}

FQuadraticResult f_quadratic_check(const HessianOperator& F, const PolyJet& u,
                                   const AffineSkewHermitianField& xi, const CVec& z,
                                   double grad_bias) {
    int n = u.dim();
    CMat H = to_cmat(hess_c(u, z));
    if (!cone_member(H, F.cone())) fail(ErrKind::admissibility, "test function not admissible at z");
    CMat P = op_grad(F, H);
    CMat P_used = P + grad_bias * CMat::Identity(n, n);

    HoloField hf = xi.as_holo_field();
    PolyJet u1 = field_deriv(u, hf);
    PolyJet u2 = field_deriv(u1, hf);

    CMat W = to_cmat(hess_c(u1, z));  // u_{(xi) i jbar}
    CMat H2 = to_cmat(hess_c(u2, z)); // u_{(xi)(xi) i jbar}

    CMat Hxi(n, n), Hxixi(n, n); // entrywise field derivatives of u_{i jbar}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PolyJet hij = u.dz(i).dzbar(j);
            PolyJet d1 = field_deriv(hij, hf);
            Hxi(i, j) = d1.eval(z);
            Hxixi(i, j) = field_deriv(d1, hf).eval(z);
        }

    double lhs = (P_used * H2).trace().real();
    double g_xixi = op_second_form(F, H, Hxi) + (P * Hxixi).trace().real();
    double second = op_second_form(F, H, W);

    FQuadraticResult out;
    out.residual = std::abs(lhs - (g_xixi - second));
    out.concavity_slack = lhs - g_xixi;
    out.scale = std::max({1.0, std::abs(lhs), std::abs(g_xixi), std::abs(second)});
    return out;
}

double first_variation_residual(const HessianOperator& F, const PolyJet& u,
                                const AffineSkewHermitianField& xi, const CVec& z) {
    int n = u.dim();
    CMat H = to_cmat(hess_c(u, z));
    CMat P = op_grad(F, H);
    CMat G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += std::conj(xi.A(i, k)) * H(k, j); // (xibar_i)_{kbar} u_{k jbar}
                s += xi.A(j, k) * H(i, k);            // (xi_j)_k u_{i kbar}
            }
            G(i, j) = s;
        }
    return std::abs((P * G).trace().real());
}

ObstructionResult obstruction(const DefiningFunction& dom, const CVec& p) {
    int n = dom.n;
    if (n < 2) fail(ErrKind::invalid_argument, "obstruction needs n >= 2");
    if (std::abs(dom.value(p)) >= 1e-12) fail(ErrKind::geometry, "base point is not on the boundary");
    PolyJet rho = dom.rho();

    std::vector<PolyJet> translate(n, PolyJet(n));
    for (int j = 0; j < n; ++j) translate[j] = PolyJet::constant(n, p[j]) + PolyJet::coord(n, j);
    PolyJet r0 = rho.compose(translate);

    EVec v = to_evec(grad_holo(r0, CVec(n, 0.0)));
    double nu = v.norm();
    if (nu < 1e-12) fail(ErrKind::geometry, "normalization unreachable: degenerate gradient");
    CMat U1 = unitary_with_last_column(-v.conjugate() / nu);

    auto compose_linear = [n](const PolyJet& f, const CMat& M) {
        std::vector<PolyJet> comp(n, PolyJet(n));
        for (int i = 0; i < n; ++i) {
            comp[i] = PolyJet(n);
            for (int j = 0; j < n; ++j)
                if (M(i, j) != cplx(0.0)) comp[i] = comp[i] + PolyJet::coord(n, j).scaled(M(i, j));
        }
        return f.compose(comp);
    };
    PolyJet rhat = compose_linear(r0, U1).scaled(1.0 / nu);

    auto coeff20 = [&](const PolyJet& f, int k, int l) {
        std::vector<int> pp(n, 0), qq(n, 0);
        pp[k]++;
        pp[l]++;
        cplx c = f.coeff(pp, qq);
        return (k == l) ? 2.0 * c : c;
    };
    // rotate phases so rho_{z_k z_k}(0) is real for k < n
    CMat Phase = CMat::Identity(n, n);
    bool need_phase = false;
    for (int k = 0; k + 1 < n; ++k) {
        cplx c = coeff20(rhat, k, k);
        if (std::abs(c.imag()) > 1e-14 * std::max(1.0, std::abs(c))) {
            double theta = -0.5 * std::arg(c);
            Phase(k, k) = std::polar(1.0, theta);
            need_phase = true;
        }
    }
    if (need_phase) rhat = compose_linear(rhat, Phase);

    auto d20 = [&](int k, int l) { return coeff20(rhat, k, l); };
    auto dmix = [&](int kbar, int l) { // rho_{zbar_kbar z_l} = rho_{z_l zbar_kbar}
        std::vector<int> pp(n, 0), qq(n, 0);
        pp[l] = 1;
        qq[kbar] = 1;
        return rhat.coeff(pp, qq);
    };

    const cplx I(0.0, 1.0);
    ObstructionResult out;
    out.normalized_rho = rhat;

    auto solved_field_residual = [&](const CVec& a0, const CMat& A) {
        // linear coefficients of Re(xi_k rho_{z_k}) must cancel except x_n
        PolyJet pair(n);
        for (int k = 0; k < n; ++k) {
            PolyJet xik = PolyJet::constant(n, a0[k]);
            for (int l = 0; l < n; ++l)
                if (A(k, l) != cplx(0.0)) xik = xik + PolyJet::coord(n, l).scaled(A(k, l));
            pair = pair + xik * rhat.dz(k);
        }
        PolyJet re_pair = PolyJet::re(pair);
        double worst = 0.0;
        for (int l = 0; l < n; ++l) {
            std::vector<int> pp(n, 0), qq(n, 0);
            pp[l] = 1;
            cplx alpha = re_pair.coeff(pp, qq);
            if (l + 1 < n) worst = std::max(worst, std::abs(alpha));
            else worst = std::max(worst, std::abs(alpha.imag()));
        }
        return worst;
    };

    auto push = [&](const CVec& a0, CMat A) {
        // skew-hermitian completion of the solved row
        for (int l = 0; l + 1 < n; ++l) A(l, n - 1) = -std::conj(A(n - 1, l));
        out.system_residual = std::max(out.system_residual, solved_field_residual(a0, A));
        out.solved.push_back(std::move(A));
    };

    for (int s = 0; s + 1 < n; ++s) {
        CVec a0(n, 0.0);
        a0[s] = 1.0;
        CMat A = CMat::Zero(n, n);
        for (int l = 0; l + 1 < n; ++l) A(n - 1, l) = d20(s, l) + dmix(s, l);
        A(n - 1, n - 1) = I * (dmix(s, n - 1) + d20(s, n - 1)).imag();
        push(a0, A);
    }
    for (int s = 0; s + 1 < n; ++s) {
        CVec a0(n, 0.0);
        a0[s] = I;
        CMat A = CMat::Zero(n, n);
        for (int l = 0; l + 1 < n; ++l) A(n - 1, l) = I * (d20(s, l) - dmix(s, l));
        A(n - 1, n - 1) = I * (d20(s, n - 1) - dmix(s, n - 1)).real();
        push(a0, A);
    }
    // the i d/dz_n direction: the pairing condition is still solvable; the
    // leftover linear terms of |xi|^2 are the obstruction vector
    {
        CVec a0(n, 0.0);
        a0[n - 1] = I;
        CMat A = CMat::Zero(n, n);
        for (int l = 0; l + 1 < n; ++l) A(n - 1, l) = I * (d20(n - 1, l) - dmix(n - 1, l));
        A(n - 1, n - 1) = I * (d20(n - 1, n - 1).real() - dmix(n - 1, n - 1).real());
        push(a0, A);
    }
    out.obstruction.resize(n - 1);
    for (int l = 0; l + 1 < n; ++l) out.obstruction[l] = I * (d20(n - 1, l) - dmix(n - 1, l));
    return out;
}

} // namespace krylab
