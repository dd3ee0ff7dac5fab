#include "krylab/domain.hpp"

#include <algorithm>
#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

namespace {

PolyJet perturbation_jet(int n, const Perturbation& p) {
    PolyJet a = PolyJet::coord(n, p.i);
    PolyJet b = p.holomorphic ? PolyJet::coord(n, p.j) : PolyJet::coord_bar(n, p.j);
    return PolyJet::re(a * b).scaled(p.amp);
}

// min over sampled closure of the smallest eigenvalue of D^2_C(-psi)
double psh_margin_scan(const PolyJet& psi, int n, int samples = 400) {
    PolyJet rho = psi.scaled(-1.0);
    double margin = 1e300;
    auto dirs = quasi_sphere(2 * n, samples);
    for (int s = 0; s < samples; ++s) {
        double r = std::pow(double(s % 20 + 1) / 20.0, 0.5); // radial stratification
        CVec z(n);
        for (int j = 0; j < n; ++j) z[j] = r * cplx(dirs[s][2 * j], dirs[s][2 * j + 1]);
        HermEig e = herm_eig(to_cmat(hess_c(rho, z)));
        margin = std::min(margin, e.evals(e.evals.size() - 1));
    }
    return margin;
}

double min_boundary_gradient(const DefiningFunction& dom, int samples = 200) {
    double worst = 1e300;
    auto dirs = quasi_sphere(2 * dom.n, samples);
    for (auto& d : dirs) {
        CVec z = boundary_point(dom, d);
        auto g = real_gradient(dom.psi, z);
        double nrm = 0.0;
        for (double v : g) nrm += v * v;
        worst = std::min(worst, std::sqrt(nrm));
    }
    return worst;
}

} // namespace

DefiningFunction make_domain(const DomainSpec& spec) {
    int n = spec.n;
    if (n < 1 || n > 6) fail(ErrKind::invalid_argument, "domain dimension out of range");
    DefiningFunction dom;
    dom.n = n;
    dom.spec = spec;
    switch (spec.kind) {
        case DomainKind::ball:
            dom.psi = PolyJet::constant(n, 1.0, true) - PolyJet::norm_sq(n);
            break;
        case DomainKind::ellipsoid: {
            if (int(spec.axes.size()) != n) fail(ErrKind::invalid_argument, "ellipsoid axis count");
            double amax = 0.0;
            for (double a : spec.axes) {
                if (a <= 0.0) fail(ErrKind::invalid_argument, "ellipsoid semi-axes must be positive");
                amax = std::max(amax, a);
            }
            PolyJet q(n, true);
            for (int j = 0; j < n; ++j) {
                std::vector<int> p(n, 0), qq(n, 0);
                p[j] = qq[j] = 1;
                q.add_term(p, qq, 1.0 / (spec.axes[j] * spec.axes[j]));
            }
            // keep the boundary gradient norm >= 1 for long axes
            double scale = std::max(1.0, amax / 2.0);
            dom.psi = (PolyJet::constant(n, 1.0, true) - q).scaled(scale);
            dom.psi.set_real_flag(true);
            break;
        }
        case DomainKind::perturbed_ball: {
            dom.psi = PolyJet::constant(n, 1.0, true) - PolyJet::norm_sq(n);
            for (auto& p : spec.perturbations) {
                if (p.i < 0 || p.i >= n || p.j < 0 || p.j >= n)
                    fail(ErrKind::invalid_argument, "perturbation index out of range");
                dom.psi = dom.psi - perturbation_jet(n, p);
            }
            dom.psi.set_real_flag(true);
            break;
        }
    }
    dom.psh_margin = psh_margin_scan(dom.psi, n);
    if (dom.psh_margin <= 1e-9)
        fail(ErrKind::geometry,
             "perturbation destroys strict pseudoconvexity, margin = " + std::to_string(dom.psh_margin));
    if (min_boundary_gradient(dom) < 1.0 - 1e-9)
        fail(ErrKind::geometry, "boundary gradient norm below 1");
    return dom;
}

CVec boundary_point(const DefiningFunction& dom, const std::vector<double>& direction) {
    int n = dom.n;
    if (int(direction.size()) != 2 * n) fail(ErrKind::invalid_argument, "direction dimension");
    CVec w(n);
    for (int j = 0; j < n; ++j) w[j] = cplx(direction[2 * j], direction[2 * j + 1]);
    auto val = [&](double t) {
        CVec z(n);
        for (int j = 0; j < n; ++j) z[j] = t * w[j];
        return dom.psi.eval(z).real();
    };
    double lo = 0.0, hi = 1.0;
    while (val(hi) > 0.0 && hi < 64.0) hi *= 2.0;
    if (val(hi) > 0.0) fail(ErrKind::geometry, "boundary ray search failed");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (val(mid) > 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    CVec z(n);
    for (int j = 0; j < n; ++j) z[j] = t * w[j];
    return z;
}

std::vector<CVec> sample_boundary(const DefiningFunction& dom, int count, std::uint64_t offset) {
    auto dirs = quasi_sphere(2 * dom.n, count, offset);
    std::vector<CVec> out;
    out.reserve(count);
    for (auto& d : dirs) out.push_back(boundary_point(dom, d));
    return out;
}

std::vector<CVec> sample_interior(const DefiningFunction& dom, int count, std::uint64_t offset) {
    int n = dom.n;
    Halton seq(2 * n);
    std::vector<CVec> out;
    std::uint64_t idx = 1 + offset;
    double R = 1.0;
    for (double a : dom.spec.axes) R = std::max(R, a);
    R *= 1.05;
    while (int(out.size()) < count) {
        auto u = seq.point(idx++);
        CVec z(n);
        for (int j = 0; j < n; ++j)
            z[j] = cplx(R * (2.0 * u[2 * j] - 1.0), R * (2.0 * u[2 * j + 1] - 1.0));
        if (dom.inside(z, 1e-12)) out.push_back(std::move(z)); // rejection on psi > 0
    }
    return out;
}

// --- adapted coordinates ----------------------------------------------------

double AdaptedChart::Residuals::max() const {
    return std::max(std::max(constant, linear), std::max(quad20, levi));
}

AdaptedChart::Residuals AdaptedChart::residuals() const {
    Residuals r;
    int n = int(base_point.size());
    r.constant = std::abs(local_rho.coeff(std::vector<int>(n, 0), std::vector<int>(n, 0)));
    for (int j = 0; j < n; ++j) {
        std::vector<int> p(n, 0), q(n, 0);
        p[j] = 1;
        cplx want = (j == n - 1) ? cplx(-1.0) : cplx(0.0);
        r.linear = std::max(r.linear, std::abs(local_rho.coeff(p, q) - want));
    }
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            std::vector<int> p(n, 0), q(n, 0);
            p[k]++;
            p[l]++;
            r.quad20 = std::max(r.quad20, std::abs(local_rho.coeff(p, q)));
        }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            std::vector<int> p(n, 0), q(n, 0);
            p[k] = 1;
            q[l] = 1;
            cplx want = (k == l) ? cplx(1.0) : cplx(0.0);
            r.levi = std::max(r.levi, std::abs(local_rho.coeff(p, q) - want));
        }
    return r;
}

double AdaptedChart::third_order_mass() const {
    int n = int(base_point.size());
    double m = 0.0;
    for (auto& [mono, c] : local_rho.terms())
        if (mono.total(n) >= 3) m = std::max(m, std::abs(c));
    return m;
}

AdaptedChart adapted_coordinates(const DefiningFunction& dom, const CVec& p) {
    int n = dom.n;
    if (int(p.size()) != n) fail(ErrKind::invalid_argument, "base point dimension");
    if (std::abs(dom.value(p)) >= 1e-12) fail(ErrKind::geometry, "base point is not on the boundary");

    PolyJet rho = dom.rho();

    // (i) translate p to the origin
    std::vector<PolyJet> translate(n, PolyJet(n));
    for (int j = 0; j < n; ++j) translate[j] = PolyJet::constant(n, p[j]) + PolyJet::coord(n, j);
    PolyJet rho0 = rho.compose(translate);

    // (ii) unitary rotation sending the holomorphic gradient to (0,..,0,-s)
    CVec g = grad_holo(rho0, CVec(n, 0.0));
    EVec v = to_evec(g);
    double s = v.norm();
    if (s < 1e-12) fail(ErrKind::geometry, "vanishing gradient at base point");
    CMat U1 = unitary_with_last_column(-v.conjugate() / s);

    auto linear_map_jets = [n](const CMat& M) {
        std::vector<PolyJet> comp(n, PolyJet(n));
        for (int i = 0; i < n; ++i) {
            comp[i] = PolyJet(n);
            for (int j = 0; j < n; ++j)
                if (M(i, j) != cplx(0.0)) comp[i] = comp[i] + PolyJet::coord(n, j).scaled(M(i, j));
        }
        return comp;
    };
    PolyJet rho1 = rho0.compose(linear_map_jets(U1));

    // pure (2,0) part Q and Levi form H at the origin in the rotated frame
    CMat Q = CMat::Zero(n, n);
    CMat H = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            std::vector<int> pp(n, 0), qq(n, 0);
            pp[k]++;
            pp[l]++;
            cplx c = rho1.coeff(pp, qq);
            Q(k, l) = (k == l) ? 2.0 * c : c;
            std::vector<int> pm(n, 0), qm(n, 0);
            pm[k] = 1;
            qm[l] = 1;
            H(k, l) = rho1.coeff(pm, qm);
        }
    HermEig he = herm_eig(H);
    if (he.evals(n - 1) <= 1e-10) fail(ErrKind::geometry, "degenerate Levi form at base point");

    // (iv) Levi normalization.  The coefficient matrix H(k,l) = rho_{z_k zbar_l}
    // transforms as M^T H conj(M) under w = M y, so the normalizing factor is
    // built from conj(H); the defining function is rescaled by lambda so the
    // linear part stays exactly -2 Re(y_n).
    CMat B = herm_inv_sqrt(H.conjugate());
    EVec rowvec = B.row(n - 1).transpose();
    double lambda = 1.0 / std::pow(s * rowvec.norm(), 2.0);
    CMat W = unitary_with_last_column(rowvec.conjugate() / rowvec.norm());
    CMat M = B * W / std::sqrt(lambda);

    // (iii) quadratic shear: the n-th rotated component absorbs Q(My,My)/(2s)
    CMat Qy = (M.transpose() * Q * M) / (2.0 * s);
    Qy = 0.5 * (Qy + Qy.transpose()).eval();

    AdaptedChart chart;
    chart.base_point = p;
    chart.linear = U1 * M;
    chart.defining_scale = lambda;
    chart.quadratic.assign(n, CMat::Zero(n, n));
    for (int j = 0; j < n; ++j) chart.quadratic[j] = U1(j, n - 1) * Qy;

    // Phi(y) = p + U1 M y + U1 e_n Q(My,My)/(2s) as exact jets
    chart.chart_map.assign(n, PolyJet(n));
    PolyJet shear(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (Qy(k, l) != cplx(0.0))
                shear = shear + (PolyJet::coord(n, k) * PolyJet::coord(n, l)).scaled(Qy(k, l));
    for (int i = 0; i < n; ++i) {
        PolyJet comp = PolyJet::constant(n, p[i]);
        for (int j = 0; j < n; ++j)
            if (chart.linear(i, j) != cplx(0.0))
                comp = comp + PolyJet::coord(n, j).scaled(chart.linear(i, j));
        if (U1(i, n - 1) != cplx(0.0)) comp = comp + shear.scaled(U1(i, n - 1));
        chart.chart_map[i] = comp.pruned(0.0);
    }

    chart.local_rho = rho.compose(chart.chart_map).scaled(lambda).pruned(1e-15);
    chart.local_rho.set_real_flag(true);
    return chart;
}

CVec chart_boundary_point(const AdaptedChart& chart, const std::vector<double>& dir, double r) {
    int n = int(chart.base_point.size());
    if (int(dir.size()) != 2 * n - 1) fail(ErrKind::invalid_argument, "chart direction dimension");
    CVec y(n);
    for (int j = 0; j < n - 1; ++j) y[j] = r * cplx(dir[2 * j], dir[2 * j + 1]);
    double yn = r * dir[2 * n - 2];
    PolyJet drho = chart.local_rho.dz(n - 1);
    double xn = 0.0;
    for (int it = 0; it < 60; ++it) {
        y[n - 1] = cplx(xn, yn);
        double f = chart.local_rho.eval(y).real();
        if (std::abs(f) < 1e-14) break;
        double fp = 2.0 * drho.eval(y).real(); // d/dx_n
        if (std::abs(fp) < 1e-8) fail(ErrKind::geometry, "chart boundary solve stalled");
        xn -= f / fp;
    }
    y[n - 1] = cplx(xn, yn);
    return y;
}

// --- boundary frame ---------------------------------------------------------

BoundaryFrame boundary_frame(const DefiningFunction& dom, const CVec& z) {
    int n = dom.n;
    PolyJet rho = dom.rho();
    BoundaryFrame f;
    f.eta.resize(n);
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        f.eta[i] = rho.dzbar(i).eval(z);
        nrm2 += std::norm(f.eta[i]);
    }
    double nrm = std::sqrt(nrm2);
    if (nrm < 1e-12) fail(ErrKind::geometry, "vanishing gradient");
    // Re(gamma_field) is the unit inner normal; |Re(eta)|_{R^{2n}} = |eta|/2
    f.gamma_field.resize(n);
    for (int i = 0; i < n; ++i) f.gamma_field[i] = -2.0 * f.eta[i] / nrm;
    return f;
}

Eigen::MatrixXd real_hessian(const PolyJet& u, const CVec& z) {
    int n = u.dim();
    Eigen::MatrixXd H(2 * n, 2 * n);
    auto Hc = hess_c(u, z); // u_{z_i zbar_j}
    std::vector<std::vector<cplx>> Hh(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i) {
        PolyJet ui = u.dz(i);
        for (int j = 0; j < n; ++j) Hh[i][j] = ui.dz(j).eval(z); // u_{z_i z_j}
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx hh = Hh[i][j];
            cplx hm = Hc[i][j];
            H(2 * i, 2 * j) = 2.0 * (hh.real() + hm.real());
            H(2 * i, 2 * j + 1) = -2.0 * hh.imag() + 2.0 * hm.imag();
            H(2 * i + 1, 2 * j) = -2.0 * hh.imag() - 2.0 * hm.imag();
            H(2 * i + 1, 2 * j + 1) = -2.0 * hh.real() + 2.0 * hm.real();
        }
    return H;
}

std::vector<double> real_gradient(const PolyJet& u, const CVec& z) {
    int n = u.dim();
    std::vector<double> g(2 * n);
    for (int j = 0; j < n; ++j) {
        cplx d = u.dz(j).eval(z);
        g[2 * j] = 2.0 * d.real();
        g[2 * j + 1] = -2.0 * d.imag();
    }
    return g;
}

double normal_curvature(const DefiningFunction& dom, const CVec& z, const std::vector<double>& T) {
    int n = dom.n;
    if (int(T.size()) != 2 * n) fail(ErrKind::invalid_argument, "tangent dimension");
    PolyJet rho = dom.rho();
    auto g = real_gradient(rho, z);
    double gn = 0.0, tn = 0.0, dot = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
        gn += g[i] * g[i];
        tn += T[i] * T[i];
        dot += g[i] * T[i];
    }
    gn = std::sqrt(gn);
    if (gn < 1e-12) fail(ErrKind::geometry, "vanishing gradient");
    if (std::abs(dot) > 1e-6 * gn * std::sqrt(tn))
        fail(ErrKind::invalid_argument, "direction is not tangent to the level set");
    Eigen::MatrixXd Hr = real_hessian(rho, z);
    double q = 0.0;
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) q += T[i] * Hr(i, j) * T[j];
    return q / (gn * tn);
}

TaylorGroups taylor_expand(const DefiningFunction& dom, const CVec& p) {
    int n = dom.n;
    PolyJet rho = dom.rho();
    std::vector<PolyJet> translate(n, PolyJet(n));
    for (int j = 0; j < n; ++j) translate[j] = PolyJet::constant(n, p[j]) + PolyJet::coord(n, j);
    PolyJet r0 = rho.compose(translate);
    TaylorGroups t;
    t.linear.resize(n);
    t.quad20 = CMat::Zero(n, n);
    t.levi = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<int> pp(n, 0), qq(n, 0);
        pp[j] = 1;
        t.linear[j] = r0.coeff(pp, qq);
    }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            std::vector<int> pp(n, 0), qq(n, 0);
            pp[k]++;
            pp[l]++;
            cplx c = r0.coeff(pp, qq);
            t.quad20(k, l) = (k == l) ? 2.0 * c : c;
            std::vector<int> pm(n, 0), qm(n, 0);
            pm[k] = 1;
            qm[l] = 1;
            t.levi(k, l) = r0.coeff(pm, qm);
        }
    return t;
}

} // namespace krylab
