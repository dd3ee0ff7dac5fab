#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krylab/domain.hpp"
#include "test_support.hpp"

using namespace krylab;
using namespace krylab::testing;

TEST_CASE("makeDomain: ball, ellipsoid, perturbed ball") {
    DefiningFunction ball = make_domain(DomainSpec::ball(2));
    CHECK(ball.psh_margin == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ball.value({cplx(0.0, 0.0), cplx(0.0, 0.0)}) == doctest::Approx(1.0));

    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    // psi = 1 - |z1|^2 - |z2|^2/4 exactly
    CHECK(std::abs(ell.psi.coeff({0, 0}, {0, 0}) - 1.0) < 1e-15);
    CHECK(std::abs(ell.psi.coeff({1, 0}, {1, 0}) + 1.0) < 1e-15);
    CHECK(std::abs(ell.psi.coeff({0, 1}, {0, 1}) + 0.25) < 1e-15);
    CHECK(ell.psh_margin == doctest::Approx(0.25).epsilon(1e-9));

    DefiningFunction pb = make_domain(DomainSpec::perturbed(2, {{0, 1, 0.1, true}}));
    CHECK(pb.psh_margin == doctest::Approx(1.0).epsilon(1e-9)); // pluriharmonic term

    // a mixed-type term of this size destroys strict pseudoconvexity
    CHECK_THROWS_AS((void)make_domain(DomainSpec::perturbed(2, {{0, 1, 3.0, false}})), Error);
}

TEST_CASE("defining function sampling invariants") {
    for (auto spec : {DomainSpec::ball(2), DomainSpec::ellipsoid(2, {1.0, 2.0}),
                      DomainSpec::perturbed(2, {{0, 1, 0.1, true}})}) {
        DefiningFunction dom = make_domain(spec);
        for (auto& z : sample_boundary(dom, 50)) CHECK(std::abs(dom.value(z)) < 1e-12);
        for (auto& z : sample_interior(dom, 50)) CHECK(dom.value(z) > 0.0);
        for (auto& z : sample_boundary(dom, 50)) {
            auto g = real_gradient(dom.psi, z);
            double nrm = 0.0;
            for (double v : g) nrm += v * v;
            CHECK(std::sqrt(nrm) >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("real hessian against finite differences") {
    Rng rng(42);
    PolyJet u = random_real_jet(rng, 2, 4);
    CVec z = random_point(rng, 2);
    Eigen::MatrixXd H = real_hessian(u, z);
    auto f = [&](double a, double b, double c, double d) {
        return u.eval({cplx(z[0].real() + a, z[0].imag() + b),
                       cplx(z[1].real() + c, z[1].imag() + d)})
            .real();
    };
    double h = 1e-4;
    double fxx = (f(h, 0, 0, 0) - 2 * f(0, 0, 0, 0) + f(-h, 0, 0, 0)) / (h * h);
    CHECK(std::abs(H(0, 0) - fxx) < 1e-5 * std::max(1.0, std::abs(fxx)));
    double fxy = (f(h, h, 0, 0) - f(h, -h, 0, 0) - f(-h, h, 0, 0) + f(-h, -h, 0, 0)) / (4 * h * h);
    CHECK(std::abs(H(0, 1) - fxy) < 1e-5 * std::max(1.0, std::abs(fxy)));
    double fyd = (f(0, h, 0, h) - f(0, h, 0, -h) - f(0, -h, 0, h) + f(0, -h, 0, -h)) / (4 * h * h);
    CHECK(std::abs(H(1, 3) - fyd) < 1e-5 * std::max(1.0, std::abs(fyd)));
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adapted coordinates: ball at the pole is exact") {
    for (int n : {2, 3}) {
        DefiningFunction ball = make_domain(DomainSpec::ball(n));
        CVec p(n, 0.0);
        p[n - 1] = 1.0;
        AdaptedChart chart = adapted_coordinates(ball, p);
        CHECK(chart.residuals().max() < 1e-13);
        CHECK(chart.third_order_mass() < 1e-13); // no third order remainder
        std::vector<int> pn(n, 0), qn(n, 0);
        pn[n - 1] = 1;
        CHECK(std::abs(chart.local_rho.coeff(pn, qn) + 1.0) < 1e-14);
        // orientation: a step inward (x_n > 0) lands inside
        CVec y(n, 0.0);
        y[n - 1] = 0.01;
        CHECK(chart.local_rho.eval(y).real() < 0.0);
    }
}

TEST_CASE("adapted coordinates: random boundary points, ball and ellipsoids") {
    std::vector<DomainSpec> specs = {DomainSpec::ball(2), DomainSpec::ellipsoid(2, {1.0, 2.0}),
                                     DomainSpec::ellipsoid(2, {0.8, 1.25})};
    for (auto& spec : specs) {
        DefiningFunction dom = make_domain(spec);
        for (auto& p : sample_boundary(dom, 20)) {
            AdaptedChart chart = adapted_coordinates(dom, p);
            CHECK(chart.residuals().max() < 1e-9);
        }
    }
    DefiningFunction ball = make_domain(DomainSpec::ball(2));
    CHECK_THROWS_AS((void)adapted_coordinates(ball, {cplx(0.5, 0.0), cplx(0.0, 0.0)}), Error);
}

TEST_CASE("adapted coordinates: quadratic shear appears only with (2,0) terms") {
    // Hermitian quadrics carry no pure (2,0) part, so the shear vanishes
    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    AdaptedChart ce = adapted_coordinates(ell, {cplx(1.0, 0.0), cplx(0.0, 0.0)});
    double shear_mass = 0.0;
    for (auto& Q : ce.quadratic) shear_mass = std::max(shear_mass, max_abs(Q));
    CHECK(shear_mass < 1e-12);
    CHECK(ce.residuals().max() < 1e-9);

    // a Re(z1 z2) term forces a genuine shear
    DefiningFunction pb = make_domain(DomainSpec::perturbed(2, {{0, 1, 0.1, true}}));
    CVec p = boundary_point(pb, {0.3, 0.1, 0.9, 0.2});
    AdaptedChart cp = adapted_coordinates(pb, p);
    double mass = 0.0;
    for (auto& Q : cp.quadratic) mass = std::max(mass, max_abs(Q));
    CHECK(mass > 1e-3);
    CHECK(cp.residuals().max() < 1e-9);
}

TEST_CASE("adapted coordinates are idempotent") {
    DefiningFunction pb = make_domain(DomainSpec::perturbed(2, {{0, 1, 0.1, true}}));
    CVec p = boundary_point(pb, {0.5, -0.2, 0.7, 0.1});
    AdaptedChart c1 = adapted_coordinates(pb, p);

    DefiningFunction local;
    local.n = 2;
    local.psi = c1.local_rho.scaled(-1.0);
    local.psi.set_real_flag(true);
    local.spec = DomainSpec::ball(2); // only the jet matters below
    AdaptedChart c2 = adapted_coordinates(local, CVec(2, 0.0));
    CHECK(c2.residuals().max() < 1e-9);
    // nothing is left to normalize, so the second chart is unitary
    CMat U = c2.linear;
    CHECK(max_abs(CMat(U.adjoint() * U - CMat::Identity(2, 2))) < 1e-9);
}

TEST_CASE("x_n is second order on the chart boundary graph") {
    for (auto spec : {DomainSpec::ball(2), DomainSpec::ellipsoid(2, {1.0, 2.0})}) {
        DefiningFunction dom = make_domain(spec);
        CVec p = boundary_point(dom, {0.4, 0.2, 0.8, -0.1});
        AdaptedChart chart = adapted_coordinates(dom, p);
        std::vector<double> radii, vals;
        auto dirs = quasi_sphere(3, 24);
        for (int k = 3; k <= 10; ++k) {
            double r = std::pow(2.0, -k);
            double worst = 0.0;
            for (auto& d : dirs) {
                CVec y = chart_boundary_point(chart, d, r);
                worst = std::max(worst, std::abs(y[1].real()));
            }
            radii.push_back(r);
            vals.push_back(worst);
        }
        SlopeFit fit = fit_log_slope(radii, vals);
        CHECK(fit.slope >= 1.9);
    }
}

TEST_CASE("boundary frame: inner normal and curvature") {
    DefiningFunction ball = make_domain(DomainSpec::ball(2));
    CVec pole = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    BoundaryFrame f = boundary_frame(ball, pole);
    // u = |z|^2 decreases toward the center along gamma
    PolyJet nsq = PolyJet::norm_sq(2);
    double ugamma = 0.5 * dir1(nsq, pole, f.gamma_field).real();
    CHECK(ugamma == doctest::Approx(-2.0));

    // round sphere: curvature 1 in every tangent direction
    Rng rng(9);
    for (auto& z : sample_boundary(ball, 20)) {
        auto g = real_gradient(ball.rho(), z);
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<double> T(4);
            for (auto& v : T) v = rng.normal();
            double dot = 0.0, gn = 0.0;
            for (int i = 0; i < 4; ++i) {
                dot += T[i] * g[i];
                gn += g[i] * g[i];
            }
            for (int i = 0; i < 4; ++i) T[i] -= dot / gn * g[i];
            double tn = 0.0;
            for (double v : T) tn += v * v;
            if (tn < 1e-8) continue;
            CHECK(normal_curvature(ball, z, T) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    // ellipsoid (1,2) at (1,0): principal curvatures 1 and 1/4
    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    CVec q = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    CHECK(normal_curvature(ell, q, {0, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(normal_curvature(ell, q, {0, 0, 1, 0}) == doctest::Approx(0.25));
    CHECK(normal_curvature(ell, q, {0, 0, 0, 1}) == doctest::Approx(0.25));

    CHECK_THROWS_AS((void)boundary_frame(ball, {cplx(0.0, 0.0), cplx(0.0, 0.0)}), Error);
}

TEST_CASE("taylorExpand coefficient groups") {
    int n = 2;
    DefiningFunction ball = make_domain(DomainSpec::ball(n));
    CVec p = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    TaylorGroups t = taylor_expand(ball, p);
    CHECK(std::abs(t.linear[0]) < 1e-14);
    CHECK(std::abs(t.linear[1] - 1.0) < 1e-14); // rho = 2 Re(z_n) + ... after translation
    CHECK(max_abs(CMat(t.levi - CMat::Identity(n, n))) < 1e-14);
    CHECK(max_abs(t.quad20) < 1e-14);

    DefiningFunction pb = make_domain(DomainSpec::perturbed(2, {{0, 1, 0.1, true}}));
    TaylorGroups tp = taylor_expand(pb, p);
    // rho = -psi carries +0.05 on the symmetrized z1 z2 slot
    CHECK(std::abs(tp.quad20(0, 1) - 0.05) < 1e-14);
    CHECK(std::abs(tp.quad20(1, 0) - 0.05) < 1e-14);

    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    TaylorGroups te = taylor_expand(ell, {cplx(1.0, 0.0), cplx(0.0, 0.0)});
    CHECK(std::abs(te.levi(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(te.levi(1, 1) - 0.25) < 1e-14);
}
