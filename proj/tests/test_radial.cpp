#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krylab/radial.hpp"
#include "test_support.hpp"

using namespace krylab;
using namespace krylab::testing;

namespace {
std::vector<double> t_samples(int k = 64) {
    std::vector<double> ts;
    for (int i = 1; i <= k; ++i) ts.push_back(double(i) / k);
    return ts;
}
} // namespace

TEST_CASE("g == 1 recovers |z|^2 - 1 exactly") {
    for (int n : {1, 2, 3}) {
        RadialProblem p;
        p.n = n;
        p.g_coeffs = {1.0};
        RadialSolution sol = solve_radial(p);
        for (double t : t_samples())
            CHECK(std::abs(sol.phi(t) - (t - 1.0)) < 1e-12);
        CHECK(std::abs(sol.dphi(0.37) - 1.0) < 1e-14);
        CHECK(std::abs(sol.d2phi(0.37)) < 1e-14);
        CHECK(radial_ma_residual(sol, t_samples()) < 1e-13);
    }
}

TEST_CASE("g == 0 gives the constant maximal solution") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {0.0};
    RadialSolution sol = solve_radial(p);
    for (double t : t_samples()) {
        CHECK(std::abs(sol.phi(t)) < 1e-14);
        CHECK(std::abs(sol.dphi(t)) < 1e-14);
    }
}

TEST_CASE("monomial profiles match the closed-form antiderivative") {
    // g = t^m, n = 2: phi' = sqrt(2/(m+2)) t^{m/2}
    for (int m : {1, 2, 4}) {
        RadialProblem p;
        p.n = 2;
        p.g_coeffs.assign(m + 1, 0.0);
        p.g_coeffs[m] = 1.0;
        RadialSolution sol = solve_radial(p);
        double c = std::sqrt(2.0 / (m + 2));
        for (double t : t_samples()) {
            CHECK(std::abs(sol.dphi(t) - c * std::pow(t, m / 2.0)) < 1e-12);
            double phi_exact = c * (std::pow(t, m / 2.0 + 1) - 1.0) / (m / 2.0 + 1);
            CHECK(std::abs(sol.phi(t) - phi_exact) < 1e-10);
        }
        CHECK(radial_ma_residual(sol, t_samples()) < 1e-9);
    }
}

TEST_CASE("negative right-hand side is rejected") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {-0.5};
    CHECK_THROWS_AS((void)solve_radial(p), Error);
}

TEST_CASE("residual oracle detects an injected fault") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {0.0, 0.0, 1.0};
    RadialSolution sol = solve_radial(p);
    CHECK(radial_ma_residual(sol, t_samples()) < 1e-9);
    double corrupted = radial_ma_residual(sol, t_samples(), 0.1);
    CHECK(corrupted > 0.05);
}

TEST_CASE("hessian closed form agrees with the exact jet of |z|^2 - 1") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {1.0};
    RadialSolution sol = solve_radial(p);
    PolyJet u = PolyJet::norm_sq(2) - PolyJet::constant(2, 1.0, true);
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        CVec z = random_point(rng, 2);
        double t0 = std::norm(z[0]) + std::norm(z[1]);
        if (t0 > 0.9) {
            double s = std::sqrt(0.9 / t0);
            z[0] *= s;
            z[1] *= s;
        }
        auto Hs = sol.hess(z);
        auto Hj = hess_c(u, z);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(Hs[i][j] - Hj[i][j]) < 1e-13);
        CHECK(std::abs(sol.u(z) - u.eval(z).real()) < 1e-13);
    }
}

TEST_CASE("profile derivatives by finite differences") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {0.0, 0.0, 1.0};
    p.eps = 1e-2;
    RadialSolution sol = solve_radial(p);
    for (double t : {0.2, 0.5, 0.9}) {
        double h = 1e-5;
        CHECK(std::abs((sol.dphi(t + h) - sol.dphi(t - h)) / (2 * h) - sol.d2phi(t)) < 1e-7);
        CHECK(std::abs((sol.d2phi(t + h) - sol.d2phi(t - h)) / (2 * h) - sol.d3phi(t)) < 1e-6);
        CHECK(std::abs((sol.d3phi(t + h) - sol.d3phi(t - h)) / (2 * h) - sol.d4phi(t)) < 1e-5);
    }
}

TEST_CASE("field norms: quadratic case and monotonicity") {
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {1.0};
    RadialSolution sol = solve_radial(p);
    NormReport rep = field_norms(sol, {0.0, 0.1, 0.2});
    CHECK(rep.sup_grad == doctest::Approx(2.0));
    CHECK(rep.boundary_normal_normal == doctest::Approx(2.0));
    REQUIRE(rep.sup_d2.size() == 3);
    // shrinking delta can only widen the region
    CHECK(rep.sup_d2[0] >= rep.sup_d2[1] - 1e-12);
    CHECK(rep.sup_d2[1] >= rep.sup_d2[2] - 1e-12);
    for (double v : rep.sup_d2) CHECK(v >= 0.0);
}

TEST_CASE("comparison and eps monotonicity") {
    // g1 <= g2 with equal boundary data implies u1 >= u2
    RadialProblem p1, p2;
    p1.n = p2.n = 2;
    p1.g_coeffs = {0.0, 0.5};
    p2.g_coeffs = {0.0, 0.5, 0.7};
    RadialSolution u1 = solve_radial(p1), u2 = solve_radial(p2);
    for (double t : t_samples()) CHECK(u1.phi(t) >= u2.phi(t) - 1e-12);

    RadialProblem q = p1;
    for (double eps_lo : {1e-4, 1e-2}) {
        RadialProblem qa = q, qb = q;
        qa.eps = eps_lo;
        qb.eps = eps_lo * 10.0;
        RadialSolution ua = solve_radial(qa), ub = solve_radial(qb);
        for (double t : t_samples()) CHECK(ua.phi(t) >= ub.phi(t) - 1e-12);
    }
}

TEST_CASE("uniform second order bounds across the regularization") {
    // the desk-scale shadow of the C^{1,1} statement, m = n = 2
    RadialProblem p;
    p.n = 2;
    p.g_coeffs = {0.0, 0.0, 1.0};
    std::vector<double> sup_d2, M;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        RadialProblem q = p;
        q.eps = eps;
        NormReport rep = field_norms(solve_radial(q), {0.0});
        sup_d2.push_back(rep.sup_d2[0]);
        M.push_back(rep.boundary_normal_normal);
    }
    auto variation = [](const std::vector<double>& v) {
        double lo = *std::min_element(v.begin(), v.end());
        double hi = *std::max_element(v.begin(), v.end());
        return (hi - lo) / hi;
    };
    CHECK(variation(sup_d2) < 0.05);
    CHECK(variation(M) < 0.05);
    for (double v : sup_d2) CHECK(v < 10.0);
}
