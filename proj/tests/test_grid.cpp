#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krylab/grid.hpp"
#include "test_support.hpp"

using namespace krylab;

namespace {
GridProblem ball_problem(int N, std::vector<double> g, double eps,
                         std::function<double(const CVec&)> bnd = nullptr) {
    GridProblem p;
    p.N = N;
    p.boundary = bnd ? bnd : [](const CVec&) { return 0.0; };
    RadialProblem rp;
    rp.g_coeffs = std::move(g);
    p.rhs = [rp, eps](const CVec& z) {
        double t = std::norm(z[0]) + std::norm(z[1]);
        return rp.g(t) + eps;
    };
    return p;
}
} // namespace

TEST_CASE("constant right-hand side reproduces |z|^2 - 1") {
    GridField f = solve_grid2(ball_problem(9, {1.0}, 0.0));
    CHECK(f.converged);
    double err = f.sup_error([](const CVec& z) { return std::norm(z[0]) + std::norm(z[1]) - 1.0; });
    CHECK(err < 1e-6); // scheme and cut cells are exact on quadratics
    CHECK(f.admissibility_defect() > -1e-6);
}

TEST_CASE("pluriharmonic data with vanishing right-hand side is maximal") {
    auto bnd = [](const CVec& z) { return z[1].real(); };
    GridField f = solve_grid2(ball_problem(9, {0.0}, 1e-4, bnd));
    CHECK(f.converged);
    double err = f.sup_error([](const CVec& z) { return z[1].real(); });
    CHECK(err < 0.05); // Re(z_2) + O(eps)
}

TEST_CASE("refinement decreases the error for a genuine profile") {
    RadialProblem rp;
    rp.n = 2;
    rp.g_coeffs = {0.0, 0.0, 1.0};
    rp.eps = 1e-2;
    RadialSolution oracle = solve_radial(rp);
    GridField f9 = solve_grid2(ball_problem(9, rp.g_coeffs, rp.eps));
    GridField f13 = solve_grid2(ball_problem(13, rp.g_coeffs, rp.eps));
    CHECK(f9.converged);
    CHECK(f13.converged);
    double e9 = f9.sup_error([&](const CVec& z) { return oracle.u(z); });
    double e13 = f13.sup_error([&](const CVec& z) { return oracle.u(z); });
    CHECK(e9 < 0.10);
    CHECK(e13 < e9);
}

TEST_CASE("norm reports from grid differences") {
    GridField f = solve_grid2(ball_problem(13, {1.0}, 0.0));
    // u = |z|^2 - 1: gradient 2|z|, all pure second differences equal 2
    CHECK(f.sup_gradient() <= 2.0 + 1e-6);
    CHECK(f.sup_gradient() >= 1.0 - 1e-9);
    CHECK(f.sup_second_difference() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)solve_grid2(ball_problem(3, {1.0}, 0.0)), Error);
    GridProblem bad = ball_problem(9, {1.0}, 0.0);
    bad.rhs = [](const CVec&) { return -1.0; };
    CHECK_THROWS_AS((void)solve_grid2(bad), Error);
}
