#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krylab/hessian_ops.hpp"
#include "test_support.hpp"

using namespace krylab;
using namespace krylab::testing;

namespace {

CMat random_unitary(Rng& rng, int n) { return expm(random_skew_hermitian(rng, n)); }

CMat diag(const std::vector<double>& d) {
    CMat A = CMat::Zero(int(d.size()), int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) A(i, i) = d[i];
    return A;
}

// Random Hermitian with spectrum well inside Gamma_n.
CMat random_pd(Rng& rng, int n, double lo = 0.5, double hi = 3.0) {
    CMat U = random_unitary(rng, n);
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = rng.uniform(lo, hi);
    return U * D * U.adjoint();
}

CMat random_hermitian(Rng& rng, int n) {
    CMat A(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = rng.normal();
        for (int j = i + 1; j < n; ++j) {
            cplx c = 0.7 * rng.cnormal();
            A(i, j) = c;
            A(j, i) = std::conj(c);
        }
    }
    return A;
}

} // namespace

TEST_CASE("sigma_k values") {
    CHECK(sigma_k({1, 1, 1}, 2) == doctest::Approx(3.0));
    CHECK(sigma_k({1, 2, 3}, 3) == doctest::Approx(6.0));
    CHECK(sigma_k({1, 2, 3}, 2) == doctest::Approx(11.0));
    CHECK_THROWS_AS((void)sigma_k({1, 2}, 3), Error);
}

TEST_CASE("cone membership and nesting") {
    CHECK(cone_member(std::vector<double>{1, 1}, ConeTag{2, 2}));
    CHECK(!cone_member(std::vector<double>{-1, 3}, ConeTag{2, 2}));
    CHECK(cone_member(std::vector<double>{-1, 3}, ConeTag{1, 2}));

    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        std::vector<double> l(n);
        for (auto& v : l) v = rng.uniform(-2.0, 3.0);
        if (cone_member(l, ConeTag{n, n}))
            for (int k = 1; k <= n; ++k) CHECK(cone_member(l, ConeTag{k, n}));
        for (int k = 2; k <= n; ++k)
            if (cone_member(l, ConeTag{k, n})) CHECK(cone_member(l, ConeTag{1, n}));
    }
}

TEST_CASE("opEval basics and unitary invariance") {
    auto MA3 = HessianOperator::ma(3);
    CHECK(op_eval(MA3, CMat::Identity(3, 3)) == doctest::Approx(1.0));
    CHECK(op_eval(MA3, diag({1, 2, 3})) == doctest::Approx(std::pow(6.0, 1.0 / 3.0)));

    Rng rng(22);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        HessianOperator F = (rep % 2 == 0) ? HessianOperator::ma(n)
                                           : HessianOperator::sigma_root(1 + rep % n, n);
        CMat H = random_pd(rng, n);
        CMat B = random_unitary(rng, n);
        CHECK(std::abs(op_eval(F, B.adjoint() * H * B) - op_eval(F, H)) < 1e-12);
    }

    CHECK_THROWS_AS((void)op_eval(MA3, diag({-1, 1, 1})), Error);
}

TEST_CASE("ellipticity: F(A+P) >= F(A) for random positive P") {
    Rng rng(33);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        CMat P = random_pd(rng, n, 0.1, 1.0);
        CHECK(op_eval(F, H + P) >= op_eval(F, H) - 1e-12);
    }
}

TEST_CASE("homogeneity f(t lambda) = t f(lambda)") {
    Rng rng(44);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + int(rng.uniform() * 3);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        double t = rng.uniform(0.1, 5.0);
        CHECK(std::abs(op_eval(F, t * H) - t * op_eval(F, H)) < 1e-12 * std::max(1.0, op_eval(F, H)));
    }
}

TEST_CASE("opGrad closed cases and Euler identity") {
    auto MA2 = HessianOperator::ma(2);
    CMat P = op_grad(MA2, CMat::Identity(2, 2));
    CHECK(max_abs(P - 0.5 * CMat::Identity(2, 2)) < 1e-13);

    auto S1 = HessianOperator::sigma_root(1, 3);
    CHECK(max_abs(op_grad(S1, diag({1, 2, 5})) - CMat::Identity(3, 3)) < 1e-13);

    // degree-one homogeneity: tr(P H) = F(H)
    Rng rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        CHECK(std::abs((op_grad(F, H) * H).trace().real() - op_eval(F, H)) < 1e-11);
    }
}

TEST_CASE("opGrad matches finite differences of opEval") {
    Rng rng(66);
    auto MA2 = HessianOperator::ma(2);
    CMat H = diag({1, 4});
    CMat P = op_grad(MA2, H);
    for (int rep = 0; rep < 10; ++rep) {
        CMat V = random_hermitian(rng, 2);
        double h = 1e-5;
        double num = (op_eval(MA2, H + h * V) - op_eval(MA2, H - h * V)) / (2 * h);
        double exact = (P * V).trace().real();
        CHECK(std::abs(num - exact) < 1e-7 * std::max(1.0, std::abs(exact)));
    }
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat HH = random_pd(rng, n);
        CMat V = random_hermitian(rng, n);
        CMat PP = op_grad(F, HH);
        double h = 1e-5;
        double num = (op_eval(F, HH + h * V) - op_eval(F, HH - h * V)) / (2 * h);
        double exact = (PP * V).trace().real();
        CHECK(std::abs(num - exact) < 1e-7 * std::max(1.0, std::abs(exact)));
    }

    CHECK_THROWS_AS((void)op_grad(MA2, diag({0.0, 1.0})), Error);
}

TEST_CASE("opSecondForm: linear operator vanishes, ray direction vanishes") {
    auto S1 = HessianOperator::sigma_root(1, 2);
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(std::abs(op_second_form(S1, random_pd(rng, 2), random_hermitian(rng, 2))) < 1e-12);

    auto MA2 = HessianOperator::ma(2);
    // along the ray F(I + tI) = 1 + t; I has a collided spectrum so this
    // also exercises the finite-difference fallback
    CHECK(std::abs(op_second_form(MA2, CMat::Identity(2, 2), CMat::Identity(2, 2))) < 1e-6);

    CMat V = diag({1, -1});
    double q = op_second_form(MA2, CMat::Identity(2, 2), V);
    double h = 1e-4;
    double num = (op_eval(MA2, CMat::Identity(2, 2) + h * V) - 2.0 +
                  op_eval(MA2, CMat::Identity(2, 2) - h * V)) /
                 (h * h);
    CHECK(std::abs(q - num) < 1e-6);
    CHECK(q <= 0.0);
}

TEST_CASE("concavity: opSecondForm <= 0 on 200 random instances") {
    Rng rng(88);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        CMat V = random_hermitian(rng, n);
        CHECK(op_second_form(F, H, V) <= 1e-9);
    }
}

TEST_CASE("opSecondForm against second differences on random instances") {
    Rng rng(99);
    for (int rep = 0; rep < 60; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        HessianOperator F = (rep % 2 == 0) ? HessianOperator::ma(n)
                                           : HessianOperator::sigma_root(1 + rep % n, n);
        CMat H = random_pd(rng, n, 0.6, 2.5);
        CMat V = random_hermitian(rng, n);
        double q = op_second_form(F, H, V);
        double h = 1e-4;
        double num = (op_eval(F, H + h * V) - 2.0 * op_eval(F, H) + op_eval(F, H - h * V)) / (h * h);
        CHECK(std::abs(q - num) < 2e-5 * std::max(1.0, std::abs(q)));
    }
}

TEST_CASE("normalizedLinearization: trace one, spectrum, dual cone sampling") {
    auto MA2 = HessianOperator::ma(2);
    CMat a = normalized_linearization(MA2, CMat::Identity(2, 2));
    CHECK(max_abs(a - 0.5 * CMat::Identity(2, 2)) < 1e-13);

    CMat a14 = normalized_linearization(MA2, diag({1, 4}));
    CHECK(max_abs(a14 - diag({0.8, 0.2})) < 1e-13);

    Rng rng(111);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        CMat A = normalized_linearization(F, H);
        CHECK(std::abs(A.trace().real() - 1.0) < 1e-14);
        HermEig e = herm_eig(A);
        CHECK(e.evals(0) <= 1.0 + 1e-12);
        CHECK(e.evals(n - 1) > 0.0);
    }

    // dual-cone pairing: tr(a B) > 0 for 100 random B in the operator cone
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2;
        int k = 1 + rep % 2;
        HessianOperator F = HessianOperator::sigma_root(k, n);
        CMat H = random_pd(rng, n);
        CMat A = normalized_linearization(F, H);
        CMat B;
        for (;;) {
            B = random_hermitian(rng, n) + 1.5 * CMat::Identity(n, n);
            if (cone_member(B, ConeTag{k, n})) break;
        }
        CHECK((A * B).trace().real() > 0.0);
    }
}

TEST_CASE("asymptotics along rays to the cone boundary") {
    // limsup f = 0 approaching the boundary, sampled along straight rays
    Rng rng(119);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        std::vector<double> inside(n), edge(n);
        for (auto& v : inside) v = rng.uniform(0.5, 2.0);
        // boundary target: keep k-1 positive entries, so sigma_k vanishes
        edge = inside;
        for (int j = k - 1; j < n; ++j) edge[j] = 0.0;
        double prev = 1e300;
        for (double s : {0.0, 0.5, 0.9, 0.99, 0.999, 1.0}) {
            std::vector<double> l(n);
            for (int j = 0; j < n; ++j) l[j] = (1.0 - s) * inside[j] + s * edge[j];
            double val = std::pow(std::max(sigma_k(l, k), 0.0), 1.0 / k);
            CHECK(val <= prev + 1e-12);
            prev = val;
        }
        CHECK(prev < 1e-10);
    }
}

TEST_CASE("improved monotonicity: f grows along the last coordinate") {
    Rng rng(121);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + int(rng.uniform() * 2);
        int k = 1 + int(rng.uniform() * n);
        HessianOperator F = HessianOperator::sigma_root(k, n);
        std::vector<double> l(n);
        for (auto& v : l) v = rng.uniform(0.5, 2.0);
        double prev = -1e300;
        for (double R : {0.0, 1.0, 4.0, 16.0, 64.0}) {
            auto lr = l;
            lr[n - 1] += R;
            double val = f_of_lambda(F, lr);
            CHECK(val >= prev - 1e-12);
            prev = val;
        }
        CHECK(prev > f_of_lambda(F, l) + 1.0);
    }
}

TEST_CASE("maHoloCheck: identity, unitary rotation, quadratic shear") {
    int n = 2;
    Rng rng(131);
    std::vector<PolyJet> id = {PolyJet::coord(n, 0), PolyJet::coord(n, 1)};
    PolyJet u = PolyJet::norm_sq(n);
    CHECK(ma_holo_residual(u, id, {cplx(0.2, 0.1), cplx(-0.4, 0.3)}) < 1e-14);

    CMat U = random_unitary(rng, n);
    std::vector<PolyJet> rot(n, PolyJet(n));
    for (int s = 0; s < n; ++s) {
        rot[s] = PolyJet(n);
        for (int t = 0; t < n; ++t) rot[s] = rot[s] + PolyJet::coord(n, t).scaled(U(s, t));
    }
    CHECK(ma_holo_residual(u, rot, {cplx(0.5, -0.2), cplx(0.1, 0.1)}) < 1e-13);

    std::vector<PolyJet> shear = {PolyJet::coord(n, 0),
                                  PolyJet::coord(n, 1) + PolyJet::coord(n, 0) * PolyJet::coord(n, 0)};
    for (int rep = 0; rep < 20; ++rep) {
        PolyJet up = random_admissible_jet(rng, n);
        CVec w = random_point(rng, n, 0.5);
        CHECK(ma_holo_residual(up, shear, w) < 1e-9);
    }
}

TEST_CASE("hermitian eigensolver reconstructs and orders descending") {
    Rng rng(141);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + int(rng.uniform() * 3);
        CMat H = random_hermitian(rng, n);
        HermEig e = herm_eig(H);
        CMat D = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) D(i, i) = e.evals(i);
        CHECK(max_abs(e.frame * D * e.frame.adjoint() - H) < 1e-12 * std::max(1.0, max_abs(H)));
        CHECK(max_abs(e.frame.adjoint() * e.frame - CMat::Identity(n, n)) < 1e-12);
        for (int i = 0; i + 1 < n; ++i) CHECK(e.evals(i) >= e.evals(i + 1));
    }
}
