#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "krylab/fields.hpp"
#include "test_support.hpp"

using namespace krylab;
using namespace krylab::testing;

namespace {

AffineSkewHermitianField random_affine_field(Rng& rng, int n) {
    AffineSkewHermitianField f;
    f.a.resize(n);
    for (auto& c : f.a) c = 0.7 * rng.cnormal();
    f.A = random_skew_hermitian(rng, n);
    return f;
}

} // namespace

TEST_CASE("standard fields: forms, skewness, span") {
    auto f2 = standard_fields(2);
    REQUIRE(f2.size() == 3);
    CHECK(std::abs(f2[0].a[0] - 1.0) < 1e-15);
    CHECK(std::abs(f2[0].A(0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(f2[0].A(1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(f2[2].a[1] - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(f2[2].A(1, 1) - cplx(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(f2[2].A(0, 0)) < 1e-15);

    for (int n : {1, 2, 3, 4}) {
        auto fields = standard_fields(n);
        REQUIRE(int(fields.size()) == 2 * n - 1);
        for (auto& f : fields) CHECK(f.skew_defect() < 1e-15);
        // real parts at the origin: independent and free of the x_n slot
        Eigen::MatrixXd R(2 * n - 1, 2 * n);
        for (int k = 0; k < 2 * n - 1; ++k)
            for (int j = 0; j < n; ++j) {
                R(k, 2 * j) = fields[k].a[j].real();
                R(k, 2 * j + 1) = fields[k].a[j].imag();
            }
        Eigen::MatrixXd G = R * R.transpose();
        CHECK(G.determinant() > 1e-6);
        for (int k = 0; k < 2 * n - 1; ++k) CHECK(std::abs(R(k, 2 * (n - 1))) < 1e-15);
    }
}

TEST_CASE("skew-hermitian exponentials are unitary") {
    Rng rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        int n = 2 + int(rng.uniform() * 3);
        CMat A = random_skew_hermitian(rng, n);
        for (double t : {1.0, -1.0, 0.1, -0.1}) {
            CMat E = expm(CMat(t * A.conjugate()));
            CHECK(max_abs(CMat(E.adjoint() * E - CMat::Identity(n, n))) < 1e-12);
        }
    }
    for (auto& f : standard_fields(3))
        for (double t : {1.0, -1.0, 0.1, -0.1}) {
            CMat E = expm(CMat(t * f.A.conjugate()));
            CHECK(max_abs(CMat(E.adjoint() * E - CMat::Identity(3, 3))) < 1e-12);
        }
}

TEST_CASE("approximate tangentiality of the standard fields") {
    for (int n : {2, 3}) {
        DefiningFunction ball = make_domain(DomainSpec::ball(n));
        CVec p(n, 0.0);
        p[n - 1] = 1.0;
        AdaptedChart chart = adapted_coordinates(ball, p);
        for (auto& f : standard_fields(n)) {
            TangentialOrderReport rep = approx_tangential_check(f, chart, 24);
            CHECK(rep.min_slope() >= 1.9);
        }
    }
    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    CVec p = boundary_point(ell, {0.3, -0.4, 0.6, 0.5});
    AdaptedChart chart = adapted_coordinates(ell, p);
    for (auto& f : standard_fields(2)) {
        TangentialOrderReport rep = approx_tangential_check(f, chart, 24);
        CHECK(rep.min_slope() >= 1.9);
    }
}

TEST_CASE("tangentiality negative controls") {
    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    CVec p = boundary_point(ell, {0.3, -0.4, 0.6, 0.5});
    AdaptedChart chart = adapted_coordinates(ell, p);

    // the plain normal direction fails condition (1) at order zero
    AffineSkewHermitianField normal;
    normal.a = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    normal.A = CMat::Zero(2, 2);
    TangentialOrderReport rn = approx_tangential_check(normal, chart, 24);
    CHECK(rn.pairing.slope < 0.5);

    // a constant tangent without the rotation part only reaches order one
    AffineSkewHermitianField flat;
    flat.a = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    flat.A = CMat::Zero(2, 2);
    TangentialOrderReport rf = approx_tangential_check(flat, chart, 24);
    CHECK(rf.pairing.slope < 1.5);
    CHECK(rf.pairing.slope > 0.6);
}

TEST_CASE("tangential split: reassembly and orthogonality") {
    DefiningFunction ball = make_domain(DomainSpec::ball(2));
    Rng rng(77);
    auto fields = standard_fields(2);
    for (auto& z : sample_boundary(ball, 25)) {
        BoundaryFrame fr = boundary_frame(ball, z);
        for (auto& f : fields) {
            CVec xi = f.at(z);
            TangentialSplit s = tangential_split(xi, ball, z);
            // exact reassembly xi = c eta + zeta
            for (int i = 0; i < 2; ++i)
                CHECK(std::abs(xi[i] - (s.coefficient * fr.eta[i] + s.zeta[i])) < 1e-12);
            // Re(zeta) orthogonal to the normal
            cplx pair = 0.0;
            for (int i = 0; i < 2; ++i) pair += s.zeta[i] * std::conj(fr.eta[i]);
            CHECK(std::abs(pair.real()) < 1e-12);
        }
        // xi = eta: the tangential remainder stays orthogonal
        TangentialSplit se = tangential_split(fr.eta, ball, z);
        cplx pair = 0.0;
        for (int i = 0; i < 2; ++i) pair += se.zeta[i] * std::conj(fr.eta[i]);
        CHECK(std::abs(pair.real()) < 1e-12);
        // a tangent input is returned unchanged
        CVec tangent = se.zeta;
        if (std::abs(tangent[0]) + std::abs(tangent[1]) > 1e-9) {
            TangentialSplit st = tangential_split(tangent, ball, z);
            CHECK(std::abs(st.coefficient) < 1e-12);
        }
    }
}

TEST_CASE("commutation identities") {
    Rng rng(101);
    // constant field: all terms commute exactly
    {
        PolyJet u = random_real_jet(rng, 2, 4);
        AffineSkewHermitianField f;
        f.a = {cplx(0.4, 0.1), cplx(-0.2, 0.7)};
        f.A = CMat::Zero(2, 2);
        CommutationResiduals r = commutation_check(u, f, random_point(rng, 2));
        CHECK(r.max() < 1e-13);
    }
    // |z|^2 with each standard field
    for (auto& f : standard_fields(2)) {
        CommutationResiduals r = commutation_check(PolyJet::norm_sq(2), f, random_point(rng, 2));
        CHECK(r.max() < 1e-13);
    }
    // 100 random instances
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + (rep % 3 == 0 ? 1 : 0);
        PolyJet u = random_real_jet(rng, n, 4);
        AffineSkewHermitianField f = random_affine_field(rng, n);
        CommutationResiduals r = commutation_check(u, f, random_point(rng, n));
        CHECK(r.max() < 1e-10);
    }
}

TEST_CASE("operator quadratic identity and concavity") {
    Rng rng(202);
    // sigma_1 is linear: the identity reduces to the commuting trace
    {
        PolyJet u = random_admissible_jet(rng, 2);
        AffineSkewHermitianField f = random_affine_field(rng, 2);
        FQuadraticResult r =
            f_quadratic_check(HessianOperator::sigma_root(1, 2), u, f, random_point(rng, 2));
        CHECK(r.residual / r.scale < 1e-12);
    }
    // constant field: plain chain rule
    {
        PolyJet u = random_admissible_jet(rng, 2);
        AffineSkewHermitianField f;
        f.a = {cplx(0.3, -0.2), cplx(0.1, 0.5)};
        f.A = CMat::Zero(2, 2);
        FQuadraticResult r = f_quadratic_check(HessianOperator::ma(2), u, f, random_point(rng, 2));
        CHECK(r.residual / r.scale < 1e-12);
    }
    // random instances across the operator family
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + (rep % 2);
        HessianOperator F = (rep % 3 == 0)   ? HessianOperator::sigma_root(1, n)
                            : (rep % 3 == 1) ? HessianOperator::sigma_root(2, n)
                                             : HessianOperator::ma(n);
        PolyJet u = random_admissible_jet(rng, n);
        AffineSkewHermitianField f = random_affine_field(rng, n);
        CVec z = random_point(rng, n, 0.8);
        FQuadraticResult r = f_quadratic_check(F, u, f, z);
        CHECK(r.residual / r.scale < 1e-8);
        CHECK(r.concavity_slack >= -1e-9);
        CHECK(first_variation_residual(F, u, f, z) < 1e-10 * r.scale);
    }
    // fault injection must be caught
    {
        PolyJet u = random_admissible_jet(rng, 2);
        AffineSkewHermitianField f = random_affine_field(rng, 2);
        FQuadraticResult r =
            f_quadratic_check(HessianOperator::ma(2), u, f, random_point(rng, 2), 1e-3);
        CHECK(r.residual / r.scale > 1e-6);
    }
    // n = 1 edge: the scalar Monge-Ampere case
    {
        PolyJet u = random_admissible_jet(rng, 1);
        AffineSkewHermitianField f;
        f.a = {cplx(0.0, 1.0)};
        f.A = CMat::Zero(1, 1);
        f.A(0, 0) = cplx(0.0, -1.0);
        CVec z = {cplx(0.2, -0.3)};
        CHECK(commutation_check(u, f, z).max() < 1e-12);
        FQuadraticResult r = f_quadratic_check(HessianOperator::ma(1), u, f, z);
        CHECK(r.residual / r.scale < 1e-10);
    }
}

TEST_CASE("obstruction: ball vanishes and reproduces the rotation fields") {
    for (int n : {2, 3}) {
        DefiningFunction ball = make_domain(DomainSpec::ball(n));
        CVec p(n, 0.0);
        p[n - 1] = 1.0;
        ObstructionResult res = obstruction(ball, p);
        REQUIRE(int(res.solved.size()) == 2 * n - 1);
        CHECK(res.system_residual < 1e-12);
        for (auto& o : res.obstruction) CHECK(std::abs(o) < 1e-12);
        for (auto& A : res.solved) CHECK(max_abs(CMat(A + A.adjoint())) < 1e-12);
        // first solved family matches the standard rotation field
        auto std_fields = standard_fields(n);
        CHECK(max_abs(CMat(res.solved[0] - std_fields[0].A)) < 1e-12);
    }
}

TEST_CASE("obstruction: perturbed ball against the frozen analytic value") {
    // psi = 1 - |z|^2 - c Re(z1 z2), base point (0,1), c = 0.1.  Normalizing
    // by hand: gradient (c/2, 1), nu = sqrt(1 + c^2/4), and the normalized
    // (2,0) coefficient on z1 z2 is -(c/2)(1 - c^2/4 ...)/nu^3 derived from
    // rotating with U1 = [[1,-c/2],[-c/2,-1]]/nu; the obstruction is
    // i * rho_{z2 z1}(0).
    double c = 0.1;
    DefiningFunction pb = make_domain(DomainSpec::perturbed(2, {{0, 1, c, true}}));
    CVec p = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    ObstructionResult res = obstruction(pb, p);
    REQUIRE(res.obstruction.size() == 1);
    CHECK(res.system_residual < 1e-12);

    double nu = std::sqrt(1.0 + c * c / 4.0);
    // w1 w2 after rotation: (1/nu^2)[-(c/2) y1^2 - (1 - c^2/4) y1 y2 + (c/2) y2^2]
    double coeff_y1y2 = c * 0.5 * (-(1.0 - c * c / 4.0)) / (nu * nu); // from c*Re(w1 w2)
    cplx rho_z2z1 = coeff_y1y2 / nu;                                  // defining scale 1/nu
    cplx expected = cplx(0.0, 1.0) * rho_z2z1;
    CHECK(std::abs(res.obstruction[0] - expected) < 1e-12);
    CHECK(std::abs(res.obstruction[0]) > 0.04);
}

TEST_CASE("obstruction systems stay consistent on generic domains") {
    DefiningFunction ell = make_domain(DomainSpec::ellipsoid(2, {1.0, 2.0}));
    for (auto& p : sample_boundary(ell, 10)) {
        ObstructionResult res = obstruction(ell, p);
        CHECK(res.system_residual < 1e-12);
    }
    DefiningFunction ball = make_domain(DomainSpec::ball(2));
    CHECK_THROWS_AS((void)obstruction(ball, {cplx(0.2, 0.0), cplx(0.2, 0.0)}), Error);
}
