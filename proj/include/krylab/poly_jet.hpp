#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "krylab/error.hpp"

namespace krylab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// A (1,0) direction: n complex components.
using CDirection = CVec;

// Exponent pack for a monomial z^p zbar^q in up to 7 variables.
// Nibble layout: [p_0..p_{n-1} | q_0..q_{n-1}], each exponent <= 15.
struct Monomial {
    std::uint64_t bits = 0;

    static Monomial make(int n, const std::vector<int>& p, const std::vector<int>& q);
    int p(int /*n*/, int j) const { return int((bits >> (4 * j)) & 0xF); }
    int q(int n, int j) const { return int((bits >> (4 * (n + j))) & 0xF); }
    int total(int n) const;
    bool operator<(const Monomial& o) const { return bits < o.bits; }
    bool operator==(const Monomial& o) const { return bits == o.bits; }
};

// Polynomial in (z, zbar) with exact complex coefficients.  All calculus on
// test functions and defining functions runs through these jets so identity
// checks are round-off only.
class PolyJet {
  public:
    PolyJet() = default;
    explicit PolyJet(int n, bool real_flag = false) : n_(n), real_(real_flag) {}

    int dim() const { return n_; }
    bool real_flag() const { return real_; }
    void set_real_flag(bool r) { real_ = r; }
    bool empty() const { return terms_.empty(); }
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, cplx>& terms() const { return terms_; }

    // Coefficient access by exponent vectors (p over z, q over zbar).
    cplx coeff(const std::vector<int>& p, const std::vector<int>& q) const;
    void add_term(const std::vector<int>& p, const std::vector<int>& q, cplx c);

    PolyJet operator+(const PolyJet& o) const;
    PolyJet operator-(const PolyJet& o) const;
    PolyJet operator*(const PolyJet& o) const;
    PolyJet scaled(cplx s) const;
    PolyJet conjugate() const;

    PolyJet dz(int j) const;    // d/dz_j
    PolyJet dzbar(int j) const; // d/dzbar_j

    cplx eval(const CVec& z) const;

    // Substitute z_j = G_j(w) for holomorphic polynomial components G_j
    // (and zbar_j = conj(G_j)).  Preserves the real flag.
    PolyJet compose(const std::vector<PolyJet>& G) const;

    // Drop coefficients below tol (absolute).
    PolyJet pruned(double tol = 0.0) const;

    // Coefficient-wise check of c_{p,q} == conj(c_{q,p}).
    double real_consistency() const;

    // -- constructors for common pieces --
    static PolyJet constant(int n, cplx c, bool real_flag = false);
    static PolyJet coord(int n, int j);        // z_j
    static PolyJet coord_bar(int n, int j);    // zbar_j
    static PolyJet norm_sq(int n);             // |z|^2
    static PolyJet re(const PolyJet& holo);    // (holo + conj)/2, real-flagged

  private:
    int n_ = 0;
    bool real_ = false;
    std::map<Monomial, cplx> terms_;

    void insert(Monomial m, cplx c);
};

// --- bracket calculus -------------------------------------------------------

// Complex Hessian (u_{z_i zbar_j}(z)), returned row-major, Hermitian for real u.
std::vector<CVec> hess_c(const PolyJet& u, const CVec& z);

// Holomorphic gradient (u_{z_1},...,u_{z_n}) at z.
CVec grad_holo(const PolyJet& u, const CVec& z);

// u_{(zeta)} = zeta_l u_{z_l} + conj(zeta_l) u_{zbar_l} at z.
cplx dir1(const PolyJet& u, const CVec& z, const CDirection& zeta);

// u_{(zeta)(zeta)} = zeta_i zeta_j u_{ij} + 2 zeta_i conj(zeta_j) u_{i jbar} + c.c.
cplx dir2(const PolyJet& u, const CVec& z, const CDirection& zeta);

// u_{[xi][eta]} = u_{xi eta} + u_{xi etabar} + u_{eta xibar} + u_{xibar etabar}.
cplx bracket2(const PolyJet& u, const CVec& z, const CDirection& xi, const CDirection& eta);

// A holomorphic vector field with polynomial coefficients xi_l(z).
struct HoloField {
    std::vector<PolyJet> comps; // each holomorphic (no zbar terms)
};

// u_{(xi)} as a new jet: xi_l(z) u_{z_l} + conj-part.  Real flag preserved
// for real u.
PolyJet field_deriv(const PolyJet& u, const HoloField& xi);

} // namespace krylab
