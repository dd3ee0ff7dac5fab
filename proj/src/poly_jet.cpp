#include "krylab/poly_jet.hpp"

#include <algorithm>
#include <cmath>

namespace krylab {

namespace {
constexpr double kDropTol = 0.0; // exact algebra; only exact zeros dropped
constexpr int kMaxExp = 15;

void check_dim(int n, std::size_t len, const char* what) {
    if (int(len) != n) fail(ErrKind::invalid_argument, std::string("dimension mismatch in ") + what);
}
} // namespace

Monomial Monomial::make(int n, const std::vector<int>& p, const std::vector<int>& q) {
    if (n > 7) fail(ErrKind::invalid_argument, "jet dimension cap is 7");
    Monomial m;
    for (int j = 0; j < n; ++j) {
        if (p[j] < 0 || p[j] > kMaxExp || q[j] < 0 || q[j] > kMaxExp)
            fail(ErrKind::invalid_argument, "monomial exponent out of range");
        m.bits |= std::uint64_t(p[j]) << (4 * j);
        m.bits |= std::uint64_t(q[j]) << (4 * (n + j));
    }
    return m;
}

int Monomial::total(int n) const {
    int s = 0;
    for (int j = 0; j < 2 * n; ++j) s += int((bits >> (4 * j)) & 0xF);
    return s;
}

int PolyJet::degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.total(n_));
    return d;
}

cplx PolyJet::coeff(const std::vector<int>& p, const std::vector<int>& q) const {
    auto it = terms_.find(Monomial::make(n_, p, q));
    return it == terms_.end() ? cplx(0.0) : it->second;
}

void PolyJet::add_term(const std::vector<int>& p, const std::vector<int>& q, cplx c) {
    check_dim(n_, p.size(), "add_term");
    check_dim(n_, q.size(), "add_term");
    insert(Monomial::make(n_, p, q), c);
}

void PolyJet::insert(Monomial m, cplx c) {
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (std::abs(it->second) <= kDropTol) terms_.erase(it);
    } else if (std::abs(c) <= kDropTol) {
        terms_.erase(it);
    }
}

PolyJet PolyJet::operator+(const PolyJet& o) const {
    check_dim(n_, std::size_t(o.n_), "operator+");
    PolyJet r(n_, real_ && o.real_);
    r.terms_ = terms_;
    for (auto& [m, c] : o.terms_) r.insert(m, c);
    return r;
}

PolyJet PolyJet::operator-(const PolyJet& o) const { return *this + o.scaled(-1.0); }

PolyJet PolyJet::operator*(const PolyJet& o) const {
    check_dim(n_, std::size_t(o.n_), "operator*");
    PolyJet r(n_, real_ && o.real_);
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            // nibble-wise exponent add with overflow check
            for (int j = 0; j < 2 * n_; ++j) {
                int e = int((ma.bits >> (4 * j)) & 0xF) + int((mb.bits >> (4 * j)) & 0xF);
                if (e > kMaxExp)
                    fail(ErrKind::invalid_argument, "monomial exponent overflow in product");
            }
            Monomial m;
            m.bits = ma.bits + mb.bits;
            r.insert(m, ca * cb);
        }
    return r;
}

PolyJet PolyJet::scaled(cplx s) const {
    PolyJet r(n_, real_ && s.imag() == 0.0);
    for (auto& [m, c] : terms_) r.insert(m, c * s);
    return r;
}

PolyJet PolyJet::conjugate() const {
    PolyJet r(n_, real_);
    for (auto& [m, c] : terms_) {
        Monomial t;
        for (int j = 0; j < n_; ++j) {
            t.bits |= std::uint64_t(m.q(n_, j)) << (4 * j);
            t.bits |= std::uint64_t(m.p(n_, j)) << (4 * (n_ + j));
        }
        r.insert(t, std::conj(c));
    }
    return r;
}

PolyJet PolyJet::dz(int j) const {
    if (j < 0 || j >= n_) fail(ErrKind::invalid_argument, "dz index");
    PolyJet r(n_, false);
    for (auto& [m, c] : terms_) {
        int e = m.p(n_, j);
        if (e == 0) continue;
        Monomial t = m;
        t.bits -= std::uint64_t(1) << (4 * j);
        r.insert(t, c * double(e));
    }
    return r;
}

PolyJet PolyJet::dzbar(int j) const {
    if (j < 0 || j >= n_) fail(ErrKind::invalid_argument, "dzbar index");
    PolyJet r(n_, false);
    for (auto& [m, c] : terms_) {
        int e = m.q(n_, j);
        if (e == 0) continue;
        Monomial t = m;
        t.bits -= std::uint64_t(1) << (4 * (n_ + j));
        r.insert(t, c * double(e));
    }
    return r;
}

cplx PolyJet::eval(const CVec& z) const {
    check_dim(n_, z.size(), "eval");
    // power tables up to the max exponent present
    int maxe = 0;
    for (auto& [m, c] : terms_)
        for (int j = 0; j < n_; ++j) maxe = std::max({maxe, m.p(n_, j), m.q(n_, j)});
    std::vector<std::vector<cplx>> zp(n_), zq(n_);
    for (int j = 0; j < n_; ++j) {
        zp[j].resize(maxe + 1);
        zq[j].resize(maxe + 1);
        zp[j][0] = zq[j][0] = 1.0;
        for (int e = 1; e <= maxe; ++e) {
            zp[j][e] = zp[j][e - 1] * z[j];
            zq[j][e] = zq[j][e - 1] * std::conj(z[j]);
        }
    }
    cplx s = 0.0;
    for (auto& [m, c] : terms_) {
        cplx t = c;
        for (int j = 0; j < n_; ++j) t *= zp[j][m.p(n_, j)] * zq[j][m.q(n_, j)];
        s += t;
    }
    return s;
}

PolyJet PolyJet::compose(const std::vector<PolyJet>& G) const {
    if (int(G.size()) != n_) fail(ErrKind::invalid_argument, "compose: component count");
    int nw = G.empty() ? 0 : G[0].dim();
    for (auto& g : G) {
        if (g.dim() != nw) fail(ErrKind::invalid_argument, "compose: mixed dimensions");
        for (auto& [m, c] : g.terms())
            for (int j = 0; j < nw; ++j)
                if (m.q(nw, j) != 0) fail(ErrKind::invalid_argument, "compose: map must be holomorphic");
    }
    int maxe = 0;
    for (auto& [m, c] : terms_)
        for (int j = 0; j < n_; ++j) maxe = std::max({maxe, m.p(n_, j), m.q(n_, j)});
    // cached powers of each component and its conjugate
    std::vector<std::vector<PolyJet>> gp(n_), gq(n_);
    for (int j = 0; j < n_; ++j) {
        gp[j].push_back(PolyJet::constant(nw, 1.0, true));
        gq[j].push_back(PolyJet::constant(nw, 1.0, true));
        PolyJet cj = G[j].conjugate();
        for (int e = 1; e <= maxe; ++e) {
            gp[j].push_back(gp[j][e - 1] * G[j]);
            gq[j].push_back(gq[j][e - 1] * cj);
        }
    }
    PolyJet r(nw, real_);
    for (auto& [m, c] : terms_) {
        PolyJet t = PolyJet::constant(nw, c);
        for (int j = 0; j < n_; ++j) {
            if (m.p(n_, j) > 0) t = t * gp[j][m.p(n_, j)];
            if (m.q(n_, j) > 0) t = t * gq[j][m.q(n_, j)];
        }
        r = r + t;
    }
    r.set_real_flag(real_);
    return r;
}

PolyJet PolyJet::pruned(double tol) const {
    PolyJet r(n_, real_);
    for (auto& [m, c] : terms_)
        if (std::abs(c) > tol) r.insert(m, c);
    return r;
}

double PolyJet::real_consistency() const {
    double worst = 0.0;
    for (auto& [m, c] : terms_) {
        Monomial t;
        for (int j = 0; j < n_; ++j) {
            t.bits |= std::uint64_t(m.q(n_, j)) << (4 * j);
            t.bits |= std::uint64_t(m.p(n_, j)) << (4 * (n_ + j));
        }
        auto it = terms_.find(t);
        cplx mirror = it == terms_.end() ? cplx(0.0) : it->second;
        worst = std::max(worst, std::abs(c - std::conj(mirror)));
    }
    return worst;
}

PolyJet PolyJet::constant(int n, cplx c, bool real_flag) {
    PolyJet r(n, real_flag && c.imag() == 0.0);
    if (c != cplx(0.0)) r.insert(Monomial{}, c);
    return r;
}

PolyJet PolyJet::coord(int n, int j) {
    PolyJet r(n, false);
    std::vector<int> p(n, 0), q(n, 0);
    p[j] = 1;
    r.add_term(p, q, 1.0);
    return r;
}

PolyJet PolyJet::coord_bar(int n, int j) {
    PolyJet r(n, false);
    std::vector<int> p(n, 0), q(n, 0);
    q[j] = 1;
    r.add_term(p, q, 1.0);
    return r;
}

PolyJet PolyJet::norm_sq(int n) {
    PolyJet r(n, true);
    for (int j = 0; j < n; ++j) {
        std::vector<int> p(n, 0), q(n, 0);
        p[j] = q[j] = 1;
        r.add_term(p, q, 1.0);
    }
    return r;
}

PolyJet PolyJet::re(const PolyJet& holo) {
    PolyJet r = (holo + holo.conjugate()).scaled(0.5);
    r.set_real_flag(true);
    return r;
}


// --- bracket calculus -------------------------------------------------------

std::vector<CVec> hess_c(const PolyJet& u, const CVec& z) {
    int n = u.dim();
    check_dim(n, z.size(), "hess_c");
    std::vector<CVec> H(n, CVec(n, 0.0));
    for (int i = 0; i < n; ++i) {
        PolyJet ui = u.dz(i);
        for (int j = 0; j < n; ++j) H[i][j] = ui.dzbar(j).eval(z);
    }
    return H;
}

CVec grad_holo(const PolyJet& u, const CVec& z) {
    int n = u.dim();
    check_dim(n, z.size(), "grad_holo");
    CVec g(n);
    for (int j = 0; j < n; ++j) g[j] = u.dz(j).eval(z);
    return g;
}

cplx dir1(const PolyJet& u, const CVec& z, const CDirection& zeta) {
    int n = u.dim();
    check_dim(n, zeta.size(), "dir1");
    cplx s = 0.0;
    for (int l = 0; l < n; ++l)
        s += zeta[l] * u.dz(l).eval(z) + std::conj(zeta[l]) * u.dzbar(l).eval(z);
    return s;
}

cplx dir2(const PolyJet& u, const CVec& z, const CDirection& zeta) {
    int n = u.dim();
    check_dim(n, zeta.size(), "dir2");
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) {
        PolyJet ui = u.dz(i);
        PolyJet uib = u.dzbar(i);
        for (int j = 0; j < n; ++j) {
            s += zeta[i] * zeta[j] * ui.dz(j).eval(z);
            s += 2.0 * zeta[i] * std::conj(zeta[j]) * ui.dzbar(j).eval(z);
            s += std::conj(zeta[i]) * std::conj(zeta[j]) * uib.dzbar(j).eval(z);
        }
    }
    return s;
}

cplx bracket2(const PolyJet& u, const CVec& z, const CDirection& xi, const CDirection& eta) {
    int n = u.dim();
    check_dim(n, xi.size(), "bracket2");
    check_dim(n, eta.size(), "bracket2");
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) {
        PolyJet ui = u.dz(i);
        PolyJet uib = u.dzbar(i);
        for (int j = 0; j < n; ++j) {
            s += xi[i] * eta[j] * ui.dz(j).eval(z);                         // u_{xi eta}
            s += xi[i] * std::conj(eta[j]) * ui.dzbar(j).eval(z);           // u_{xi etabar}
            s += eta[i] * std::conj(xi[j]) * ui.dzbar(j).eval(z);           // u_{eta xibar}
            s += std::conj(xi[i]) * std::conj(eta[j]) * uib.dzbar(j).eval(z); // u_{xibar etabar}
        }
    }
    return s;
}

PolyJet field_deriv(const PolyJet& u, const HoloField& xi) {
    int n = u.dim();
    check_dim(n, xi.comps.size(), "field_deriv");
    PolyJet r(n, false);
    for (int l = 0; l < n; ++l) {
        r = r + xi.comps[l] * u.dz(l);
        r = r + xi.comps[l].conjugate() * u.dzbar(l);
    }
    r.set_real_flag(u.real_flag());
    return r;
}

} // namespace krylab
