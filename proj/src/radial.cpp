#include "krylab/radial.hpp"

#include <algorithm>
#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1,1]
const double kGx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                       0.9061798459386640};
const double kGw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                       0.4786286704993665, 0.2369268850561891};

constexpr int kPanels = 10000;

double eval_poly(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (int k = int(c.size()) - 1; k >= 0; --k) v = v * t + c[k];
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (int k = 1; k < int(c.size()); ++k) d.push_back(double(k) * c[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

} // namespace

double RadialProblem::g(double t) const { return eval_poly(g_coeffs, t); }

double RadialProblem::g_prime(double t) const { return eval_poly(poly_derivative(g_coeffs), t); }

double RadialSolution::poly(const std::vector<double>& c, double t) const { return eval_poly(c, t); }

RadialSolution solve_radial(const RadialProblem& p) {
    if (p.n < 1) fail(ErrKind::invalid_argument, "radial dimension");
    for (double t = 0.0; t <= 1.0; t += 1.0 / 512.0)
        if (p.g(t) + p.eps < -1e-14) fail(ErrKind::invalid_argument, "g + eps must be nonnegative");

    RadialSolution sol;
    sol.prob_ = p;
    // Gbar(t) = n/t^n int_0^t s^{n-1}(g+eps) = sum_k n (g_k + eps delta_k0) t^k/(n+k)
    sol.gbar_.assign(p.g_coeffs.size(), 0.0);
    for (int k = 0; k < int(p.g_coeffs.size()); ++k)
        sol.gbar_[k] = double(p.n) * p.g_coeffs[k] / double(p.n + k);
    if (sol.gbar_.empty()) sol.gbar_.push_back(0.0);
    sol.gbar_[0] += double(p.n) * p.eps / double(p.n);

    // phi(t) = c - int_t^1 phi'(s) ds, composite Gauss on a uniform panel grid
    sol.grid_t_.resize(kPanels + 1);
    sol.phi_.resize(kPanels + 1);
    double h = 1.0 / kPanels;
    for (int i = 0; i <= kPanels; ++i) sol.grid_t_[i] = i * h;
    auto dphi = [&](double t) { return std::pow(std::max(eval_poly(sol.gbar_, t), 0.0), 1.0 / p.n); };
    sol.phi_[kPanels] = p.boundary_constant;
    for (int i = kPanels; i > 0; --i) {
        double a = sol.grid_t_[i - 1], b = sol.grid_t_[i];
        double acc = 0.0;
        for (int q = 0; q < 5; ++q) acc += kGw[q] * dphi(0.5 * (a + b) + 0.5 * (b - a) * kGx[q]);
        acc *= 0.5 * (b - a);
        sol.phi_[i - 1] = sol.phi_[i] - acc;
    }
    return sol;
}

double RadialSolution::dphi(double t) const {
    return std::pow(std::max(poly(gbar_, t), 0.0), 1.0 / prob_.n);
}

double RadialSolution::phi(double t) const {
    if (t <= 0.0) return phi_[0];
    if (t >= 1.0) return phi_.back();
    // cubic Hermite on the quadrature grid (phi' is exact at the ends)
    int i = std::min(int(t * (phi_.size() - 1)), int(phi_.size()) - 2);
    double h = grid_t_[i + 1] - grid_t_[i];
    double s = (t - grid_t_[i]) / h;
    double p0 = phi_[i], p1 = phi_[i + 1];
    double m0 = dphi(grid_t_[i]) * h, m1 = dphi(grid_t_[i + 1]) * h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * m1;
}

double RadialSolution::d2phi(double t) const {
    // phi'' = phi' * Gbar'/(n Gbar); at Gbar -> 0 fall back to the
    // polynomial limit via one-sided evaluation
    double G = poly(gbar_, t);
    auto g1 = poly_derivative(gbar_);
    if (G <= 1e-300) return 0.0;
    return dphi(t) * eval_poly(g1, t) / (prob_.n * G);
}

double RadialSolution::d3phi(double t) const {
    double G = poly(gbar_, t);
    if (G <= 1e-300) return 0.0;
    auto g1 = poly_derivative(gbar_);
    auto g2 = poly_derivative(g1);
    double q = eval_poly(g1, t) / (prob_.n * G);
    double qp = eval_poly(g2, t) / (prob_.n * G) -
                eval_poly(g1, t) * eval_poly(g1, t) / (prob_.n * G * G);
    return d2phi(t) * q + dphi(t) * qp;
}

double RadialSolution::d4phi(double t) const {
    double G = poly(gbar_, t);
    if (G <= 1e-300) return 0.0;
    auto g1 = poly_derivative(gbar_);
    auto g2 = poly_derivative(g1);
    auto g3 = poly_derivative(g2);
    double nG = prob_.n * G;
    double a1 = eval_poly(g1, t), a2 = eval_poly(g2, t), a3 = eval_poly(g3, t);
    double q = a1 / nG;
    double qp = a2 / nG - a1 * a1 / (nG * G);
    double qpp = a3 / nG - 3.0 * a2 * a1 / (nG * G) + 2.0 * a1 * a1 * a1 / (nG * G * G);
    return d3phi(t) * q + 2.0 * d2phi(t) * qp + dphi(t) * qpp;
}

double RadialSolution::u(const CVec& z) const {
    double t = 0.0;
    for (auto& c : z) t += std::norm(c);
    return phi(t);
}

CVec RadialSolution::grad(const CVec& z) const {
    double t = 0.0;
    for (auto& c : z) t += std::norm(c);
    double d = dphi(t);
    CVec g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = d * std::conj(z[i]);
    return g;
}

std::vector<CVec> RadialSolution::hess(const CVec& z) const {
    double t = 0.0;
    for (auto& c : z) t += std::norm(c);
    double d1 = dphi(t), d2 = d2phi(t);
    int n = int(z.size());
    std::vector<CVec> H(n, CVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            H[i][j] = (i == j ? d1 : 0.0) + d2 * std::conj(z[i]) * z[j];
    return H;
}

double radial_ma_residual(const RadialSolution& sol, const std::vector<double>& t_samples,
                          double phi2_fault) {
    const auto& p = sol.problem();
    double worst = 0.0;
    for (double t : t_samples) {
        double d1 = sol.dphi(t), d2 = sol.d2phi(t) + phi2_fault;
        double det = std::pow(d1, p.n - 1) * (d1 + t * d2);
        worst = std::max(worst, std::abs(det - (p.g(t) + p.eps)));
    }
    return worst;
}

NormReport field_norms(const RadialSolution& sol, const std::vector<double>& deltas, int t_grid) {
    NormReport rep;
    rep.eps = sol.problem().eps;
    rep.deltas = deltas;

    auto d2sup_at = [&](double t) {
        // sup over unit zeta of |phi'' R^2 + 2 phi'| with R^2 in [0, 4t]
        double d1 = sol.dphi(t), d2 = sol.d2phi(t);
        return std::max(std::abs(2.0 * d1), std::abs(2.0 * d1 + 4.0 * t * d2));
    };

    for (int i = 0; i < t_grid; ++i) {
        double t = double(i) / (t_grid - 1);
        rep.sup_grad = std::max(rep.sup_grad, 2.0 * sol.dphi(t) * std::sqrt(t));
    }
    rep.boundary_normal_normal = 2.0 * sol.dphi(1.0) + 4.0 * sol.d2phi(1.0);
    for (double delta : deltas) {
        double tmax = (1.0 - delta) * (1.0 - delta);
        double m = 0.0;
        for (int i = 0; i < t_grid; ++i) {
            double t = tmax * double(i) / (t_grid - 1);
            m = std::max(m, d2sup_at(t));
        }
        rep.sup_d2.push_back(m);
    }
    return rep;
}

} // namespace krylab
