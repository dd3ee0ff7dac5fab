#pragma once

#include <vector>

#include "krylab/linalg.hpp"
#include "krylab/poly_jet.hpp"

namespace krylab {

// det(D^2_C u) = g(|z|^2) + eps on the unit ball with u = c on the sphere,
// reduced to the profile u(z) = phi(t), t = |z|^2.
struct RadialProblem {
    int n = 2;
    std::vector<double> g_coeffs = {1.0}; // g(t) = sum g_k t^k, g >= 0 on [0,1]
    double boundary_constant = 0.0;
    double eps = 0.0;

    double g(double t) const;
    double g_prime(double t) const;
};

class RadialSolution {
  public:
    RadialSolution() = default;

    int n() const { return prob_.n; }
    const RadialProblem& problem() const { return prob_; }

    // profile derivatives, exact up to quadrature of phi itself
    double phi(double t) const;
    double dphi(double t) const;   // phi'
    double d2phi(double t) const;  // phi''
    double d3phi(double t) const;
    double d4phi(double t) const;

    double u(const CVec& z) const;
    CVec grad(const CVec& z) const;                 // u_{z_i}
    std::vector<CVec> hess(const CVec& z) const;    // u_{z_i zbar_j}

    const std::vector<double>& grid() const { return grid_t_; }
    const std::vector<double>& phi_samples() const { return phi_; }

  private:
    friend RadialSolution solve_radial(const RadialProblem&);
    RadialProblem prob_;
    std::vector<double> gbar_;   // Gbar(t) = n/t^n * int_0^t s^{n-1}(g+eps), a polynomial
    std::vector<double> grid_t_; // quadrature grid
    std::vector<double> phi_;    // phi at grid nodes
    double poly(const std::vector<double>& c, double t) const;
};

// Quadrature: (t phi')^n = n int_0^t s^{n-1}(g+eps) ds with phi(1) = c.
// phi' = Gbar^{1/n} with Gbar polynomial, so only phi needs numerical
// integration (composite Gauss over 10^4 panels).
RadialSolution solve_radial(const RadialProblem& p);

// max over samples of |phi'^{n-1}(phi' + t phi'') - (g + eps)|, plus an
// optional injected corruption of phi'' for fault detection tests.
double radial_ma_residual(const RadialSolution& sol, const std::vector<double>& t_samples,
                          double phi2_fault = 0.0);

// Norm report over Omega_delta for a list of delta values.
struct NormReport {
    double eps = 0.0;
    double sup_grad = 0.0;               // sup |grad u| over the closure
    double boundary_normal_normal = 0.0; // M = sup_boundary u_{gamma gamma}
    std::vector<double> deltas;
    std::vector<double> sup_d2;          // sup |u_{(zeta)(zeta)}| over Omega_delta
};

NormReport field_norms(const RadialSolution& sol, const std::vector<double>& deltas,
                       int t_grid = 2001);

} // namespace krylab
