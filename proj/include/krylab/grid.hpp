#pragma once

#include <functional>
#include <vector>

#include "krylab/poly_jet.hpp"
#include "krylab/radial.hpp"

namespace krylab {

// Monotone wide-stencil solver for det^{1/2}(D^2_C u) = f on the unit ball
// of C^2, discretized on a uniform lattice over [-1,1]^4.  The operator is
// written as an infimum of linear operators tr(A H)/2 over unit-determinant
// Hermitian A restricted to dyads of fixed complex directions, and solved by
// policy iteration with checkerboard Gauss-Seidel sweeps.
struct GridProblem {
    int N = 13;                                    // nodes per axis, <= 21
    std::function<double(const CVec&)> boundary;   // Dirichlet data on the sphere
    std::function<double(const CVec&)> rhs;        // g + eps >= 0 at z
    double tol = 1e-6;
    int max_sweeps = 10000;
};

struct GridField {
    int N = 0;
    double h = 0.0;
    std::vector<double> values; // flattened lattice values; unknowns live on
                                // interior nodes only
    bool converged = false;
    double residual = 0.0;
    int sweeps = 0;

    int flat(int i0, int i1, int i2, int i3) const;
    CVec point(int i0, int i1, int i2, int i3) const;
    bool interior(int i0, int i1, int i2, int i3) const;

    // sup |u - ref| over interior nodes
    double sup_error(const std::function<double(const CVec&)>& ref) const;

    // worst (most negative) discrete complex directional Laplacian
    double admissibility_defect() const;

    // norms by h^2 central differences at nodes with distance >= 3h
    double sup_gradient() const;
    double sup_second_difference() const;

    std::vector<std::pair<CVec, double>> interior_nodes() const;

  private:
    friend GridField solve_grid2(const GridProblem&);
    struct Arm {
        int neighbor = -1;   // flat index or -1 when the arm hits the sphere
        double s = 0.0;      // arm length
        double bval = 0.0;   // boundary value when neighbor < 0
    };
    struct Stencil {
        int flat = 0;
        int parity = 0;
        Arm arms[12][2]; // 6 complex directions x (Re line, Im line) x 2 arms... flattened below
    };
    std::vector<Stencil> stencils_;
};

GridField solve_grid2(const GridProblem& p);

} // namespace krylab
