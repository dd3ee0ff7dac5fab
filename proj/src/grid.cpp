#include "krylab/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

namespace {

// integer lattice offsets of the 12 real lines (6 complex directions, each
// with its Re line and i*Re line)
const int kLineOffsets[12][4] = {
    {1, 0, 0, 0}, {0, 1, 0, 0},   // e1
    {0, 0, 1, 0}, {0, 0, 0, 1},   // e2
    {1, 0, 1, 0}, {0, 1, 0, 1},   // (e1+e2)/sqrt2
    {1, 0, -1, 0}, {0, 1, 0, -1}, // (e1-e2)/sqrt2
    {1, 0, 0, 1}, {0, 1, -1, 0},  // (e1+i e2)/sqrt2
    {1, 0, 0, -1}, {0, 1, 1, 0},  // (e1-i e2)/sqrt2
};
// orthogonal direction pairs used for the unit-determinant dyads
const int kPairs[3][2] = {{0, 1}, {2, 3}, {4, 5}};
const int kMuCount = 7; // eigen-ratio grid 4^{-3} .. 4^{3}

double mu_of(int m) { return std::pow(4.0, m - 3); }

} // namespace

int GridField::flat(int i0, int i1, int i2, int i3) const {
    return ((i0 * N + i1) * N + i2) * N + i3;
}

CVec GridField::point(int i0, int i1, int i2, int i3) const {
    auto c = [&](int i) { return -1.0 + h * i; };
    return {cplx(c(i0), c(i1)), cplx(c(i2), c(i3))};
}

bool GridField::interior(int i0, int i1, int i2, int i3) const {
    auto c = [&](int i) { return -1.0 + h * i; };
    double r2 = c(i0) * c(i0) + c(i1) * c(i1) + c(i2) * c(i2) + c(i3) * c(i3);
    return r2 < 1.0 - 1e-12;
}

GridField solve_grid2(const GridProblem& p) {
    if (p.N < 5 || p.N > 21) fail(ErrKind::invalid_argument, "grid size N must be in [5,21]");
    GridField F;
    F.N = p.N;
    F.h = 2.0 / (p.N - 1);
    int total = p.N * p.N * p.N * p.N;
    F.values.assign(total, 0.0);

    // assemble stencils for interior nodes
    auto coord = [&](int i) { return -1.0 + F.h * i; };
    std::vector<double> rhs_at;
    for (int i0 = 0; i0 < p.N; ++i0)
        for (int i1 = 0; i1 < p.N; ++i1)
            for (int i2 = 0; i2 < p.N; ++i2)
                for (int i3 = 0; i3 < p.N; ++i3) {
                    if (!F.interior(i0, i1, i2, i3)) continue;
                    GridField::Stencil st;
                    st.flat = F.flat(i0, i1, i2, i3);
                    st.parity = (i0 + i1 + i2 + i3) & 1;
                    double x[4] = {coord(i0), coord(i1), coord(i2), coord(i3)};
                    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                    for (int l = 0; l < 12; ++l) {
                        const int* o = kLineOffsets[l];
                        double onorm = std::sqrt(double(o[0] * o[0] + o[1] * o[1] + o[2] * o[2] +
                                                        o[3] * o[3]));
                        double step = F.h * onorm;
                        for (int side = 0; side < 2; ++side) {
                            int sgn = side == 0 ? 1 : -1;
                            int j0 = i0 + sgn * o[0], j1 = i1 + sgn * o[1], j2 = i2 + sgn * o[2],
                                j3 = i3 + sgn * o[3];
                            GridField::Arm arm;
                            bool in_range = j0 >= 0 && j0 < p.N && j1 >= 0 && j1 < p.N && j2 >= 0 &&
                                            j2 < p.N && j3 >= 0 && j3 < p.N;
                            bool inside = in_range && F.interior(j0, j1, j2, j3);
                            if (inside) {
                                arm.neighbor = F.flat(j0, j1, j2, j3);
                                arm.s = step;
                            } else {
                                // cut cell: intersect the ray with the sphere
                                double d[4];
                                for (int c = 0; c < 4; ++c) d[c] = sgn * o[c] / onorm;
                                double pd = x[0] * d[0] + x[1] * d[1] + x[2] * d[2] + x[3] * d[3];
                                double disc = pd * pd + (1.0 - r2);
                                double s = -pd + std::sqrt(std::max(disc, 0.0));
                                s = std::min(std::max(s, 1e-3 * F.h), step);
                                double y[4];
                                double yn = 0.0;
                                for (int c = 0; c < 4; ++c) {
                                    y[c] = x[c] + s * d[c];
                                    yn += y[c] * y[c];
                                }
                                yn = std::sqrt(yn);
                                CVec zb = {cplx(y[0] / yn, y[1] / yn), cplx(y[2] / yn, y[3] / yn)};
                                arm.neighbor = -1;
                                arm.s = s;
                                arm.bval = p.boundary(zb);
                            }
                            st.arms[l][side] = arm;
                        }
                    }
                    F.stencils_.push_back(st);
                    CVec z = {cplx(x[0], x[1]), cplx(x[2], x[3])};
                    double f = p.rhs(z);
                    if (f < -1e-12) fail(ErrKind::invalid_argument, "rhs must be nonnegative");
                    rhs_at.push_back(std::sqrt(std::max(f, 0.0)));
                }

    int m = int(F.stencils_.size());
    // initial guess: |z|^2 - 1 shifted toward the boundary data
    for (auto& st : F.stencils_) {
        int idx = st.flat;
        int i3 = idx % p.N, i2 = (idx / p.N) % p.N, i1 = (idx / p.N / p.N) % p.N,
            i0 = idx / p.N / p.N / p.N;
        CVec z = F.point(i0, i1, i2, i3);
        double r2 = std::norm(z[0]) + std::norm(z[1]);
        double bd = p.boundary({z[0] / std::sqrt(std::max(r2, 0.25)),
                                z[1] / std::sqrt(std::max(r2, 0.25))});
        F.values[idx] = bd * r2 + (r2 - 1.0);
    }

    auto line_diff = [&](const GridField::Stencil& st, int l, double& coef_center,
                         double& neigh_part) {
        const GridField::Arm& ap = st.arms[l][0];
        const GridField::Arm& am = st.arms[l][1];
        double up = ap.neighbor >= 0 ? F.values[ap.neighbor] : ap.bval;
        double um = am.neighbor >= 0 ? F.values[am.neighbor] : am.bval;
        double denom = ap.s + am.s;
        double Ap = 2.0 / (ap.s * denom), Am = 2.0 / (am.s * denom);
        coef_center = 2.0 / (ap.s * am.s);
        neigh_part = Ap * up + Am * um;
    };

    auto dir_value = [&](const GridField::Stencil& st, int d) {
        double cc, np;
        double u0 = F.values[st.flat];
        line_diff(st, 2 * d, cc, np);
        double v = np - cc * u0;
        line_diff(st, 2 * d + 1, cc, np);
        v += np - cc * u0;
        return 0.25 * v; // u_{v vbar}
    };

    std::vector<std::array<int, 2>> control(m, {0, 3}); // (pair, mu index)

    auto scheme_residual = [&]() {
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto& st = F.stencils_[i];
            double dv[6];
            for (int d = 0; d < 6; ++d) dv[d] = dir_value(st, d);
            double best = 1e300;
            for (int pr = 0; pr < 3; ++pr)
                for (int mi = 0; mi < kMuCount; ++mi) {
                    double mu = mu_of(mi);
                    double val = 0.5 * (mu * dv[kPairs[pr][0]] + dv[kPairs[pr][1]] / mu);
                    best = std::min(best, val);
                }
            worst = std::max(worst, std::abs(best - rhs_at[i]));
        }
        return worst;
    };

    double fscale = 1.0;
    for (double f : rhs_at) fscale = std::max(fscale, f);

    int sweeps = 0;
    bool converged = false;
    const int inner = 25;
    while (sweeps < p.max_sweeps) {
        // policy improvement: per-node minimizing dyad
        for (int i = 0; i < m; ++i) {
            const auto& st = F.stencils_[i];
            double dv[6];
            for (int d = 0; d < 6; ++d) dv[d] = dir_value(st, d);
            double best = 1e300;
            for (int pr = 0; pr < 3; ++pr)
                for (int mi = 0; mi < kMuCount; ++mi) {
                    double mu = mu_of(mi);
                    double val = 0.5 * (mu * dv[kPairs[pr][0]] + dv[kPairs[pr][1]] / mu);
                    if (val < best) {
                        best = val;
                        control[i] = {pr, mi};
                    }
                }
        }
        // checkerboard Gauss-Seidel sweeps for the frozen policy
        for (int it = 0; it < inner && sweeps < p.max_sweeps; ++it, ++sweeps) {
            for (int color = 0; color < 2; ++color) {
                for (int i = 0; i < m; ++i) {
                    const auto& st = F.stencils_[i];
                    if (st.parity != color) continue;
                    double mu = mu_of(control[i][1]);
                    int d1 = kPairs[control[i][0]][0], d2 = kPairs[control[i][0]][1];
                    double w1 = 0.5 * mu * 0.25, w2 = 0.5 / mu * 0.25;
                    double center = 0.0;
                    double num = -rhs_at[i];
                    double cc, np;
                    line_diff(st, 2 * d1, cc, np);
                    num += w1 * np;
                    center += w1 * cc;
                    line_diff(st, 2 * d1 + 1, cc, np);
                    num += w1 * np;
                    center += w1 * cc;
                    line_diff(st, 2 * d2, cc, np);
                    num += w2 * np;
                    center += w2 * cc;
                    line_diff(st, 2 * d2 + 1, cc, np);
                    num += w2 * np;
                    center += w2 * cc;
                    F.values[st.flat] = num / center;
                }
            }
        }
        double res = scheme_residual();
        F.residual = res;
        if (res < p.tol * fscale) {
            converged = true;
            break;
        }
    }
    F.converged = converged;
    F.sweeps = sweeps;
    return F;
}

double GridField::sup_error(const std::function<double(const CVec&)>& ref) const {
    double worst = 0.0;
    for (auto& st : stencils_) {
        int idx = st.flat;
        int i3 = idx % N, i2 = (idx / N) % N, i1 = (idx / N / N) % N, i0 = idx / N / N / N;
        CVec z = point(i0, i1, i2, i3);
        worst = std::max(worst, std::abs(values[idx] - ref(z)));
    }
    return worst;
}

double GridField::admissibility_defect() const {
    double worst = 0.0;
    for (auto& st : stencils_) {
        for (int d = 0; d < 6; ++d) {
            double v = 0.0;
            for (int line = 2 * d; line <= 2 * d + 1; ++line) {
                const Arm& ap = st.arms[line][0];
                const Arm& am = st.arms[line][1];
                double up = ap.neighbor >= 0 ? values[ap.neighbor] : ap.bval;
                double um = am.neighbor >= 0 ? values[am.neighbor] : am.bval;
                double denom = ap.s + am.s;
                v += 2.0 * (am.s * up + ap.s * um - denom * values[st.flat]) /
                     (ap.s * am.s * denom);
            }
            worst = std::min(worst, 0.25 * v);
        }
    }
    return worst;
}

std::vector<std::pair<CVec, double>> GridField::interior_nodes() const {
    std::vector<std::pair<CVec, double>> out;
    out.reserve(stencils_.size());
    for (auto& st : stencils_) {
        int idx = st.flat;
        int i3 = idx % N, i2 = (idx / N) % N, i1 = (idx / N / N) % N, i0 = idx / N / N / N;
        out.emplace_back(point(i0, i1, i2, i3), values[idx]);
    }
    return out;
}

double GridField::sup_gradient() const {
    double worst = 0.0;
    for (auto& st : stencils_) {
        int idx = st.flat;
        int i3 = idx % N, i2 = (idx / N) % N, i1 = (idx / N / N) % N, i0 = idx / N / N / N;
        CVec z = point(i0, i1, i2, i3);
        double r = std::sqrt(std::norm(z[0]) + std::norm(z[1]));
        if (r > 1.0 - 3.0 * h) continue;
        // all four axis neighbors are interior here
        double g2 = 0.0;
        int step[4] = {N * N * N, N * N, N, 1};
        for (int c = 0; c < 4; ++c) {
            double d = (values[idx + step[c]] - values[idx - step[c]]) / (2.0 * h);
            g2 += d * d;
        }
        worst = std::max(worst, std::sqrt(g2));
    }
    return worst;
}

double GridField::sup_second_difference() const {
    double worst = 0.0;
    for (auto& st : stencils_) {
        int idx = st.flat;
        int i3 = idx % N, i2 = (idx / N) % N, i1 = (idx / N / N) % N, i0 = idx / N / N / N;
        CVec z = point(i0, i1, i2, i3);
        double r = std::sqrt(std::norm(z[0]) + std::norm(z[1]));
        if (r > 1.0 - 3.0 * h) continue;
        for (int l = 0; l < 12; ++l) {
            const Arm& ap = st.arms[l][0];
            const Arm& am = st.arms[l][1];
            if (ap.neighbor < 0 || am.neighbor < 0) continue;
            double dd = (values[ap.neighbor] - 2.0 * values[idx] + values[am.neighbor]) /
                        (ap.s * ap.s);
            worst = std::max(worst, std::abs(dd));
        }
    }
    return worst;
}

} // namespace krylab
