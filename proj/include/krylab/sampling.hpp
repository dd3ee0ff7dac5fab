#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "krylab/poly_jet.hpp"

namespace krylab {

// Deterministic pseudo-random stream (splitmix64 core).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64();
    double uniform();                    // [0,1)
    double uniform(double a, double b);
    double normal();
    cplx cnormal();
    // independent substream for instance `id`
    Rng fork(std::uint64_t id) const;

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Halton low-discrepancy sequence in [0,1)^dim (1-based index).
class Halton {
  public:
    explicit Halton(int dim);
    std::vector<double> point(std::uint64_t index) const;

  private:
    std::vector<int> bases_;
};

// Quasi-random unit vectors in R^dim (Halton + Box-Muller + normalize).
std::vector<std::vector<double>> quasi_sphere(int dim, int count, std::uint64_t offset = 0);

// Least-squares slope of log E against log r.  Radii with E below the floor
// are treated as exact zeros; if everything vanishes `exact_zero` is set and
// the slope is reported as a large sentinel.
struct SlopeFit {
    double slope = 0.0;
    double constant = 0.0; // max E(r)/r^2 over used radii
    bool exact_zero = false;
    int used = 0;
};
SlopeFit fit_log_slope(const std::vector<double>& radii, const std::vector<double>& values,
                       double floor_abs = 1e-14);

// Worker pool helper honoring the KRYLAB_THREADS cap.  Results must be
// written by index so the output is order stable.
int worker_count();
void parallel_for(int count, const std::function<void(int)>& body);

} // namespace krylab
