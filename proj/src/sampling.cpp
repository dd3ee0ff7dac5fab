#include "krylab/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace krylab {

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = std::max(uniform(), 1e-300), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
}

cplx Rng::cnormal() { return cplx(normal(), normal()); }

Rng Rng::fork(std::uint64_t id) const {
    Rng base = *this;
    std::uint64_t s = const_cast<Rng&>(base).next_u64();
    return Rng(s ^ (0x9e3779b97f4a7c15ULL * (id + 1)));
}

namespace {
const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

Halton::Halton(int dim) {
    if (dim > int(sizeof(kPrimes) / sizeof(int))) dim = int(sizeof(kPrimes) / sizeof(int));
    bases_.assign(kPrimes, kPrimes + dim);
}

std::vector<double> Halton::point(std::uint64_t index) const {
    std::vector<double> x(bases_.size());
    for (std::size_t d = 0; d < bases_.size(); ++d) {
        double f = 1.0, r = 0.0;
        std::uint64_t i = index;
        while (i > 0) {
            f /= bases_[d];
            r += f * double(i % bases_[d]);
            i /= bases_[d];
        }
        x[d] = r;
    }
    return x;
}

std::vector<std::vector<double>> quasi_sphere(int dim, int count, std::uint64_t offset) {
    int hdim = dim + (dim % 2); // Box-Muller needs pairs
    Halton seq(hdim);
    std::vector<std::vector<double>> out;
    out.reserve(count);
    std::uint64_t idx = 1 + offset;
    while (int(out.size()) < count) {
        auto u = seq.point(idx++);
        std::vector<double> g(dim);
        for (int d = 0; d < dim; d += 2) {
            double u1 = std::max(u[d], 1e-12);
            double u2 = u[(d + 1) % hdim];
            double r = std::sqrt(-2.0 * std::log(u1));
            g[d] = r * std::cos(2.0 * M_PI * u2);
            if (d + 1 < dim) g[d + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        double nrm = 0.0;
        for (double v : g) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-9) continue;
        for (double& v : g) v /= nrm;
        out.push_back(std::move(g));
    }
    return out;
}

SlopeFit fit_log_slope(const std::vector<double>& radii, const std::vector<double>& values,
                       double floor_abs) {
    SlopeFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (values[i] > floor_abs) {
            lx.push_back(std::log(radii[i]));
            ly.push_back(std::log(values[i]));
            fit.constant = std::max(fit.constant, values[i] / (radii[i] * radii[i]));
        }
    }
    fit.used = int(lx.size());
    if (lx.size() < 2) {
        fit.exact_zero = true;
        fit.slope = 99.0; // vanishes identically at sample resolution
        return fit;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = den > 0.0 ? num / den : 0.0;
    return fit;
}

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("KRYLAB_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap > 0 && cap < long(hw)) hw = unsigned(cap);
    }
    return int(hw);
}

void parallel_for(int count, const std::function<void(int)>& body) {
    int workers = std::min(worker_count(), std::max(1, count));
    if (workers <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace krylab
