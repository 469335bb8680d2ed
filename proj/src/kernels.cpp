#include "subnyq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace subnyq::kernels {

namespace serial {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double sum_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double sum_quad(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        const double v2 = v * v;
        s += v2 * v2;
    }
    return s;
}

double sum_prod(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

void combine2(double c1, std::span<const double> x, double c2, std::span<const double> y,
              std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c1 * x[i] + c2 * y[i];
}

void mix2(double a11, double a12, double a21, double a22, std::span<const double> x,
          std::span<const double> y, std::span<double> u, std::span<double> v) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double yi = y[i];
        u[i] = a11 * xi + a12 * yi;
        v[i] = a21 * xi + a22 * yi;
    }
}

}  // namespace serial

namespace {

// Fixed-size blocks, partials combined in block order: the result does not
// depend on the number of threads.
template <class BlockSum>
double blocked_reduce(std::size_t n, BlockSum&& block) {
    const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    if (nblocks <= 1) return n == 0 ? 0.0 : block(std::size_t{0}, n);
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(lo + kReductionBlock, n);
        partial[static_cast<std::size_t>(b)] = block(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

double sum(std::span<const double> x) {
    return blocked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
    });
}

double sum_sq(std::span<const double> x) {
    return blocked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * x[i];
        return s;
    });
}

double sum_quad(std::span<const double> x) {
    return blocked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v2 = x[i] * x[i];
            s += v2 * v2;
        }
        return s;
    });
}

double sum_prod(std::span<const double> x, std::span<const double> y) {
    return blocked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
        return s;
    });
}

double mean(std::span<const double> x) { return sum(x) / static_cast<double>(x.size()); }
double mean_sq(std::span<const double> x) { return sum_sq(x) / static_cast<double>(x.size()); }
double mean_quad(std::span<const double> x) { return sum_quad(x) / static_cast<double>(x.size()); }
double mean_prod(std::span<const double> x, std::span<const double> y) {
    return sum_prod(x, y) / static_cast<double>(x.size());
}

void combine2(double c1, std::span<const double> x, double c2, std::span<const double> y,
              std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        out[k] = c1 * x[k] + c2 * y[k];
    }
}

void mix2(double a11, double a12, double a21, double a22, std::span<const double> x,
          std::span<const double> y, std::span<double> u, std::span<double> v) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double xi = x[k];
        const double yi = y[k];
        u[k] = a11 * xi + a12 * yi;
        v[k] = a21 * xi + a22 * yi;
    }
}

bool all_finite(std::span<const double> x) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
    for (std::int64_t i = 0; i < n; ++i) {
        ok = ok && std::isfinite(x[static_cast<std::size_t>(i)]);
    }
    return ok;
}

}  // namespace subnyq::kernels
