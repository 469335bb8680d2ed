// Benchmark of the OpenMP kernels against their serial reference
// implementations: throughput, speedup and the largest numerical deviation.

#include <chrono>
#include <cstdio>
#include <functional>
#include <span>
#include <vector>

#include <omp.h>

#include "subnyq/kernels.hpp"
#include "subnyq/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() /
           static_cast<double>(reps);
}

void report(const char* name, std::size_t n, double serial_ms, double parallel_ms,
            double max_dev) {
    const double gbps = static_cast<double>(n) * sizeof(double) / (parallel_ms * 1e6);
    std::printf("%-12s n=%zu  serial %8.2f ms  omp %8.2f ms  speedup %4.2fx  %6.2f GB/s  "
                "max|dev| %.3e\n",
                name, n, serial_ms, parallel_ms, serial_ms / parallel_ms, gbps, max_dev);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 1 << 24;
    int reps = 5;
    if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
    if (argc > 2) reps = std::atoi(argv[2]);
    std::printf("threads: %d\n", omp_get_max_threads());

    subnyq::Rng rng(42);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    std::vector<double> u(n);
    std::vector<double> v(n);

    namespace k = subnyq::kernels;

    {
        volatile double sink = 0.0;
        const double ts = time_ms([&] { sink = k::serial::sum_sq(x); }, reps);
        const double rs = k::serial::sum_sq(x);
        const double tp = time_ms([&] { sink = k::sum_sq(x); }, reps);
        const double rp = k::sum_sq(x);
        report("sum_sq", n, ts, tp, std::abs(rs - rp) / std::abs(rs));
    }
    {
        volatile double sink = 0.0;
        const double ts = time_ms([&] { sink = k::serial::sum_quad(x); }, reps);
        const double rs = k::serial::sum_quad(x);
        const double tp = time_ms([&] { sink = k::sum_quad(x); }, reps);
        const double rp = k::sum_quad(x);
        report("sum_quad", n, ts, tp, std::abs(rs - rp) / std::abs(rs));
    }
    {
        volatile double sink = 0.0;
        const double ts = time_ms([&] { sink = k::serial::sum_prod(x, y); }, reps);
        const double rs = k::serial::sum_prod(x, y);
        const double tp = time_ms([&] { sink = k::sum_prod(x, y); }, reps);
        const double rp = k::sum_prod(x, y);
        report("sum_prod", n, ts, tp, std::abs(rs - rp) / std::abs(rs));
    }
    {
        const double ts = time_ms([&] { k::serial::mix2(1.0, 0.5, 0.3, 1.0, x, y, u, v); }, reps);
        std::vector<double> us = u, vs = v;
        const double tp = time_ms([&] { k::mix2(1.0, 0.5, 0.3, 1.0, x, y, u, v); }, reps);
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dev = std::max(dev, std::abs(us[i] - u[i]));
            dev = std::max(dev, std::abs(vs[i] - v[i]));
        }
        report("mix2", n, ts, tp, dev);
    }
    {
        const double ts = time_ms([&] { k::serial::combine2(0.8, x, 0.6, y, u); }, reps);
        std::vector<double> us = u;
        const double tp = time_ms([&] { k::combine2(0.8, x, 0.6, y, u); }, reps);
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(us[i] - u[i]));
        report("combine2", n, ts, tp, dev);
    }
    return 0;
}
