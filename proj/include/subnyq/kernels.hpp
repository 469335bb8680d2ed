// Data-parallel inner loops of the pipeline.
//
// The default entry points are OpenMP-parallel and deterministic: reductions
// accumulate fixed 8192-sample blocks whose partial sums are combined in
// block order, so results are bit-identical for any thread count. Elementwise
// kernels compute each output sample independently and are bit-identical to
// their serial counterparts by construction.
//
// kernels::serial holds naive single-loop reference implementations. They are
// kept for tests (cross-checking the parallel paths) and for the
// bench_kernels tool; the library itself always calls the parallel versions.

#ifndef SUBNYQ_KERNELS_HPP
#define SUBNYQ_KERNELS_HPP

#include <cstddef>
#include <span>

namespace subnyq::kernels {

inline constexpr std::size_t kReductionBlock = 8192;

namespace serial {

double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double sum_quad(std::span<const double> x);
double sum_prod(std::span<const double> x, std::span<const double> y);

// out = c1*x + c2*y, elementwise.
void combine2(double c1, std::span<const double> x, double c2, std::span<const double> y,
              std::span<double> out);

// (u, v) = [[a11 a12],[a21 a22]] * (x, y) per sample. In-place allowed
// (u aliasing x and v aliasing y).
void mix2(double a11, double a12, double a21, double a22, std::span<const double> x,
          std::span<const double> y, std::span<double> u, std::span<double> v);

}  // namespace serial

double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double sum_quad(std::span<const double> x);
double sum_prod(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
double mean_sq(std::span<const double> x);
double mean_quad(std::span<const double> x);
double mean_prod(std::span<const double> x, std::span<const double> y);

void combine2(double c1, std::span<const double> x, double c2, std::span<const double> y,
              std::span<double> out);

void mix2(double a11, double a12, double a21, double a22, std::span<const double> x,
          std::span<const double> y, std::span<double> u, std::span<double> v);

bool all_finite(std::span<const double> x);

}  // namespace subnyq::kernels

#endif
