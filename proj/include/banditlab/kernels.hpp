#pragma once

// Data-parallel grid kernels.
//
// Every kernel exists twice: a plain serial loop in kernels::serial, kept as
// the reference the tests compare against, and an OpenMP version in
// kernels::omp. The OpenMP versions parallelize over outputs or over
// fixed-size blocks whose partial sums are combined in block order, so their
// results do not depend on the thread count.
//
// The unqualified functions in kernels:: dispatch to the OpenMP version once
// the input is large enough to amortize a parallel region.

#include <cstddef>
#include <span>

namespace banditlab::kernels {

struct Moments {
    double mass = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

namespace serial {

/// out_k = w_k exp(a x_k + b x_k^2) / Z; returns log Z relative to the largest term.
/// Zero input weights stay zero.
double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out);

Moments moments(std::span<const double> x, std::span<const double> w);

/// table[s * (order + 1) + f] = sum_k w_k p_k^s (1 - p_k)^f for s + f <= order (other entries untouched).
void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table);

/// out_m = sum_k w_k phi(x_m - c_k) with phi the standard normal density.
void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out);

/// Stop-loss transform out_j = sum_k w_k max(0, z_k - b_j); z must be sorted ascending.
void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out);

/// Mean of x under weights exp(logw_k + a x_k + b x_k^2). Terms more than 50
/// log-units below the largest are dropped.
double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b);

}  // namespace serial

namespace omp {

double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out);
Moments moments(std::span<const double> x, std::span<const double> w);
void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table);
void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out);
void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out);
double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b);

}  // namespace omp

inline constexpr std::size_t kParallelThreshold = 8192;

double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out);
Moments moments(std::span<const double> x, std::span<const double> w);
void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table);
void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out);
void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out);
double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b);

/// Caps OpenMP parallelism from BANDITLAB_THREADS when set; call once at startup.
void configure_threads_from_env();

}  // namespace banditlab::kernels
