#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <vector>

#include "banditlab/kernels.hpp"

namespace banditlab::kernels {

namespace {

constexpr std::ptrdiff_t kBlock = 1024;

std::ptrdiff_t block_count(std::size_t n) { return (static_cast<std::ptrdiff_t>(n) + kBlock - 1) / kBlock; }

}  // namespace

namespace omp {

double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    double top = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : top) schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        if (w[k] > 0.0) top = std::max(top, std::log(w[k]) + a * x[k] + b * x[k] * x[k]);
    }
    const std::ptrdiff_t blocks = block_count(x.size());
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::ptrdiff_t end = std::min(n, (blk + 1) * kBlock);
        double acc = 0.0;
        for (std::ptrdiff_t k = blk * kBlock; k < end; ++k) {
            out[k] = w[k] > 0.0 ? std::exp(std::log(w[k]) + a * x[k] + b * x[k] * x[k] - top) : 0.0;
            acc += out[k];
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    double z = 0.0;
    for (double p : partial) z += p;
    const double inv = 1.0 / z;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] *= inv;
    return std::log(z);
}

Moments moments(std::span<const double> x, std::span<const double> w) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t blocks = block_count(x.size());
    std::vector<double> pm(static_cast<std::size_t>(blocks)), px(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::ptrdiff_t end = std::min(n, (blk + 1) * kBlock);
        double m = 0.0, s = 0.0;
        for (std::ptrdiff_t k = blk * kBlock; k < end; ++k) {
            m += w[k];
            s += w[k] * x[k];
        }
        pm[static_cast<std::size_t>(blk)] = m;
        px[static_cast<std::size_t>(blk)] = s;
    }
    Moments out;
    double sx = 0.0;
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        out.mass += pm[static_cast<std::size_t>(blk)];
        sx += px[static_cast<std::size_t>(blk)];
    }
    out.mean = sx / out.mass;
    const double mean = out.mean;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::ptrdiff_t end = std::min(n, (blk + 1) * kBlock);
        double v = 0.0;
        for (std::ptrdiff_t k = blk * kBlock; k < end; ++k) v += w[k] * (x[k] - mean) * (x[k] - mean);
        pm[static_cast<std::size_t>(blk)] = v;
    }
    double sv = 0.0;
    for (double v : pm) sv += v;
    out.variance = sv / out.mass;
    return out;
}

void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table) {
    const int stride = order + 1;
    const int entries = stride * stride;
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < entries; ++e) {
        const int s = e / stride;
        const int f = e % stride;
        if (s + f > order) continue;
        double acc = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) acc += w[k] * std::pow(p[k], s) * std::pow(1.0 - p[k], f);
        table[static_cast<std::size_t>(e)] = acc;
    }
}

void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out) {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const auto m_count = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < m_count; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = x[m] - centers[k];
            acc += w[k] * norm * std::exp(-0.5 * d * d);
        }
        out[m] = acc;
    }
}

void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out) {
    const std::size_t n = z.size();
    // suffix sums: tail_w[k] = sum_{i>=k} w_i, tail_wz[k] = sum_{i>=k} w_i z_i
    std::vector<double> tail_w(n + 1, 0.0), tail_wz(n + 1, 0.0);
    for (std::size_t k = n; k > 0; --k) {
        tail_w[k - 1] = tail_w[k] + w[k - 1];
        tail_wz[k - 1] = tail_wz[k] + w[k - 1] * z[k - 1];
    }
    const auto bn = static_cast<std::ptrdiff_t>(b.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < bn; ++j) {
        const auto idx = static_cast<std::size_t>(std::upper_bound(z.begin(), z.end(), b[j]) - z.begin());
        out[j] = std::max(0.0, tail_wz[idx] - b[j] * tail_w[idx]);
    }
}

double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    double top = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : top) schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) top = std::max(top, logw[k] + a * x[k] + b * x[k] * x[k]);
    const std::ptrdiff_t blocks = block_count(x.size());
    std::vector<double> pz(static_cast<std::size_t>(blocks)), px(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::ptrdiff_t end = std::min(n, (blk + 1) * kBlock);
        double z = 0.0, s = 0.0;
        for (std::ptrdiff_t k = blk * kBlock; k < end; ++k) {
            const double e = logw[k] + a * x[k] + b * x[k] * x[k] - top;
            if (e < -50.0) continue;
            const double t = std::exp(e);
            z += t;
            s += t * x[k];
        }
        pz[static_cast<std::size_t>(blk)] = z;
        px[static_cast<std::size_t>(blk)] = s;
    }
    double z = 0.0, sx = 0.0;
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        z += pz[static_cast<std::size_t>(blk)];
        sx += px[static_cast<std::size_t>(blk)];
    }
    return sx / z;
}

}  // namespace omp

double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out) {
    return x.size() >= kParallelThreshold ? omp::exp_tilt(x, w, a, b, out) : serial::exp_tilt(x, w, a, b, out);
}

Moments moments(std::span<const double> x, std::span<const double> w) {
    return x.size() >= kParallelThreshold ? omp::moments(x, w) : serial::moments(x, w);
}

void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table) {
    if (p.size() * static_cast<std::size_t>(order + 1) >= kParallelThreshold) {
        omp::power_moment_table(p, w, order, table);
    } else {
        serial::power_moment_table(p, w, order, table);
    }
}

void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out) {
    if (centers.size() * x.size() >= kParallelThreshold) {
        omp::mixture_normal_density(centers, w, x, out);
    } else {
        serial::mixture_normal_density(centers, w, x, out);
    }
}

void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out) {
    // the suffix-sum version is O(n + m log n); the serial reference is O(n m)
    omp::stop_loss(z, w, b, out);
}

double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b) {
    return x.size() >= kParallelThreshold ? omp::tilted_mean(x, logw, a, b) : serial::tilted_mean(x, logw, a, b);
}

void configure_threads_from_env() {
    if (const char* env = std::getenv("BANDITLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
}

}  // namespace banditlab::kernels
