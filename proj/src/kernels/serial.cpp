#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "banditlab/kernels.hpp"

namespace banditlab::kernels::serial {

double exp_tilt(std::span<const double> x, std::span<const double> w, double a, double b, std::span<double> out) {
    const std::size_t n = x.size();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        if (w[k] > 0.0) top = std::max(top, std::log(w[k]) + a * x[k] + b * x[k] * x[k]);
    }
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = w[k] > 0.0 ? std::exp(std::log(w[k]) + a * x[k] + b * x[k] * x[k] - top) : 0.0;
        z += out[k];
    }
    for (std::size_t k = 0; k < n; ++k) out[k] /= z;
    return std::log(z);
}

Moments moments(std::span<const double> x, std::span<const double> w) {
    Moments m;
    double sx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        m.mass += w[k];
        sx += w[k] * x[k];
    }
    m.mean = sx / m.mass;
    double sv = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sv += w[k] * (x[k] - m.mean) * (x[k] - m.mean);
    m.variance = sv / m.mass;
    return m;
}

void power_moment_table(std::span<const double> p, std::span<const double> w, int order, std::span<double> table) {
    const int stride = order + 1;
    for (int s = 0; s <= order; ++s) {
        for (int f = 0; s + f <= order; ++f) {
            double acc = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                acc += w[k] * std::pow(p[k], s) * std::pow(1.0 - p[k], f);
            }
            table[static_cast<std::size_t>(s * stride + f)] = acc;
        }
    }
}

void mixture_normal_density(std::span<const double> centers, std::span<const double> w,
                            std::span<const double> x, std::span<double> out) {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < x.size(); ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = x[m] - centers[k];
            acc += w[k] * norm * std::exp(-0.5 * d * d);
        }
        out[m] = acc;
    }
}

void stop_loss(std::span<const double> z, std::span<const double> w, std::span<const double> b, std::span<double> out) {
    for (std::size_t j = 0; j < b.size(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (z[k] > b[j]) acc += w[k] * (z[k] - b[j]);
        }
        out[j] = acc;
    }
}

double tilted_mean(std::span<const double> x, std::span<const double> logw, double a, double b) {
    const std::size_t n = x.size();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) top = std::max(top, logw[k] + a * x[k] + b * x[k] * x[k]);
    double z = 0.0, sx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = logw[k] + a * x[k] + b * x[k] * x[k] - top;
        if (e < -50.0) continue;
        const double t = std::exp(e);
        z += t;
        sx += t * x[k];
    }
    return sx / z;
}

}  // namespace banditlab::kernels::serial
