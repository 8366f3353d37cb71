#include "banditlab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "banditlab/error.hpp"

namespace banditlab::quad {

Rule from_recurrence(std::span<const double> alpha, std::span<const double> beta) {
    const auto n = static_cast<Eigen::Index>(alpha.size());
    if (n == 0 || beta.size() != alpha.size()) fail(ErrorKind::InvalidArgument, "bad recurrence coefficients");
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < n; ++i) sub(i - 1) = std::sqrt(beta[static_cast<std::size_t>(i)]);

    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = alpha[0];
        rule.weights[0] = beta[0];
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "Golub-Welsch eigensolve failed");
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        rule.weights[static_cast<std::size_t>(i)] = beta[0] * v0 * v0;
    }
    return rule;
}

namespace {

template <class Make>
const Rule& cached(std::map<std::size_t, Rule>& cache, std::mutex& mu, std::size_t n, Make make) {
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

Rule make_legendre_unit(std::size_t n) {
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    beta[0] = 2.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        beta[k] = kk * kk / (4.0 * kk * kk - 1.0);
    }
    Rule r = from_recurrence(alpha, beta);
    // map [-1,1] -> [0,1]; symmetrize so the rule is exactly reflection invariant
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= 0.5;
    }
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double x = 0.5 * (r.nodes[i] + (1.0 - r.nodes[j]));
        const double w = 0.5 * (r.weights[i] + r.weights[j]);
        r.nodes[i] = x;
        r.nodes[j] = 1.0 - x;
        r.weights[i] = r.weights[j] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.5;
    const double s = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    for (auto& w : r.weights) w /= s;
    return r;
}

Rule make_hermite_standard(std::size_t n) {
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    beta[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) beta[k] = static_cast<double>(k);
    Rule r = from_recurrence(alpha, beta);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[j]);
        r.nodes[i] = -x;
        r.nodes[j] = x;
        r.weights[i] = r.weights[j] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    const double s = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    for (auto& w : r.weights) w /= s;
    return r;
}

}  // namespace

const Rule& legendre_unit(std::size_t n) {
    static std::map<std::size_t, Rule> cache;
    static std::mutex mu;
    if (n == 0) fail(ErrorKind::InvalidArgument, "quadrature order must be positive");
    return cached(cache, mu, n, make_legendre_unit);
}

const Rule& hermite_standard(std::size_t n) {
    static std::map<std::size_t, Rule> cache;
    static std::mutex mu;
    if (n == 0) fail(ErrorKind::InvalidArgument, "quadrature order must be positive");
    return cached(cache, mu, n, make_hermite_standard);
}

Rule gauss_for_discrete(std::span<const double> atoms, std::span<const double> masses, std::size_t n) {
    const std::size_t m = atoms.size();
    if (m == 0 || masses.size() != m || n == 0) fail(ErrorKind::InvalidArgument, "empty discrete measure");

    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mass += masses[i];
        mean += masses[i] * atoms[i];
    }
    if (!(mass > 0.0)) fail(ErrorKind::ZeroMass, "discrete measure has no mass");
    mean /= mass;
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) var += masses[i] * (atoms[i] - mean) * (atoms[i] - mean);
    var /= mass;
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;

    // Stieltjes on standardized atoms with orthonormal polynomial vectors.
    std::vector<double> z(m), w(m), p_prev(m, 0.0), p_cur(m), next(m);
    for (std::size_t i = 0; i < m; ++i) {
        z[i] = (atoms[i] - mean) / scale;
        w[i] = masses[i] / mass;
        p_cur[i] = 1.0;
    }
    std::vector<double> alpha, beta;
    alpha.reserve(n);
    beta.reserve(n);
    beta.push_back(1.0);
    double sqrt_beta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double a = 0.0;
        for (std::size_t i = 0; i < m; ++i) a += w[i] * z[i] * p_cur[i] * p_cur[i];
        alpha.push_back(a);
        if (k + 1 == n) break;
        double b = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = (z[i] - a) * p_cur[i] - sqrt_beta * p_prev[i];
            b += w[i] * next[i] * next[i];
        }
        if (!(b > 1e-26)) break;  // measure exhausted
        sqrt_beta = std::sqrt(b);
        for (std::size_t i = 0; i < m; ++i) next[i] /= sqrt_beta;
        beta.push_back(b);
        std::swap(p_prev, p_cur);
        std::swap(p_cur, next);
    }
    alpha.resize(beta.size());
    Rule r = from_recurrence(alpha, beta);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r.nodes[i] = mean + scale * r.nodes[i];
        r.weights[i] *= mass;
    }
    return r;
}

}  // namespace banditlab::quad
