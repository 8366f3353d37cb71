#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace banditlab::quad {

/// Nodes and weights of a quadrature rule; weights sum to the measure's mass.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Golub-Welsch: Gauss rule from three-term recurrence coefficients.
/// alpha has n entries, beta has n entries with beta[0] the total mass.
Rule from_recurrence(std::span<const double> alpha, std::span<const double> beta);

/// Gauss-Legendre on [0, 1], weights summing to 1.
const Rule& legendre_unit(std::size_t n);

/// Gauss-Hermite for the standard normal law (probabilists' weight), weights summing to 1.
const Rule& hermite_standard(std::size_t n);

/// Gauss rule with at most n nodes for a discrete measure (atoms, masses)
/// via the discretized Stieltjes procedure. Stops early when the measure is
/// exhausted (fewer distinct atoms than n).
Rule gauss_for_discrete(std::span<const double> atoms, std::span<const double> masses, std::size_t n);

}  // namespace banditlab::quad
