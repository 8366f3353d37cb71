#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace banditlab {

/// Finite sequence of nonnegative payoff weights a_1..a_n.
///
/// Validated sequences have positive total mass. Tails produced by tail()
/// may have zero mass (including the empty sequence); those are the
/// terminal objects of the value recursion and contribute nothing.
class DiscountSequence {
public:
    DiscountSequence() = default;

    /// Throws NegativeWeight / ZeroMass / EmptySequence.
    static DiscountSequence validate(std::vector<double> values);
    static DiscountSequence uniform(std::size_t n);
    /// a_i = beta^(i-1), 0 < beta.
    static DiscountSequence geometric(double beta, std::size_t n);

    std::size_t size() const noexcept { return a_.size(); }
    bool empty() const noexcept { return a_.empty(); }
    double operator[](std::size_t i) const { return a_[i]; }
    std::span<const double> values() const noexcept { return a_; }

    double total() const noexcept { return tail_sum(0); }
    /// b_{i+1} in one-based notation: sum of a_k for k >= i (zero-based), 0 past the end.
    double tail_sum(std::size_t i) const noexcept;

    /// Drops the first weight; the tail of a length-1 sequence is empty.
    DiscountSequence tail() const;
    DiscountSequence drop(std::size_t k) const;
    DiscountSequence scaled(double kappa) const;

    bool is_decreasing() const noexcept;
    bool is_regular() const noexcept;

    friend bool operator==(const DiscountSequence&, const DiscountSequence&) = default;

private:
    explicit DiscountSequence(std::vector<double> a) : a_(std::move(a)) {}

    std::vector<double> a_;
};

/// Absolute slack on b_{j+1}^2 - b_j b_{j+2} used by is_regular().
inline constexpr double kRegularitySlack = 1e-12;

}  // namespace banditlab
