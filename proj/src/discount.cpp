#include "banditlab/discount.hpp"

#include <cmath>
#include <string>

#include "banditlab/error.hpp"

namespace banditlab {

DiscountSequence DiscountSequence::validate(std::vector<double> values) {
    if (values.empty()) fail(ErrorKind::EmptySequence, "discount sequence must be nonempty");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            fail(ErrorKind::InvalidArgument, "discount weight a_" + std::to_string(i + 1) + " is not finite");
        }
        if (values[i] < 0.0) {
            fail(ErrorKind::NegativeWeight, "discount weight a_" + std::to_string(i + 1) + " is negative");
        }
        sum += values[i];
    }
    if (!(sum > 0.0)) fail(ErrorKind::ZeroMass, "discount weights sum to zero");
    return DiscountSequence(std::move(values));
}

DiscountSequence DiscountSequence::uniform(std::size_t n) {
    return validate(std::vector<double>(n, 1.0));
}

DiscountSequence DiscountSequence::geometric(double beta, std::size_t n) {
    if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::InvalidArgument, "geometric beta must be positive");
    std::vector<double> a(n);
    double w = 1.0;
    for (auto& x : a) {
        x = w;
        w *= beta;
    }
    return validate(std::move(a));
}

double DiscountSequence::tail_sum(std::size_t i) const noexcept {
    double s = 0.0;
    // summed back to front so b_j are computed the same way for every j
    for (std::size_t k = a_.size(); k > i; --k) s += a_[k - 1];
    return s;
}

DiscountSequence DiscountSequence::tail() const { return drop(1); }

DiscountSequence DiscountSequence::drop(std::size_t k) const {
    if (k >= a_.size()) return DiscountSequence{};
    return DiscountSequence(std::vector<double>(a_.begin() + static_cast<std::ptrdiff_t>(k), a_.end()));
}

DiscountSequence DiscountSequence::scaled(double kappa) const {
    if (!(kappa > 0.0)) fail(ErrorKind::NonPositiveScale, "discount scale must be positive");
    std::vector<double> a = a_;
    for (auto& x : a) x *= kappa;
    return DiscountSequence(std::move(a));
}

bool DiscountSequence::is_decreasing() const noexcept {
    for (std::size_t i = 1; i < a_.size(); ++i) {
        if (a_[i] > a_[i - 1]) return false;
    }
    return true;
}

bool DiscountSequence::is_regular() const noexcept {
    const std::size_t n = a_.size();
    std::vector<double> b(n + 3, 0.0);
    for (std::size_t j = n; j > 0; --j) b[j - 1] = b[j] + a_[j - 1];
    // b[j] here is b_{j+1}; terms with j >= n involve only zeros on the right.
    for (std::size_t j = 0; j < n; ++j) {
        if (b[j + 1] * b[j + 1] - b[j] * b[j + 2] < -kRegularitySlack) return false;
    }
    return true;
}

}  // namespace banditlab
