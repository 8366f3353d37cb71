#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "banditlab/discount.hpp"
#include "banditlab/error.hpp"

using namespace banditlab;

namespace {
ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("validate") {
    CHECK(DiscountSequence::validate({1, 1, 1}).size() == 3);
    CHECK(DiscountSequence::validate({1, 0, 1}).total() == 2.0);
    CHECK(kind_of([] { DiscountSequence::validate({1, -1}); }) == ErrorKind::NegativeWeight);
    CHECK(kind_of([] { DiscountSequence::validate({0, 0}); }) == ErrorKind::ZeroMass);
    CHECK(kind_of([] { DiscountSequence::validate({}); }) == ErrorKind::EmptySequence);
}

TEST_CASE("tail") {
    CHECK(DiscountSequence::validate({1, 1, 1}).tail() == DiscountSequence::validate({1, 1}));
    CHECK(DiscountSequence::validate({3, 2, 1}).tail() == DiscountSequence::validate({2, 1}));
    const DiscountSequence last = DiscountSequence::validate({5}).tail();
    CHECK(last.empty());
    CHECK(last.total() == 0.0);
    CHECK(DiscountSequence::validate({3, 2, 1}).drop(2) == DiscountSequence::validate({1}));
}

TEST_CASE("tail sums") {
    const auto a = DiscountSequence::validate({3, 2, 1});
    CHECK(a.tail_sum(0) == 6.0);
    CHECK(a.tail_sum(1) == 3.0);
    CHECK(a.tail_sum(2) == 1.0);
    CHECK(a.tail_sum(3) == 0.0);
    CHECK(a.tail_sum(10) == 0.0);
}

TEST_CASE("is_decreasing") {
    CHECK(DiscountSequence::validate({3, 2, 1}).is_decreasing());
    CHECK(DiscountSequence::validate({1, 1, 1}).is_decreasing());
    CHECK_FALSE(DiscountSequence::validate({1, 2}).is_decreasing());
}

TEST_CASE("is_regular") {
    CHECK(DiscountSequence::validate({1, 1, 1}).is_regular());
    CHECK_FALSE(DiscountSequence::validate({1, 0, 1}).is_regular());
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        for (std::size_t n = 1; n <= 40; ++n) {
            CAPTURE(beta);
            CAPTURE(n);
            CHECK(DiscountSequence::geometric(beta, n).is_regular());
        }
    }
    // decreasing is not enough: (2,1,1) has b = (4,2,1,0), 4 >= 4 and 1 >= 0
    CHECK(DiscountSequence::validate({2, 1, 1}).is_regular());
    // (3,1,1): b = (5,2,1), 4 < 5
    CHECK_FALSE(DiscountSequence::validate({3, 1, 1}).is_regular());
}

TEST_CASE("constructors") {
    CHECK(DiscountSequence::uniform(4) == DiscountSequence::validate({1, 1, 1, 1}));
    const auto g = DiscountSequence::geometric(0.5, 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 0.5);
    CHECK(g[2] == 0.25);
    CHECK(g.scaled(2.0) == DiscountSequence::validate({2, 1, 0.5}));
}
