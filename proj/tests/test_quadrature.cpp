#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wv/numerics/quadrature.hpp"

using wv::numerics::integrate;
using wv::numerics::TailHint;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("finite-interval polynomials are exact") {
    auto res = integrate([](double t) { return (1 + t) * (1 + t); }, 0.0, 3.0, 1e-12);
    CHECK(res.value == Catch::Approx(21.0).epsilon(1e-13));
    CHECK(res.abs_error_estimate <= 1e-12);
    CHECK_FALSE(res.truncation_point.has_value());
}

TEST_CASE("inverse cube tail integrates to one half") {
    // antiderivative -(1/2)(1+t)^-2
    auto res = integrate([](double t) { return std::pow(1 + t, -3.0); }, 0.0, kInf, 1e-10,
                         TailHint::power(3.0));
    CHECK(std::abs(res.value - 0.5) <= res.abs_error_estimate);
    CHECK(res.abs_error_estimate <= 1e-10);
    CHECK(res.truncation_point.has_value());
}

TEST_CASE("t times inverse cube also integrates to one half") {
    auto res = integrate([](double t) { return t * std::pow(1 + t, -3.0); }, 0.0, kInf, 1e-10,
                         TailHint::power(2.0));
    CHECK(std::abs(res.value - 0.5) <= res.abs_error_estimate);
    CHECK(res.abs_error_estimate <= 1e-10);
}

TEST_CASE("tail hint is optional for decaying integrands") {
    auto res = integrate([](double t) { return std::pow(1 + t, -3.0); }, 0.0, kInf, 1e-10);
    CHECK(std::abs(res.value - 0.5) <= res.abs_error_estimate);
}

TEST_CASE("zero integrand gives exactly zero") {
    auto res = integrate([](double) { return 0.0; }, 0.0, kInf, 1e-10);
    CHECK(res.value == 0.0);
    CHECK(res.abs_error_estimate <= 1e-10);
}

TEST_CASE("compactly supported integrand with a support hint") {
    auto f = [](double t) { return std::max(0.0, 2.0 * (1 - t / 3.0)); };
    auto res = integrate(f, 0.0, kInf, 1e-12, TailHint::compact(3.0));
    CHECK(res.value == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(res.truncation_point.has_value());
}

TEST_CASE("exponential tail converges without a hint") {
    auto res = integrate([](double t) { return std::exp(-t); }, 0.0, kInf, 1e-10);
    CHECK(std::abs(res.value - 1.0) <= 1e-9);
}

TEST_CASE("logarithmically divergent tail is rejected") {
    CHECK_THROWS_AS(integrate([](double t) { return 1.0 / (1.0 + t); }, 0.0, kInf, 1e-8),
                    wv::TailNotConvergent);
}

TEST_CASE("non-finite integrand is reported") {
    auto bad = [](double t) { return t == 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
    // hit the midpoint of [0, 1] exactly
    CHECK_THROWS_AS(integrate(bad, 0.0, 1.0, 1e-10), wv::NonFiniteIntegrand);
}

TEST_CASE("additivity across a split point within combined errors") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        const double a = 3 * unit(rng), w1 = 1 + 4 * unit(rng), w2 = 1 + 4 * unit(rng);
        const double b = a + w1, c = b + w2;
        const double amp = 0.5 + 3 * unit(rng), freq = 0.5 + 2 * unit(rng);
        auto f = [amp, freq](double t) { return amp * std::sin(freq * t) + std::exp(-0.3 * t); };
        auto whole = integrate(f, a, c, 1e-11);
        auto left = integrate(f, a, b, 1e-11);
        auto right = integrate(f, b, c, 1e-11);
        const double budget = whole.abs_error_estimate + left.abs_error_estimate +
                              right.abs_error_estimate + 1e-14;
        CHECK(std::abs(whole.value - (left.value + right.value)) <= budget);
    }
}

TEST_CASE("error estimates honestly bound the true error on smooth oracles") {
    auto r1 = integrate([](double t) { return std::sin(t); }, 0.0, M_PI, 1e-11);
    CHECK(std::abs(r1.value - 2.0) <= std::max(r1.abs_error_estimate, 1e-13));
    auto r2 = integrate([](double t) { return std::exp(-t * t); }, 0.0, 6.0, 1e-12);
    CHECK(std::abs(r2.value - 0.5 * std::sqrt(M_PI)) <= std::max(r2.abs_error_estimate, 1e-13));
}
