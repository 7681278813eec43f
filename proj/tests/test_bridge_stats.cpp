#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tlg/bridge_stats.hpp"

using namespace tlg;
using Catch::Approx;

TEST_CASE("exact single-bridge maximum moments") {
    // From the tail exp(-2 beta^2): E[(M_1^+)^2] = 1/2 exactly.
    auto stats = bridge_max_stats(1, 40000, 4242, 10);
    REQUIRE(std::fabs(stats.max_plus_sq.mean - 0.5) < 5 * stats.max_plus_sq.stderr_);
    // The grid-only estimator sits below the exact one (it misses in-segment
    // excursions).
    REQUIRE(stats.max_plus_sq_grid.mean < stats.max_plus_sq.mean);
    REQUIRE(stats.max_plus_sq_coarse.mean <= stats.max_plus_sq_grid.mean);
}

TEST_CASE("harmonic identity 2 E(M_n^+2) = H_n") {
    REQUIRE(bridge_max_sq_identity_factor() == 2.0);
    for (std::size_t n : {1u, 2u, 5u}) {
        auto stats = bridge_max_stats(n, 20000, 4242, 10);
        const double est = 2.0 * stats.max_plus_sq.mean;
        const double se = 2.0 * stats.max_plus_sq.stderr_;
        REQUIRE(std::fabs(est - harmonic_number(n)) < 5 * se);
    }
}

TEST_CASE("single-bridge tail matches exp(-2 beta^2)") {
    auto stats = bridge_max_stats(1, 40000, 515, 11, 1.0);
    const double target = std::exp(-2.0);
    REQUIRE(std::fabs(stats.tail_prob.mean - target) < 5 * stats.tail_prob.stderr_);
}

TEST_CASE("bridge maxima are deterministic per seed") {
    auto a = bridge_max_stats(2, 2000, 7, 10);
    auto b = bridge_max_stats(2, 2000, 7, 10);
    REQUIRE(a.max_plus_sq.mean == b.max_plus_sq.mean);
    REQUIRE(a.max_abs.mean == b.max_abs.mean);
    REQUIRE(a.tail_prob.mean == b.tail_prob.mean);
}

TEST_CASE("half-normal mean respects the maximal bound at n = 1") {
    auto check = max_bound_check({1.0}, std::nullopt, 100000, 31);
    REQUIRE(check.max_abs.mean == Approx(std::sqrt(2.0 / M_PI)).margin(0.02));
    REQUIRE(check.bound_abs == Approx(2.0 * std::sqrt(std::log(2.0))));
    REQUIRE(check.abs_ok);
    REQUIRE(check.sq_ok);
}

TEST_CASE("ten i.i.d. unit normals respect the bound") {
    auto check = max_bound_check(std::vector<double>(10, 1.0), std::nullopt, 100000, 77);
    REQUIRE(check.bound_abs == Approx(2.0 * std::sqrt(std::log(11.0))).epsilon(1e-12));
    REQUIRE(check.abs_ok);
    REQUIRE(check.sq_ok);
}

TEST_CASE("correlated vectors respect the bound too") {
    Eigen::MatrixXd corr(3, 3);
    corr << 1.0, 0.8, 0.5, 0.8, 1.0, 0.8, 0.5, 0.8, 1.0;
    auto check = max_bound_check({1.0, 0.5, 1.0}, corr, 50000, 13);
    REQUIRE(check.abs_ok);
    REQUIRE(check.sq_ok);
}

TEST_CASE("non-PSD correlation matrices are rejected") {
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, 2.0, 2.0, 1.0;
    REQUIRE_THROWS(max_bound_check({1.0, 1.0}, corr, 100, 3));
}

TEST_CASE("all-zero sigmas give a trivial zero bound") {
    auto check = max_bound_check({0.0, 0.0}, std::nullopt, 1000, 5);
    REQUIRE(check.max_abs.mean == 0.0);
    REQUIRE(check.bound_abs == 0.0);
    REQUIRE(check.abs_ok);
}
