#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diastasis/errors.hpp"
#include "diastasis/oracle.hpp"
#include "support.hpp"

using namespace diastasis;
using namespace testing_support;
using oracle::Expr;

namespace {

using Point = std::vector<std::complex<double>>;

double norm2(std::span<const std::complex<double>> p)
{
    double s = 0;
    for (const auto& x : p)
        s += std::norm(x);
    return s;
}

} // namespace

TEST_CASE("fd_mixed_second")
{
    const oracle::ScalarField sq = [](std::span<const std::complex<double>> p) { return std::complex<double>(norm2(p)); };
    CHECK(std::abs(oracle::fd_mixed_second(sq, 0, 0, Point{0.3}, 1e-4) - 1.0) < 1e-8);

    const oracle::ScalarField fs = [](std::span<const std::complex<double>> p) {
        return std::complex<double>(std::log1p(norm2(p)));
    };
    CHECK(std::abs(oracle::fd_mixed_second(fs, 0, 0, Point{0.5}, 1e-4) - 1.0 / (1.25 * 1.25)) < 1e-6);

    const oracle::ScalarField constant = [](std::span<const std::complex<double>>) { return std::complex<double>(7.0); };
    CHECK(std::abs(oracle::fd_mixed_second(constant, 0, 0, Point{0.2}, 1e-4)) < 1e-8);

    // Off-diagonal: d^2/dz0 dzbar1 of z1 zbar0 z0 zbar1 = |z0|^2 |z1|^2 gives zbar0 z1.
    const oracle::ScalarField prod = [](std::span<const std::complex<double>> p) {
        return std::complex<double>(std::norm(p[0]) * std::norm(p[1]));
    };
    const Point p{{0.3, 0.1}, {-0.2, 0.4}};
    CHECK(std::abs(oracle::fd_mixed_second(prod, 0, 1, p, 1e-4) - std::conj(p[0]) * p[1]) < 1e-7);

    CHECK_THROWS_AS(oracle::fd_mixed_second(sq, 1, 0, Point{0.1}, 1e-4), DimensionError);
}

TEST_CASE("brute_expand")
{
    const auto e = oracle::brute_expand(oracle::exp(Expr::base(flat(1, 6))), 1, 6);
    for (unsigned k = 0; k <= 6; ++k)
        CHECK(e.coeff(mi({k}), mi({k})) == Coefficient(Rational(1) / factorial(k)));

    // (1 - |z|^2)^{-1/2}: coefficients binom(2k, k) / 4^k.
    const auto one_minus = HermitianSeries::constant(1, 6, 1) - flat(1, 6);
    const auto inv_sqrt = oracle::brute_expand(oracle::exp(q(-1, 2) * oracle::log(Expr::base(one_minus))), 1, 6);
    const auto via_pow = oracle::brute_expand(oracle::pow(Expr::base(one_minus), q(-1, 2)), 1, 6);
    CHECK(inv_sqrt == via_pow);
    for (unsigned k = 0; k <= 6; ++k) {
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), 2 * k, k);
        Integer four = 1;
        four <<= 2 * k;
        Rational expected(b, four);
        expected.canonicalize();
        CHECK(inv_sqrt.coeff(mi({k}), mi({k})) == Coefficient(expected));
    }

    CHECK(oracle::brute_expand(oracle::exp(Expr::base(HermitianSeries(2, 3))), 2, 3) == HermitianSeries::constant(2, 3, 1));
    CHECK_THROWS_AS(oracle::brute_expand(oracle::exp(Expr::constant(1)), 1, 2), DomainError);
    CHECK_THROWS_AS(oracle::brute_expand(Expr::base(flat(1, 2)), 1, 3), DomainError);
}

TEST_CASE("kernel exp and log agree with the naive expansion")
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + trial % 2;
        const unsigned d = 3;
        const auto a = random_hermitian(rng, n, d, 4, true);
        CHECK(exp(a) == oracle::brute_expand(oracle::exp(Expr::base(a)), n, d));
        const auto one_plus = a + HermitianSeries::constant(n, d, 1);
        CHECK(log(one_plus) == oracle::brute_expand(oracle::log(Expr::base(one_plus)), n, d));
    }
}

TEST_CASE("cross_check")
{
    const oracle::ScalarField fs = [](std::span<const std::complex<double>> p) {
        return std::complex<double>(std::log1p(norm2(p)));
    };
    const auto plan = oracle::SamplePlan::make(
        {Point{0.1}, Point{{0.0, 0.3}}, Point{{-0.2, 0.25}}, Point{0.45}, Point{{0.3, -0.3}}}, 0.5, 1e-9);
    const auto good = oracle::cross_check(fubini_study(1, 12), fs, plan);
    CHECK(good.passed);
    CHECK(good.max_relative_deviation < 1e-9);

    const oracle::ScalarField sq = [](std::span<const std::complex<double>> p) { return std::complex<double>(norm2(p)); };
    const auto flat_plan = oracle::SamplePlan::make({Point{0.7, 0.1}, Point{{1.0, 2.0}, -3.0}}, 4.0, 1e-14);
    CHECK(oracle::cross_check(flat(2, 3), sq, flat_plan).passed);

    const auto corrupted = fubini_study(1, 12) + HermitianSeries::from_terms(1, 12, {{mi({2}), mi({2}), Coefficient(q(1, 100))}});
    const auto bad = oracle::cross_check(corrupted, fs, plan);
    CHECK_FALSE(bad.passed);
    CHECK(bad.worst_point == 3);
}
