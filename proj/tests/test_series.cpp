#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diastasis/errors.hpp"
#include "diastasis/oracle.hpp"
#include "diastasis/series.hpp"
#include "support.hpp"

using namespace diastasis;
using namespace testing_support;

TEST_CASE("graded order positions")
{
    const auto ord2 = GradedOrder::make(2, 3);
    CHECK(index_position(mi({0, 0}), *ord2) == 0);
    CHECK(index_position(mi({0, 1}), *ord2) == 1);
    CHECK(index_position(mi({1, 0}), *ord2) == 2);
    CHECK(index_position(mi({0, 2}), *ord2) == 3);
    CHECK(index_position(mi({1, 1}), *ord2) == 4);
    CHECK(index_position(mi({2, 0}), *ord2) == 5);

    const auto ord1 = GradedOrder::make(1, 5);
    CHECK(index_position(mi({3}), *ord1) == 3);

    CHECK_THROWS_AS(index_position(mi({1}), *ord2), DimensionError);
    CHECK_THROWS_AS(index_position(mi({4, 0}), *ord2), DomainError);
}

TEST_CASE("graded order is a degree-sorted bijection independent of the bound")
{
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto small = GradedOrder::make(n, 3);
        const auto big = GradedOrder::make(n, 5);
        for (std::size_t p = 0; p < big->size(); ++p) {
            const auto& m = monomial_at(p, *big);
            CHECK(index_position(m, *big) == p);
            if (p > 0) {
                const auto& prev = monomial_at(p - 1, *big);
                CHECK(prev.degree() <= m.degree());
                if (prev.degree() == m.degree())
                    CHECK(prev < m);
            }
            if (p < small->size())
                CHECK(monomial_at(p, *small) == m);
        }
        CHECK(monomial_at(0, *big) == MultiIndex::zero(n));
    }
}

TEST_CASE("mul")
{
    const auto z2 = flat(1, 4);
    const auto z4 = HermitianSeries::from_terms(1, 4, {{mi({2}), mi({2}), Coefficient(1)}});
    CHECK(mul(z2, z2) == z4);

    const auto one = HermitianSeries::constant(1, 4, 1);
    CHECK(mul(one + z2, one - z2) == one - z4);

    // Result bound is the smaller one.
    CHECK(mul(flat(2, 3), flat(2, 5)).bound() == 3);
    CHECK_THROWS_AS(mul(flat(1, 3), flat(2, 3)), DimensionError);
}

TEST_CASE("mul of Gram sums is the Gram sum of pairwise products")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    const std::size_t n = 2;
    const unsigned d = 3;
    const auto ord = GradedOrder::make(n, d);
    std::uniform_int_distribution<std::size_t> pos(0, ord->count_up_to(2) - 1);
    auto random_holo = [&] {
        HoloSeries::TermMap t;
        for (int i = 0; i < 3; ++i) {
            Rational re(num(rng), den(rng)), im(num(rng), den(rng));
            re.canonicalize();
            im.canonicalize();
            t[std::uint32_t(pos(rng))] = Coefficient(re, im);
        }
        return HoloSeries(n, d, t);
    };
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<HoloSeries> f{random_holo(), random_holo()}, g{random_holo(), random_holo(), random_holo()};
        std::vector<HoloSeries> fg;
        for (const auto& a : f)
            for (const auto& b : g)
                fg.push_back(a * b);
        const auto lhs = mul(gram_from_factors(f), gram_from_factors(g));
        const auto rhs = gram_from_factors(fg);
        CHECK(lhs == rhs);
        const auto naive = oracle::brute_expand(
            oracle::Expr::base(gram_from_factors(f)) * oracle::Expr::base(gram_from_factors(g)), n, d);
        CHECK(naive == lhs);
    }
}

TEST_CASE("exp")
{
    CHECK(exp(HermitianSeries(2, 4)) == HermitianSeries::constant(2, 4, 1));

    const auto e = exp(flat(1, 6));
    for (unsigned k = 0; k <= 6; ++k)
        CHECK(e.coeff(mi({k}), mi({k})) == Coefficient(Rational(1) / factorial(k)));
    CHECK(e.terms().size() == 7);
    CHECK(e == oracle::brute_expand(oracle::exp(oracle::Expr::base(flat(1, 6))), 1, 6));

    const auto one_plus = one_plus_norm_power(2, 4, 1);
    CHECK(exp(fubini_study(2, 4)) == one_plus);

    CHECK_THROWS_AS(exp(HermitianSeries::constant(1, 3, 1)), DomainError);
}

TEST_CASE("log")
{
    CHECK(log(HermitianSeries::constant(1, 5, 1)).is_zero());

    const auto l = log(one_plus_norm_power(1, 8, 1));
    for (unsigned k = 1; k <= 8; ++k)
        CHECK(l.coeff(mi({k}), mi({k})) == Coefficient(Rational(k % 2 == 1 ? 1 : -1, k)));
    CHECK(l == fubini_study(1, 8));

    CHECK(log(exp(flat(2, 4))) == flat(2, 4));
    CHECK_THROWS_AS(log(flat(1, 3)), DomainError);
}

TEST_CASE("wirtinger")
{
    const auto dz = wirtinger(flat(1, 3), 0, false);
    CHECK(dz.holo_bound() == 2);
    CHECK(dz.anti_bound() == 3);
    CHECK(dz.terms().size() == 1);
    CHECK(dz.coeff(mi({0}), mi({1})) == Coefficient(1));

    // d^2/dz dzbar log(1+|z|^2) = (1+|z|^2)^{-2} = sum (-1)^k (k+1) |z|^{2k}.
    const auto g = wirtinger(wirtinger(fubini_study(1, 7), 0, false), 0, true);
    CHECK(g.holo_bound() == 6);
    for (unsigned k = 0; k <= 6; ++k)
        CHECK(g.coeff(mi({k}), mi({k})) == Coefficient(long(k % 2 == 0 ? k + 1 : -long(k + 1))));

    CHECK(wirtinger(HermitianSeries::constant(2, 3, 5), 1, false).is_zero());
    CHECK_THROWS_AS(wirtinger(flat(2, 3), 2, false), DimensionError);
}

TEST_CASE("gram_from_factors")
{
    const HoloSeries one = HoloSeries::from_terms(1, 4, {{mi({0}), Coefficient(1)}});
    const HoloSeries z = HoloSeries::from_terms(1, 4, {{mi({1}), Coefficient(1)}});
    const HoloSeries z2 = HoloSeries::from_terms(1, 4, {{mi({2}), Coefficient(1)}});
    std::vector<HoloSeries> just_one{one};
    CHECK(gram_from_factors(just_one) == HermitianSeries::constant(1, 4, 1));
    std::vector<HoloSeries> two{one, z};
    CHECK(gram_from_factors(two) == one_plus_norm_power(1, 4, 1));

    // 1 + |z|^2 + |z^2|^2 / 2: weights carry the rational squared norms.
    std::vector<HoloSeries> three{one, z, z2};
    std::vector<Rational> w{1, 1, q(1, 2)};
    CHECK(gram_from_factors(three, w).truncated(2) == exp(flat(1, 2)));

    CHECK_THROWS_AS(gram_from_factors({}), DomainError);
}

TEST_CASE("laurent_substitute")
{
    // |z0|^2 (1 + |z1/z0|^2) -> |z0|^2 + |z1|^2
    const auto phi = HermitianSeries::from_terms(2, 3,
        {{mi({1, 0}), mi({1, 0}), Coefficient(1)}, {mi({1, 1}), mi({1, 1}), Coefficient(1)}});
    LaurentRules rules = identity_rules(2);
    rules.images[1] = {-1, 1};
    const auto out = laurent_substitute(phi, rules);
    CHECK(out == HermitianSeries::from_terms(2, 3,
                     {{mi({1, 0}), mi({1, 0}), Coefficient(1)}, {mi({0, 1}), mi({0, 1}), Coefficient(1)}}));

    CHECK(laurent_substitute(phi, identity_rules(2)) == phi);

    const auto lone = HermitianSeries::from_terms(2, 3, {{mi({0, 1}), mi({0, 1}), Coefficient(1)}});
    CHECK_THROWS_AS(laurent_substitute(lone, rules), DomainError);

    // A truncated expansion is not a polynomial.
    CHECK_THROWS_AS(laurent_substitute(fubini_study(2, 3), rules), DomainError);
}

TEST_CASE("evaluate")
{
    const std::vector<std::complex<double>> origin{0.0};
    const auto s = one_plus_norm_power(1, 3, 1) + HermitianSeries::constant(1, 3, 2);
    CHECK(evaluate(s, origin).real() == doctest::Approx(3.0));

    const std::vector<std::complex<double>> at_one{1.0};
    CHECK(evaluate(one_plus_norm_power(1, 3, 1), at_one).real() == doctest::Approx(2.0));

    const std::vector<std::complex<double>> half{0.5};
    const double v = evaluate(fubini_study(1, 12), half).real();
    CHECK(std::abs(v - std::log(1.25)) < 1e-9);
}

TEST_CASE("hermitian symmetry is enforced")
{
    Series::TermMap t;
    t[{1, 2}] = Coefficient(1);
    CHECK_THROWS_AS(HermitianSeries(Series(1, 2, 2, t)), InvariantError);
    CHECK_THROWS_AS(HermitianSeries(Series(1, 2, 3)), InvariantError);

    CHECK_THROWS_AS(HermitianSeries::from_terms(1, 2,
                        {{mi({1}), mi({0}), Coefficient(1)}, {mi({0}), mi({1}), Coefficient(2)}}),
        DomainError);
}

TEST_CASE("translate is the shifted polynomial")
{
    // |z + 1/2|^2 = |z|^2 + (z + zbar)/2 + 1/4
    const std::vector<GaussRational> shift{GaussRational(q(1, 2))};
    const auto out = translate(HermitianSeries::from_terms(1, 2, {{mi({1}), mi({1}), Coefficient(1)}}), shift);
    CHECK(out == HermitianSeries::from_terms(1, 2,
                     {{mi({1}), mi({1}), Coefficient(1)}, {mi({1}), mi({0}), Coefficient(q(1, 2))},
                         {mi({0}), mi({0}), Coefficient(q(1, 4))}}));
}
