#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diastasis/cone.hpp"
#include "diastasis/errors.hpp"
#include "diastasis/oracle.hpp"
#include "support.hpp"

using namespace diastasis;
using namespace testing_support;

namespace {

Integer binomial(unsigned n, unsigned k)
{
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

Rational rpow(const Rational& x, unsigned k)
{
    Rational out = 1;
    for (unsigned i = 0; i < k; ++i)
        out *= x;
    return out;
}

// psi(z1, ..., zn) relabelled into n+1 variables with z0 first, by hand.
HermitianSeries shift_right(const HermitianSeries& psi, unsigned bound)
{
    Terms t;
    const auto& ord = psi.order();
    for (const auto& [key, c] : psi.terms()) {
        std::vector<unsigned> h{0}, a{0};
        for (unsigned e : ord.monomial(key.first).exponents())
            h.push_back(e);
        for (unsigned e : ord.monomial(key.second).exponents())
            a.push_back(e);
        t.emplace_back(MultiIndex(h), MultiIndex(a), c);
    }
    return HermitianSeries::from_terms(psi.n() + 1, bound, t);
}

MultiIndex with_z0(unsigned e0, const MultiIndex& m)
{
    std::vector<unsigned> e{e0};
    for (unsigned x : m.exponents())
        e.push_back(x);
    return MultiIndex(e);
}

// Naive expansion of e^{D_q} with D_q = |z0+eps|^{2c} e^{c psi} - eps^c (z0+eps)^c
// - eps^c (zbar0+eps)^c + eps^{2c}, integer c.
HermitianSeries naive_exp_dq(unsigned c, const Rational& eps, const HermitianSeries& psi, unsigned bound)
{
    const std::size_t n1 = psi.n() + 1;
    Terms radial, pure;
    for (unsigned a = 0; a <= c; ++a) {
        const Rational ca = Rational(binomial(c, a)) * rpow(eps, c - a);
        for (unsigned b = 0; b <= c; ++b) {
            const Rational cb = Rational(binomial(c, b)) * rpow(eps, c - b);
            radial.emplace_back(with_z0(a, MultiIndex::zero(psi.n())), with_z0(b, MultiIndex::zero(psi.n())),
                Coefficient(ca * cb));
        }
        if (a > 0)
            pure.emplace_back(with_z0(a, MultiIndex::zero(psi.n())), MultiIndex::zero(n1), Coefficient(-rpow(eps, c) * ca));
    }
    pure.emplace_back(MultiIndex::zero(n1), MultiIndex::zero(n1), Coefficient(-rpow(eps, 2 * c)));
    using oracle::Expr;
    const Expr e_c_psi = oracle::exp(Rational(c) * Expr::base(shift_right(psi, bound)));
    const Expr dq = Expr::base(HermitianSeries::from_terms(n1, bound, radial)) * e_c_psi
        + Expr::base(HermitianSeries::from_terms(n1, bound, pure));
    return oracle::brute_expand(oracle::exp(dq), n1, bound);
}

Rational max_abs_deviation(const HermitianMatrix& a, const HermitianMatrix& b)
{
    Rational worst = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const Rational dev = (a(i, j) - b(i, j)).norm();
            if (dev > worst)
                worst = dev;
        }
    return worst;
}

} // namespace

TEST_CASE("lift and homothety")
{
    const auto cp = lift(fubini_study(1, 4), 1);
    CHECK(cp.c() == 1);
    // |z0|^2 (1 + |z|^2) expanded about z0 = 0.
    const auto phi = cone_potential_series(cp, 0, 4);
    CHECK(phi == HermitianSeries::from_terms(2, 4,
                     {{mi({1, 0}), mi({1, 0}), Coefficient(1)}, {mi({1, 1}), mi({1, 1}), Coefficient(1)}}));

    const auto bare = lift(HermitianSeries(1, 4), 3);
    CHECK(bare.c() == q(1, 3));
    CHECK(bare.exp_c_psi() == HermitianSeries::constant(1, 4, 1));

    const auto half = lift(flat(1, 5), 2);
    CHECK(half.c() == q(1, 2));
    for (unsigned k = 0; k <= 5; ++k)
        CHECK(half.exp_c_psi().coeff(mi({k}), mi({k})) == Coefficient(rpow(q(1, 2), k) / factorial(k)));

    CHECK(homothety(lift(flat(1, 3), q(2, 3)), q(2, 3)).c() == 1);
    CHECK(homothety(lift(flat(1, 3), q(2, 3)), q(2, 3) * 5).c() == 5);
    CHECK(homothety(cp, 1) == cp);
    for (const Rational& a : {q(1, 2), q(3), q(5, 7)})
        for (const Rational& b : {q(2), q(1, 3)})
            CHECK(homothety(homothety(half, a), b) == homothety(half, a * b));

    CHECK_THROWS_AS(lift(flat(1, 3), 0), DomainError);
    CHECK_THROWS_AS(homothety(cp, -1), DomainError);
    CHECK_THROWS_AS(lift(perturbed_quartic(3) - flat(1, 3) - flat(1, 3), 1), DomainError);
}

TEST_CASE("radial blocks")
{
    const auto cp = lift(fubini_study(1, 4), 1);
    const auto blocks = radial_blocks(cp, 3, 4);
    REQUIRE(blocks.blocks.size() == 3);
    CHECK(blocks.blocks[0] == coefficient_matrix(one_plus_norm_power(1, 4, 1), 4));
    const auto second = coefficient_matrix(one_plus_norm_power(1, 4, 2), 4);
    for (std::size_t i = 0; i < second.dim(); ++i)
        CHECK(blocks.blocks[1](i, i) == second(i, i) * q(1, 2));

    const auto bare = radial_blocks(lift(HermitianSeries(2, 3), 1), 4, 3);
    for (unsigned k = 1; k <= 4; ++k) {
        const auto& b = bare.blocks[k - 1];
        CHECK(b(0, 0) == Coefficient(Rational(1) / factorial(k)));
        CHECK(b.is_diagonal());
        for (std::size_t i = 1; i < b.dim(); ++i)
            CHECK(b(i, i).is_zero());
    }

    const auto one = radial_blocks(lift(hyperbolic(1, 4), 2), 1, 4);
    CHECK(one.blocks[0] == coefficient_matrix(lift(hyperbolic(1, 4), 2).exp_c_psi(), 4));

    CHECK_THROWS_AS(radial_blocks(cp, 0, 4), DomainError);
}

TEST_CASE("block k equals the k-th power of e^{c psi} over k!")
{
    for (const auto& psi : {fubini_study(2, 3), hyperbolic(1, 5, q(1, 2)), perturbed_quartic(4)}) {
        for (const Rational& c : {q(1, 2), q(1), q(2)}) {
            const ConePotential cp(c, psi);
            const unsigned d = psi.bound();
            const auto blocks = radial_blocks(cp, 3, d);
            for (unsigned k = 1; k <= 3; ++k) {
                auto expected = coefficient_matrix(power(cp.exp_c_psi(), k), d);
                for (std::size_t i = 0; i < expected.dim(); ++i)
                    for (std::size_t j = 0; j < expected.dim(); ++j)
                        expected(i, j) *= Rational(1) / factorial(k);
                CHECK(blocks.blocks[k - 1] == expected);
            }
        }
    }
}

TEST_CASE("block entries agree with the naive expansion")
{
    using oracle::Expr;
    const auto psi = hyperbolic(1, 4);
    const ConePotential cp(2, psi);
    const auto blocks = radial_blocks(cp, 2, 4);
    const auto naive = oracle::brute_expand(oracle::exp(Rational(4) * Expr::base(psi)), 1, 4);
    auto expected = coefficient_matrix(naive, 4);
    for (std::size_t i = 0; i < expected.dim(); ++i)
        for (std::size_t j = 0; j < expected.dim(); ++j)
            expected(i, j) *= q(1, 2);
    CHECK(blocks.blocks[1] == expected);
}

TEST_CASE("cone inducibility")
{
    const auto fs = cone_inducibility(lift(fubini_study(2, 4), 1), 3, 4);
    CHECK_FALSE(is_not_induced(fs));

    const auto pq = cone_inducibility(lift(perturbed_quartic(3), 1), 1, 3);
    REQUIRE(is_not_induced(pq));
    CHECK(std::get<NotInduced>(pq).radial_weight == 1u);
    CHECK(std::get<NotInduced>(pq).witness.value == q(-1, 12));

    const auto half = lift(fubini_study(1, 4, q(1, 2)), 1);
    CHECK(is_not_induced(cone_inducibility(half, 2, 4)));
    CHECK_FALSE(is_not_induced(cone_inducibility(homothety(half, 2), 2, 4)));
}

TEST_CASE("cone verdict matches the verdict of c psi")
{
    for (const auto& psi : {fubini_study(1, 5), fubini_study(1, 5, q(1, 2)), hyperbolic(1, 5), perturbed_quartic(5), flat(2, 3)}) {
        for (const Rational& c : {q(1, 2), q(1), q(2), q(3)}) {
            const ConePotential cp(c, psi);
            for (unsigned d = 2; d <= psi.bound(); ++d)
                CHECK(is_not_induced(cone_inducibility(cp, 3, d)) == is_not_induced(inducibility(psi.scaled(c), d)));
        }
    }
}

TEST_CASE("epsilon submatrix")
{
    // psi = 0: braces are 1 and the exponential prefactor is 1.
    const auto bare = epsilon_submatrix(lift(HermitianSeries(1, 3), 1), q(1, 10), 3);
    CHECK(bare.v(0, 0) == Coefficient(1));
    CHECK(bare.v.is_diagonal());
    for (std::size_t i = 1; i < bare.v.dim(); ++i)
        CHECK(bare.v(i, i).is_zero());
    CHECK(bare.epsilon_power == q(1, 100));

    // Fractional c needs a perfect power epsilon.
    const ConePotential half(q(1, 2), flat(1, 3));
    CHECK_THROWS_AS(epsilon_submatrix(half, q(1, 10), 3), DomainError);
    const auto ok = epsilon_submatrix(half, q(1, 100), 3);
    CHECK(ok.epsilon_power == q(1, 100));
    CHECK_THROWS_AS(epsilon_submatrix(half, 0, 3), DomainError);
}

TEST_CASE("epsilon submatrix agrees with the naive expansion of e^{D_q}")
{
    struct Case {
        unsigned c;
        HermitianSeries psi;
        Rational eps;
    };
    const unsigned d = 3;
    for (const auto& cs : {Case{1, flat(1, d + 1), q(1, 10)}, Case{2, flat(1, d + 1), q(1, 3)},
             Case{1, fubini_study(1, d + 1), q(1, 2)}}) {
        const ConePotential cp(cs.c, cs.psi);
        const auto sub = epsilon_submatrix(cp, cs.eps, d);
        const auto naive = naive_exp_dq(cs.c, cs.eps, cs.psi, d + 1);
        const auto ord = GradedOrder::make(1, d);
        for (std::size_t j = 0; j < ord->size(); ++j)
            for (std::size_t k = 0; k < ord->size(); ++k)
                CHECK(sub.u(j, k) == naive.coeff(with_z0(1, ord->monomial(j)), with_z0(1, ord->monomial(k))));
        // The series route through the full cone diastasis agrees too.
        const auto via_series = exp(cone_diastasis_series(cp, cs.eps, d + 1));
        CHECK(is_diastasis_normalized(cone_diastasis_series(cp, cs.eps, d + 1)));
        for (std::size_t j = 0; j < ord->size(); ++j)
            CHECK(sub.u(j, j) == via_series.coeff(with_z0(1, ord->monomial(j)), with_z0(1, ord->monomial(j))));
    }
}

TEST_CASE("epsilon limit")
{
    for (const auto& psi : {fubini_study(1, 4), hyperbolic(2, 3), perturbed_quartic(4)}) {
        const ConePotential cp(1, psi);
        const unsigned d = psi.bound();
        const auto limit = epsilon_limit_matrix(cp, d);
        auto calabi = calabi_matrix(psi, d).entries;
        calabi(0, 0) = Coefficient(1);
        CHECK(limit == calabi);

        Rational previous = -1;
        for (const Rational& eps : {q(1, 10), q(1, 100), q(1, 1000)}) {
            const Rational dev = max_abs_deviation(epsilon_submatrix(cp, eps, d).v, limit);
            CHECK(sgn(dev) > 0);
            if (sgn(previous) >= 0)
                CHECK(dev < previous);
            previous = dev;
        }
    }
}

TEST_CASE("positive rescaling of the generator keeps the verdict")
{
    for (const auto& psi : {fubini_study(1, 4), perturbed_quartic(4)}) {
        const auto sub = epsilon_submatrix(ConePotential(1, psi), q(1, 10), 4);
        for (const Rational& s : {q(2), q(1, 3)}) {
            auto scaled = sub.v;
            for (std::size_t i = 0; i < scaled.dim(); ++i)
                for (std::size_t j = 0; j < scaled.dim(); ++j)
                    scaled(i, j) *= s;
            const auto a = psd_check_exact(sub.v), b = psd_check_exact(scaled);
            REQUIRE(is_psd(a) == is_psd(b));
            if (is_psd(a))
                CHECK(std::get<PsdCertificate>(a).rank == std::get<PsdCertificate>(b).rank);
        }
    }
}

TEST_CASE("radial derivative identity")
{
    using P = std::vector<std::complex<double>>;
    const auto fs = verify_radial_derivative_identity(ConePotential(1, fubini_study(1, 16)), 0.5, {P{0.25}}, 1e-6);
    CHECK(fs.passed);
    CHECK(fs.samples[0].relative_error < 1e-6);

    const auto bare = verify_radial_derivative_identity(ConePotential(q(3, 2), HermitianSeries(1, 2)), 0.25,
        {P{0.1}, P{0.2}}, 1e-6);
    CHECK(bare.passed);
    // Braces collapse to 1: c^2 eps^{2c-2}.
    CHECK(bare.samples[0].closed_form.real() == doctest::Approx(2.25 * std::pow(0.25, 1.0)));

    const auto flat2 = verify_radial_derivative_identity(ConePotential(2, flat(1, 16)), 1.0 / 3, {P{0.2}}, 1e-6);
    CHECK(flat2.passed);

    // A tolerance below the stencil accuracy is reported as a breach.
    const auto wrong = verify_radial_derivative_identity(ConePotential(2, flat(1, 16)), 1.0 / 3, {P{0.2}}, 1e-12);
    CHECK_FALSE(wrong.passed);
}

TEST_CASE("flatness witness")
{
    for (std::size_t n : {1u, 3u}) {
        const auto report = flatness_witness(lift(fubini_study(n, 4), 1), 4);
        CHECK(report.flat);
        REQUIRE(report.substituted.has_value());
        Terms target;
        for (std::size_t j = 0; j <= n; ++j)
            target.emplace_back(MultiIndex::unit(n + 1, j), MultiIndex::unit(n + 1, j), Coefficient(1));
        CHECK(*report.substituted == HermitianSeries::from_terms(n + 1, report.substituted->bound(), target));
    }

    const auto no = flatness_witness(lift(flat(1, 4), 1), 4);
    CHECK_FALSE(no.flat);

    const auto frac = flatness_witness(lift(fubini_study(1, 4), 2), 4);
    CHECK_FALSE(frac.flat);
}
