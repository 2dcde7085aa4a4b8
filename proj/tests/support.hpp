#pragma once

// Closed-form builders and small helpers shared by the test binaries. Nothing
// here calls the kernel's exp/log, so expected values stay independent.

#include <random>
#include <tuple>
#include <vector>

#include "diastasis/rational.hpp"
#include "diastasis/series.hpp"

namespace testing_support {

using namespace diastasis;

using Terms = std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>>;

inline MultiIndex mi(std::initializer_list<unsigned> e)
{
    return MultiIndex(std::vector<unsigned>(e));
}

inline Rational q(long p, long r = 1)
{
    Rational x(p, r);
    x.canonicalize();
    return x;
}

// All multi-indices of total degree k in n variables.
inline std::vector<MultiIndex> degree_layer(std::size_t n, unsigned k)
{
    std::vector<MultiIndex> out;
    std::vector<unsigned> e(n, 0);
    auto rec = [&](auto&& self, std::size_t var, unsigned left) -> void {
        if (var + 1 == n) {
            e[var] = left;
            out.emplace_back(e);
            return;
        }
        for (unsigned j = 0; j <= left; ++j) {
            e[var] = j;
            self(self, var + 1, left - j);
        }
    };
    rec(rec, 0, k);
    return out;
}

// sum_{|m| = k <= d} w(k) * k!/m! |z^m|^2, i.e. sum_k w(k) ||z||^{2k}.
template <typename Weight>
HermitianSeries radial_function(std::size_t n, unsigned d, Weight w)
{
    Terms terms;
    for (unsigned k = 0; k <= d; ++k) {
        const Rational wk = w(k);
        if (sgn(wk) == 0)
            continue;
        for (const auto& m : degree_layer(n, k))
            terms.emplace_back(m, m, Coefficient(wk * factorial(k) / m.factorial()));
    }
    return HermitianSeries::from_terms(n, d, terms);
}

inline HermitianSeries flat(std::size_t n, unsigned d)
{
    return radial_function(n, d, [](unsigned k) { return k == 1 ? q(1) : q(0); });
}

// q * log(1 + ||z||^2): weight q (-1)^{k+1} / k.
inline HermitianSeries fubini_study(std::size_t n, unsigned d, Rational scale = 1)
{
    return radial_function(n, d, [&](unsigned k) {
        if (k == 0)
            return q(0);
        return Rational(scale * Rational(k % 2 == 1 ? 1 : -1, k));
    });
}

// -q * log(1 - ||z||^2): weight q / k.
inline HermitianSeries hyperbolic(std::size_t n, unsigned d, Rational scale = 1)
{
    return radial_function(n, d, [&](unsigned k) { return k == 0 ? q(0) : Rational(scale / k); });
}

// |z|^2 - |z|^4 / 4 in one variable.
inline HermitianSeries perturbed_quartic(unsigned d)
{
    return HermitianSeries::from_terms(1, d, {{mi({1}), mi({1}), Coefficient(1)}, {mi({2}), mi({2}), Coefficient(q(-1, 4))}});
}

// (1 + ||z||^2)^k expanded by the multinomial theorem.
inline HermitianSeries one_plus_norm_power(std::size_t n, unsigned d, unsigned k)
{
    return radial_function(n, d, [&](unsigned j) {
        if (j > k)
            return q(0);
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), k, j);
        return Rational(b);
    });
}

// Random Hermitian series with small rational coefficients.
inline HermitianSeries random_hermitian(std::mt19937& rng, std::size_t n, unsigned d, unsigned nterms,
    bool zero_constant = false)
{
    const auto ord = GradedOrder::make(n, d);
    std::uniform_int_distribution<std::size_t> pos(0, ord->size() - 1);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    Series::TermMap terms;
    for (unsigned i = 0; i < nterms; ++i) {
        std::size_t a = pos(rng), b = pos(rng);
        if (zero_constant && a == 0 && b == 0)
            continue;
        Rational re(num(rng), den(rng)), im(a == b ? 0 : num(rng), den(rng));
        re.canonicalize();
        im.canonicalize();
        Coefficient c(re, im);
        if (c.is_zero())
            continue;
        terms[{std::uint32_t(a), std::uint32_t(b)}] = c;
        terms[{std::uint32_t(b), std::uint32_t(a)}] = c.conj();
    }
    return HermitianSeries(Series(n, d, d, std::move(terms)));
}

} // namespace testing_support
