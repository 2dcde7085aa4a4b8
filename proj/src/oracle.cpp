#include "diastasis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "diastasis/errors.hpp"

namespace diastasis::oracle {

SamplePlan SamplePlan::make(std::vector<Point> points, double radius, double tolerance)
{
    return SamplePlan{std::move(points), radius, 1e-4 * radius, tolerance};
}

std::complex<double> fd_mixed_second(const ScalarField& f, std::size_t alpha, std::size_t beta,
    std::span<const std::complex<double>> point, double h)
{
    if (alpha >= point.size() || beta >= point.size())
        throw DimensionError("fd_mixed_second: variable out of range");
    const std::complex<double> I(0.0, 1.0);
    Point p(point.begin(), point.end());
    auto at = [&](std::size_t i, std::complex<double> di, std::size_t j, std::complex<double> dj) {
        Point q = p;
        q[i] += di;
        q[j] += dj;
        return f(q);
    };
    const auto f0 = f(p);
    // Pure second derivative along direction dir of variable v.
    auto pure = [&](std::size_t v, std::complex<double> dir) {
        return (at(v, dir * h, v, 0.0) - 2.0 * f0 + at(v, -dir * h, v, 0.0)) / (h * h);
    };
    // Cross derivative along (dir_i of i) and (dir_j of j), i != j.
    auto cross = [&](std::size_t i, std::complex<double> di, std::size_t j, std::complex<double> dj) {
        return (at(i, di * h, j, dj * h) - at(i, di * h, j, -dj * h) - at(i, -di * h, j, dj * h)
                   + at(i, -di * h, j, -dj * h))
            / (4.0 * h * h);
    };
    if (alpha == beta)
        return 0.25 * (pure(alpha, 1.0) + pure(alpha, I));
    const auto xx = cross(alpha, 1.0, beta, 1.0);
    const auto yy = cross(alpha, I, beta, I);
    const auto xy = cross(alpha, 1.0, beta, I);
    const auto yx = cross(alpha, I, beta, 1.0);
    return 0.25 * (xx + yy + I * (xy - yx));
}

// ------------------------------------------------------------ expressions

struct Expr::Node {
    struct Base {
        HermitianSeries series;
    };
    struct Constant {
        Rational value;
    };
    struct Sum {
        Expr a, b;
    };
    struct Product {
        Expr a, b;
    };
    struct Scale {
        Rational factor;
        Expr a;
    };
    struct Exp {
        Expr a;
    };
    struct Log {
        Expr a;
    };
    struct Pow {
        Expr a;
        Rational r;
    };
    std::variant<Base, Constant, Sum, Product, Scale, Exp, Log, Pow> kind;
};

Expr Expr::base(HermitianSeries s)
{
    return Expr(std::make_shared<const Node>(Node{Node::Base{std::move(s)}}));
}

Expr Expr::constant(Rational value)
{
    return Expr(std::make_shared<const Node>(Node{Node::Constant{std::move(value)}}));
}

Expr operator+(const Expr& a, const Expr& b)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Sum{a, b}}));
}

Expr operator*(const Expr& a, const Expr& b)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Product{a, b}}));
}

Expr operator*(const Rational& s, const Expr& a)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Scale{s, a}}));
}

Expr exp(const Expr& a)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Exp{a}}));
}

Expr log(const Expr& a)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Log{a}}));
}

Expr pow(const Expr& a, const Rational& r)
{
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Pow{a, r}}));
}

namespace {

using Exponents = std::vector<unsigned>;
using NaiveKey = std::pair<Exponents, Exponents>;

// Plain map of exponent pairs; no positions, no tables.
struct Naive {
    std::size_t n;
    unsigned d;
    std::map<NaiveKey, GaussRational> terms;

    static Naive one(std::size_t n, unsigned d)
    {
        Naive out{n, d, {}};
        out.terms[{Exponents(n, 0), Exponents(n, 0)}] = GaussRational(1);
        return out;
    }

    GaussRational constant() const
    {
        auto it = terms.find({Exponents(n, 0), Exponents(n, 0)});
        return it == terms.end() ? GaussRational{} : it->second;
    }
};

unsigned total(const Exponents& e)
{
    return std::accumulate(e.begin(), e.end(), 0u);
}

Naive naive_sum(const Naive& a, const Naive& b)
{
    Naive out = a;
    for (const auto& [k, c] : b.terms)
        out.terms[k] += c;
    return out;
}

Naive naive_scale(const Naive& a, const GaussRational& s)
{
    Naive out{a.n, a.d, {}};
    for (const auto& [k, c] : a.terms)
        out.terms[k] = c * s;
    return out;
}

Naive naive_mul(const Naive& a, const Naive& b)
{
    Naive out{a.n, a.d, {}};
    for (const auto& [ka, ca] : a.terms) {
        if (ca.is_zero())
            continue;
        for (const auto& [kb, cb] : b.terms) {
            if (cb.is_zero())
                continue;
            Exponents h(a.n), an(a.n);
            for (std::size_t i = 0; i < a.n; ++i) {
                h[i] = ka.first[i] + kb.first[i];
                an[i] = ka.second[i] + kb.second[i];
            }
            if (total(h) > a.d || total(an) > a.d)
                continue;
            out.terms[{h, an}] += ca * cb;
        }
    }
    return out;
}

// sum_{k=0}^{2d} coeff(k) x^k; x has zero constant so higher powers vanish.
template <typename CoeffFn>
Naive naive_power_series(const Naive& x, CoeffFn coeff)
{
    Naive result{x.n, x.d, {}};
    Naive power = Naive::one(x.n, x.d);
    for (unsigned k = 0; k <= 2 * x.d; ++k) {
        if (k > 0)
            power = naive_mul(power, x);
        result = naive_sum(result, naive_scale(power, GaussRational(coeff(k))));
    }
    return result;
}

Naive naive_minus_one(const Naive& a)
{
    Naive out = a;
    out.terms[{Exponents(a.n, 0), Exponents(a.n, 0)}] -= GaussRational(1);
    return out;
}

Naive expand(const Expr& e, std::size_t n, unsigned d)
{
    return std::visit(
        [&](const auto& k) -> Naive {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Expr::Node::Base>) {
                if (k.series.n() != n)
                    throw DimensionError("brute_expand: base series has a different variable count");
                if (k.series.bound() < d)
                    throw DomainError("brute_expand: base series truncated below requested order");
                Naive out{n, d, {}};
                const auto& ord = k.series.order();
                for (const auto& [key, c] : k.series.terms()) {
                    const auto& h = ord.monomial(key.first).exponents();
                    const auto& a = ord.monomial(key.second).exponents();
                    if (total(h) <= d && total(a) <= d)
                        out.terms[{h, a}] = c;
                }
                return out;
            } else if constexpr (std::is_same_v<K, Expr::Node::Constant>) {
                return naive_scale(Naive::one(n, d), GaussRational(k.value));
            } else if constexpr (std::is_same_v<K, Expr::Node::Sum>) {
                return naive_sum(expand(k.a, n, d), expand(k.b, n, d));
            } else if constexpr (std::is_same_v<K, Expr::Node::Product>) {
                return naive_mul(expand(k.a, n, d), expand(k.b, n, d));
            } else if constexpr (std::is_same_v<K, Expr::Node::Scale>) {
                return naive_scale(expand(k.a, n, d), GaussRational(k.factor));
            } else if constexpr (std::is_same_v<K, Expr::Node::Exp>) {
                const Naive x = expand(k.a, n, d);
                if (!x.constant().is_zero())
                    throw DomainError("brute_expand: exp argument has nonzero constant term");
                return naive_power_series(x, [](unsigned j) -> Rational { return Rational(1) / factorial(j); });
            } else if constexpr (std::is_same_v<K, Expr::Node::Log>) {
                const Naive a = expand(k.a, n, d);
                if (!(a.constant() == GaussRational(1)))
                    throw DomainError("brute_expand: log argument must have constant term 1");
                return naive_power_series(naive_minus_one(a), [](unsigned j) {
                    if (j == 0)
                        return Rational(0);
                    return Rational(j % 2 == 1 ? 1 : -1, j);
                });
            } else {
                const Naive a = expand(k.a, n, d);
                if (!(a.constant() == GaussRational(1)))
                    throw DomainError("brute_expand: power base must have constant term 1");
                const Rational r = k.r;
                return naive_power_series(naive_minus_one(a), [r](unsigned j) {
                    Rational binom = 1;
                    for (unsigned i = 0; i < j; ++i)
                        binom *= (r - Rational(i)) / Rational(i + 1);
                    return binom;
                });
            }
        },
        e.node().kind);
}

} // namespace

HermitianSeries brute_expand(const Expr& expr, std::size_t n, unsigned d)
{
    const Naive out = expand(expr, n, d);
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> terms;
    for (const auto& [k, c] : out.terms)
        if (!c.is_zero())
            terms.emplace_back(MultiIndex(k.first), MultiIndex(k.second), c);
    auto result = HermitianSeries::from_terms(n, d, terms);
    // from_terms fills missing conjugates; a non-hermitian expansion would show up as a mismatch here.
    if (result.terms().size() != terms.size())
        throw InvariantError("brute_expand: expansion is not hermitian");
    return result;
}

CrossCheckReport cross_check(const HermitianSeries& symbolic, const ScalarField& f, const SamplePlan& plan)
{
    CrossCheckReport report;
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
        const auto& p = plan.points[i];
        const auto expected = f(p);
        const auto got = evaluate(symbolic, std::span<const std::complex<double>>(p));
        const double dev = std::abs(got - expected) / std::max(std::abs(expected), 1e-12);
        if (i == 0 || dev > report.max_relative_deviation) {
            report.max_relative_deviation = dev;
            report.worst_point = i;
        }
    }
    report.passed = report.max_relative_deviation <= plan.tolerance;
    return report;
}

} // namespace diastasis::oracle
