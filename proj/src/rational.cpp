#include "diastasis/rational.hpp"

#include <cctype>
#include <vector>

#include "diastasis/errors.hpp"

namespace diastasis {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    if (!body.empty() && body.front() == '-')
        body.remove_prefix(1);
    const auto slash = body.find('/');
    const auto num = body.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    Integer d(std::string(den), 10);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(Integer(std::string(num), 10), d);
    r.canonicalize();
    if (text.front() == '-')
        r = -r;
    return r;
}

std::string to_string(const Rational& r)
{
    return r.get_str(10);
}

Rational factorial(unsigned k)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return Rational(f);
}

bool exact_root(const Rational& value, unsigned k, Rational& root)
{
    if (k == 0 || sgn(value) < 0)
        return false;
    Integer num_root, den_root;
    const bool num_exact = mpz_root(num_root.get_mpz_t(), value.get_num_mpz_t(), k) != 0;
    const bool den_exact = mpz_root(den_root.get_mpz_t(), value.get_den_mpz_t(), k) != 0;
    if (!num_exact || !den_exact)
        return false;
    root = Rational(num_root, den_root);
    root.canonicalize();
    return true;
}

void GaussRational::add_product(const GaussRational& a, const GaussRational& b)
{
    const bool a_real = a.is_real();
    const bool b_real = b.is_real();
    if (a_real && b_real) {
        re += a.re * b.re;
        return;
    }
    if (a_real) {
        re += a.re * b.re;
        im += a.re * b.im;
        return;
    }
    if (b_real) {
        re += a.re * b.re;
        im += a.im * b.re;
        return;
    }
    re += a.re * b.re - a.im * b.im;
    im += a.re * b.im + a.im * b.re;
}

GaussRational operator+(GaussRational a, const GaussRational& b)
{
    a += b;
    return a;
}

GaussRational operator-(GaussRational a, const GaussRational& b)
{
    a -= b;
    return a;
}

GaussRational operator-(const GaussRational& a)
{
    return {-a.re, -a.im};
}

GaussRational operator*(const GaussRational& a, const GaussRational& b)
{
    GaussRational out;
    out.add_product(a, b);
    return out;
}

GaussRational operator*(GaussRational a, const Rational& s)
{
    a *= s;
    return a;
}

GaussRational operator*(const Rational& s, GaussRational a)
{
    a *= s;
    return a;
}

GaussRational operator/(const GaussRational& a, const GaussRational& b)
{
    const Rational n = b.norm();
    if (sgn(n) == 0)
        throw DomainError("division by zero");
    return (a * b.conj()) / n;
}

GaussRational operator/(GaussRational a, const Rational& s)
{
    if (sgn(s) == 0)
        throw DomainError("division by zero");
    a.re /= s;
    if (sgn(a.im) != 0)
        a.im /= s;
    return a;
}

std::string to_string(const GaussRational& z)
{
    if (z.is_real())
        return to_string(z.re);
    if (sgn(z.re) == 0)
        return to_string(z.im) + "i";
    std::string out = to_string(z.re);
    if (sgn(z.im) > 0)
        out += "+";
    return out + to_string(z.im) + "i";
}

} // namespace diastasis
