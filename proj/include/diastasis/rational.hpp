#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace diastasis {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p" or "p/q" (optional leading minus, no whitespace, q > 0).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text; integers print without a denominator.
std::string to_string(const Rational& r);

Rational factorial(unsigned k);

/// Exact k-th root of a nonnegative rational when it exists.
bool exact_root(const Rational& value, unsigned k, Rational& root);

/// Gaussian rational re + i*im. All series coefficients use this type.
struct GaussRational {
    Rational re;
    Rational im;

    GaussRational() = default;
    GaussRational(Rational real) : re(std::move(real)) {}
    GaussRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
    GaussRational(long real) : re(real) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussRational conj() const { return {re, -im}; }
    /// |z|^2
    Rational norm() const { return re * re + im * im; }

    GaussRational& operator+=(const GaussRational& o)
    {
        re += o.re;
        if (sgn(o.im) != 0)
            im += o.im;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o)
    {
        re -= o.re;
        if (sgn(o.im) != 0)
            im -= o.im;
        return *this;
    }
    GaussRational& operator*=(const Rational& s)
    {
        re *= s;
        if (sgn(im) != 0)
            im *= s;
        return *this;
    }

    /// this += a*b, without temporaries for the common real case.
    void add_product(const GaussRational& a, const GaussRational& b);

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    friend bool operator==(const GaussRational& a, const GaussRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

using Coefficient = GaussRational;

GaussRational operator+(GaussRational a, const GaussRational& b);
GaussRational operator-(GaussRational a, const GaussRational& b);
GaussRational operator-(const GaussRational& a);
GaussRational operator*(const GaussRational& a, const GaussRational& b);
GaussRational operator*(GaussRational a, const Rational& s);
GaussRational operator*(const Rational& s, GaussRational a);
GaussRational operator/(const GaussRational& a, const GaussRational& b);
GaussRational operator/(GaussRational a, const Rational& s);

/// "a", "bi", "a+bi" or "a-bi" with rational parts in p/q form.
std::string to_string(const GaussRational& z);

} // namespace diastasis
