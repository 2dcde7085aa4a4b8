#pragma once

// Exact truncated power series in z_1..z_n and their conjugates.
//
// A series stores coefficients c_{jk} of z^{m_j} zbar^{m_k}, keyed by the
// graded positions (j, k) of the two multi-indices. Holomorphic and
// antiholomorphic total degrees are truncated independently.

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "diastasis/rational.hpp"

namespace diastasis {

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {}
    MultiIndex(std::initializer_list<unsigned> exponents) : exps_(exponents) {}

    static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<unsigned>(n, 0)); }
    static MultiIndex unit(std::size_t n, std::size_t var);

    std::size_t size() const { return exps_.size(); }
    unsigned degree() const;
    unsigned operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<unsigned>& exponents() const { return exps_; }

    /// m! = m_1! ... m_n!
    Rational factorial() const;

    MultiIndex operator+(const MultiIndex& other) const;

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

private:
    std::vector<unsigned> exps_;
};

std::string to_string(const MultiIndex& m);

/// Bijection between positions and multi-indices of total degree <= max_degree.
///
/// Position 0 is the zero index; degrees are nondecreasing; within a degree the
/// order is ascending lexicographic with the first variable most significant.
/// Positions of low-degree monomials do not depend on max_degree.
class GradedOrder {
public:
    static std::shared_ptr<const GradedOrder> make(std::size_t n, unsigned max_degree);

    std::size_t n() const { return n_; }
    unsigned max_degree() const { return max_degree_; }
    std::size_t size() const { return monomials_.size(); }

    const MultiIndex& monomial(std::size_t pos) const { return monomials_.at(pos); }
    unsigned degree(std::size_t pos) const { return degrees_[pos]; }
    std::size_t position(const MultiIndex& m) const;

    /// Number of monomials with total degree <= k (k clamped to max_degree).
    std::size_t count_up_to(unsigned k) const;

    /// Position of m_a + m_b, or -1 when it exceeds max_degree.
    std::int32_t sum(std::size_t a, std::size_t b) const { return sum_[a * size() + b]; }
    /// Position of m_a - m_b, or -1 when some component would be negative.
    std::int32_t difference(std::size_t a, std::size_t b) const { return diff_[a * size() + b]; }

    GradedOrder(std::size_t n, unsigned max_degree);

private:
    std::size_t n_;
    unsigned max_degree_;
    std::vector<MultiIndex> monomials_;
    std::vector<unsigned> degrees_;
    std::vector<std::size_t> count_up_to_;
    std::map<MultiIndex, std::size_t> lookup_;
    std::vector<std::int32_t> sum_;
    std::vector<std::int32_t> diff_;
};

std::size_t index_position(const MultiIndex& m, const GradedOrder& ord);
const MultiIndex& monomial_at(std::size_t pos, const GradedOrder& ord);

/// General bi-graded truncated series; no symmetry assumed.
class Series {
public:
    using Key = std::pair<std::uint32_t, std::uint32_t>;
    using TermMap = std::map<Key, Coefficient>;

    Series(std::size_t n, unsigned holo_bound, unsigned anti_bound);
    /// Zero coefficients are dropped; keys beyond the bounds are rejected.
    Series(std::size_t n, unsigned holo_bound, unsigned anti_bound, TermMap terms);

    std::size_t n() const { return n_; }
    unsigned holo_bound() const { return holo_bound_; }
    unsigned anti_bound() const { return anti_bound_; }
    const TermMap& terms() const { return terms_; }
    const GradedOrder& order() const { return *order_; }
    std::shared_ptr<const GradedOrder> order_ptr() const { return order_; }

    bool is_zero() const { return terms_.empty(); }
    Coefficient coeff(const MultiIndex& m, const MultiIndex& k) const;
    Coefficient coeff(Key key) const;
    Coefficient constant_term() const { return coeff(Key{0, 0}); }

    Series truncated(unsigned holo_bound, unsigned anti_bound) const;
    /// Complex conjugate of the function: c'_{kj} = conj(c_{jk}).
    Series conj() const;
    bool is_hermitian() const;
    /// True when no term sits on either truncation boundary, i.e. the stored
    /// terms are the whole function and not the head of a longer expansion.
    bool is_polynomial() const;

    bool operator==(const Series& other) const;

private:
    std::size_t n_;
    unsigned holo_bound_;
    unsigned anti_bound_;
    std::shared_ptr<const GradedOrder> order_;
    TermMap terms_;
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(const Coefficient& s, const Series& a);

/// Real-valued series: equal bounds and c_{kj} = conj(c_{jk}).
class HermitianSeries {
public:
    HermitianSeries(std::size_t n, unsigned bound);
    /// Throws InvariantError unless s is Hermitian with equal bounds.
    explicit HermitianSeries(Series s);

    static HermitianSeries constant(std::size_t n, unsigned bound, const Rational& value);
    /// Terms z^m zbar^k -> c. The conjugate partner of each off-diagonal term
    /// is added automatically unless it is already present.
    static HermitianSeries from_terms(std::size_t n, unsigned bound,
        const std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>>& terms);

    std::size_t n() const { return s_.n(); }
    unsigned bound() const { return s_.holo_bound(); }
    const Series& series() const { return s_; }
    const Series::TermMap& terms() const { return s_.terms(); }
    const GradedOrder& order() const { return s_.order(); }

    bool is_zero() const { return s_.is_zero(); }
    Coefficient coeff(const MultiIndex& m, const MultiIndex& k) const { return s_.coeff(m, k); }
    Rational constant_term() const { return s_.constant_term().re; }
    bool is_polynomial() const { return s_.is_polynomial(); }

    HermitianSeries truncated(unsigned bound) const;
    HermitianSeries scaled(const Rational& s) const;

    bool operator==(const HermitianSeries& o) const { return s_ == o.s_; }

private:
    Series s_;
};

HermitianSeries operator+(const HermitianSeries& a, const HermitianSeries& b);
HermitianSeries operator-(const HermitianSeries& a, const HermitianSeries& b);
HermitianSeries operator*(const Rational& s, const HermitianSeries& a);

/// Purely holomorphic truncated series.
class HoloSeries {
public:
    using TermMap = std::map<std::uint32_t, Coefficient>;

    HoloSeries(std::size_t n, unsigned bound, TermMap terms = {});
    static HoloSeries from_terms(std::size_t n, unsigned bound,
        const std::vector<std::pair<MultiIndex, Coefficient>>& terms);

    std::size_t n() const { return n_; }
    unsigned bound() const { return bound_; }
    const TermMap& terms() const { return terms_; }
    const GradedOrder& order() const { return *order_; }

private:
    std::size_t n_;
    unsigned bound_;
    std::shared_ptr<const GradedOrder> order_;
    TermMap terms_;
};

HoloSeries operator*(const HoloSeries& a, const HoloSeries& b);

Series mul(const Series& a, const Series& b);
HermitianSeries mul(const HermitianSeries& a, const HermitianSeries& b);
HermitianSeries power(const HermitianSeries& a, unsigned k);

/// exp(a) truncated; a must have zero constant term.
Series exp(const Series& a);
HermitianSeries exp(const HermitianSeries& a);
/// log(a) truncated; a must have constant term 1.
Series log(const Series& a);
HermitianSeries log(const HermitianSeries& a);

/// d/dz_var, or d/dzbar_var when conjugate is set. The bound on the
/// differentiated side drops by one (floored at zero).
Series wirtinger(const Series& a, std::size_t var, bool conjugate);
Series wirtinger(const HermitianSeries& a, std::size_t var, bool conjugate);

/// sum_j w_j f_j(z) conj(f_j(z)); weights default to 1 and must be positive.
HermitianSeries gram_from_factors(std::span<const HoloSeries> factors, std::span<const Rational> weights = {});

/// Holomorphic substitution z_i -> prod_j z_j^{e_ij} with integer e_ij.
struct LaurentRules {
    std::size_t target_n = 0;
    std::vector<std::vector<int>> images; // one exponent row (length target_n) per source variable
};

LaurentRules identity_rules(std::size_t n);

/// Requires a polynomial input and at most one target variable carrying
/// negative exponents; throws DomainError if negative exponents survive.
HermitianSeries laurent_substitute(const HermitianSeries& a, const LaurentRules& rules);

/// f(z + w) for polynomial f.
HermitianSeries translate(const HermitianSeries& a, std::span<const GaussRational> shift);

/// Re-labels variable i as variable offset + i inside target_n variables.
/// A bound above a.bound() is only accepted for polynomial input.
HermitianSeries embed(const HermitianSeries& a, std::size_t target_n, std::size_t offset, unsigned bound);
HermitianSeries embed(const HermitianSeries& a, std::size_t target_n, std::size_t offset);

/// Floating-point value of the truncated sum. Never used in verdicts.
std::complex<double> evaluate(const Series& a, std::span<const std::complex<double>> point);
std::complex<double> evaluate(const HermitianSeries& a, std::span<const std::complex<double>> point);
std::complex<double> evaluate(const HermitianSeries& a, std::span<const GaussRational> point);

std::string to_string(const Series& a);

} // namespace diastasis
