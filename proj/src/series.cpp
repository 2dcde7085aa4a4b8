#include "diastasis/series.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "diastasis/errors.hpp"

namespace diastasis {

namespace {

constexpr std::size_t kMaxOrderSize = 2500;

void compositions(std::size_t n, unsigned degree, std::vector<unsigned>& current, std::size_t var,
    std::vector<MultiIndex>& out)
{
    if (var + 1 == n) {
        current[var] = degree;
        out.emplace_back(current);
        return;
    }
    for (unsigned e = 0; e <= degree; ++e) {
        current[var] = e;
        compositions(n, degree - e, current, var + 1, out);
    }
}

void require_same_n(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw DimensionError(std::string(what) + ": variable counts differ (" + std::to_string(a) + " vs "
            + std::to_string(b) + ")");
}

// Dense accumulator over the (holo, anti) positions allowed by a pair of bounds.
struct DenseGrid {
    std::size_t rows;
    std::size_t cols;
    std::vector<Coefficient> cells;

    DenseGrid(const GradedOrder& ord, unsigned holo_bound, unsigned anti_bound)
        : rows(ord.count_up_to(holo_bound)), cols(ord.count_up_to(anti_bound)), cells(rows * cols)
    {}

    Coefficient& at(std::size_t h, std::size_t a) { return cells[h * cols + a]; }

    Series::TermMap to_terms() const
    {
        Series::TermMap out;
        for (std::size_t h = 0; h < rows; ++h)
            for (std::size_t a = 0; a < cols; ++a) {
                const auto& c = cells[h * cols + a];
                if (!c.is_zero())
                    out.emplace_hint(out.end(), Series::Key{std::uint32_t(h), std::uint32_t(a)}, c);
            }
        return out;
    }
};

std::shared_ptr<const GradedOrder> covering_order(std::size_t n, std::initializer_list<unsigned> bounds)
{
    return GradedOrder::make(n, std::max(bounds));
}

} // namespace

// ---------------------------------------------------------------- MultiIndex

MultiIndex MultiIndex::unit(std::size_t n, std::size_t var)
{
    if (var >= n)
        throw DimensionError("unit index: variable " + std::to_string(var) + " out of range");
    std::vector<unsigned> e(n, 0);
    e[var] = 1;
    return MultiIndex(std::move(e));
}

unsigned MultiIndex::degree() const
{
    return std::accumulate(exps_.begin(), exps_.end(), 0u);
}

Rational MultiIndex::factorial() const
{
    Rational out = 1;
    for (unsigned e : exps_)
        out *= diastasis::factorial(e);
    return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    require_same_n(size(), other.size(), "multi-index sum");
    std::vector<unsigned> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += other.exps_[i];
    return MultiIndex(std::move(e));
}

std::string to_string(const MultiIndex& m)
{
    std::string out = "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(m[i]);
    }
    return out + ")";
}

// --------------------------------------------------------------- GradedOrder

GradedOrder::GradedOrder(std::size_t n, unsigned max_degree) : n_(n), max_degree_(max_degree)
{
    if (n == 0)
        throw DimensionError("graded order needs at least one variable");
    std::vector<unsigned> scratch(n, 0);
    for (unsigned deg = 0; deg <= max_degree; ++deg) {
        std::vector<MultiIndex> layer;
        compositions(n, deg, scratch, 0, layer);
        std::sort(layer.begin(), layer.end());
        for (auto& m : layer) {
            degrees_.push_back(deg);
            monomials_.push_back(std::move(m));
        }
        count_up_to_.push_back(monomials_.size());
        if (monomials_.size() > kMaxOrderSize)
            throw DomainError("graded order too large: n=" + std::to_string(n) + ", degree "
                + std::to_string(max_degree));
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        lookup_.emplace(monomials_[i], i);

    const std::size_t size = monomials_.size();
    sum_.assign(size * size, -1);
    diff_.assign(size * size, -1);
    std::vector<unsigned> e(n);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
            if (degrees_[a] + degrees_[b] <= max_degree) {
                for (std::size_t i = 0; i < n; ++i)
                    e[i] = monomials_[a][i] + monomials_[b][i];
                sum_[a * size + b] = std::int32_t(lookup_.at(MultiIndex(e)));
            }
            bool fits = true;
            for (std::size_t i = 0; i < n && fits; ++i) {
                fits = monomials_[a][i] >= monomials_[b][i];
                if (fits)
                    e[i] = monomials_[a][i] - monomials_[b][i];
            }
            if (fits)
                diff_[a * size + b] = std::int32_t(lookup_.at(MultiIndex(e)));
        }
    }
}

std::shared_ptr<const GradedOrder> GradedOrder::make(std::size_t n, unsigned max_degree)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const GradedOrder>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, max_degree}];
    if (!slot)
        slot = std::make_shared<const GradedOrder>(n, max_degree);
    return slot;
}

std::size_t GradedOrder::position(const MultiIndex& m) const
{
    if (m.size() != n_)
        throw DimensionError("multi-index " + to_string(m) + " has length " + std::to_string(m.size())
            + ", expected " + std::to_string(n_));
    auto it = lookup_.find(m);
    if (it == lookup_.end())
        throw DomainError("multi-index " + to_string(m) + " exceeds degree bound " + std::to_string(max_degree_));
    return it->second;
}

std::size_t GradedOrder::count_up_to(unsigned k) const
{
    return count_up_to_[std::min(k, max_degree_)];
}

std::size_t index_position(const MultiIndex& m, const GradedOrder& ord)
{
    return ord.position(m);
}

const MultiIndex& monomial_at(std::size_t pos, const GradedOrder& ord)
{
    if (pos >= ord.size())
        throw DomainError("position " + std::to_string(pos) + " outside graded order");
    return ord.monomial(pos);
}

// -------------------------------------------------------------------- Series

Series::Series(std::size_t n, unsigned holo_bound, unsigned anti_bound)
    : n_(n), holo_bound_(holo_bound), anti_bound_(anti_bound),
      order_(GradedOrder::make(n, std::max(holo_bound, anti_bound)))
{}

Series::Series(std::size_t n, unsigned holo_bound, unsigned anti_bound, TermMap terms)
    : Series(n, holo_bound, anti_bound)
{
    const std::size_t holo_limit = order_->count_up_to(holo_bound);
    const std::size_t anti_limit = order_->count_up_to(anti_bound);
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->first.first >= holo_limit || it->first.second >= anti_limit)
            throw DomainError("series term beyond truncation bounds");
        if (it->second.is_zero())
            it = terms.erase(it);
        else
            ++it;
    }
    terms_ = std::move(terms);
}

Coefficient Series::coeff(Key key) const
{
    auto it = terms_.find(key);
    return it == terms_.end() ? Coefficient{} : it->second;
}

Coefficient Series::coeff(const MultiIndex& m, const MultiIndex& k) const
{
    if (m.degree() > holo_bound_ || k.degree() > anti_bound_)
        throw DomainError("coefficient requested beyond truncation bounds");
    return coeff(Key{std::uint32_t(order_->position(m)), std::uint32_t(order_->position(k))});
}

Series Series::truncated(unsigned holo_bound, unsigned anti_bound) const
{
    if (holo_bound > holo_bound_ || anti_bound > anti_bound_)
        throw DomainError("cannot truncate a series to a higher order than it carries");
    const std::size_t holo_limit = order_->count_up_to(holo_bound);
    const std::size_t anti_limit = order_->count_up_to(anti_bound);
    TermMap out;
    for (const auto& [key, c] : terms_)
        if (key.first < holo_limit && key.second < anti_limit)
            out.emplace_hint(out.end(), key, c);
    return Series(n_, holo_bound, anti_bound, std::move(out));
}

Series Series::conj() const
{
    TermMap out;
    for (const auto& [key, c] : terms_)
        out.emplace(Key{key.second, key.first}, c.conj());
    return Series(n_, anti_bound_, holo_bound_, std::move(out));
}

bool Series::is_hermitian() const
{
    if (holo_bound_ != anti_bound_)
        return false;
    for (const auto& [key, c] : terms_) {
        auto it = terms_.find(Key{key.second, key.first});
        if (it == terms_.end() || !(it->second == c.conj()))
            return false;
    }
    return true;
}

bool Series::is_polynomial() const
{
    for (const auto& [key, c] : terms_)
        if (order_->degree(key.first) >= holo_bound_ || order_->degree(key.second) >= anti_bound_)
            return false;
    return true;
}

bool Series::operator==(const Series& other) const
{
    return n_ == other.n_ && holo_bound_ == other.holo_bound_ && anti_bound_ == other.anti_bound_
        && terms_ == other.terms_;
}

namespace {

Series combine(const Series& a, const Series& b, bool subtract)
{
    require_same_n(a.n(), b.n(), subtract ? "series difference" : "series sum");
    const unsigned h = std::min(a.holo_bound(), b.holo_bound());
    const unsigned an = std::min(a.anti_bound(), b.anti_bound());
    Series::TermMap out = a.truncated(h, an).terms();
    const Series bt = b.truncated(h, an);
    for (const auto& [key, c] : bt.terms()) {
        auto& slot = out[key];
        if (subtract)
            slot -= c;
        else
            slot += c;
    }
    return Series(a.n(), h, an, std::move(out));
}

} // namespace

Series operator+(const Series& a, const Series& b)
{
    return combine(a, b, false);
}

Series operator-(const Series& a, const Series& b)
{
    return combine(a, b, true);
}

Series operator*(const Series& a, const Series& b)
{
    return mul(a, b);
}

Series operator*(const Coefficient& s, const Series& a)
{
    Series::TermMap out;
    for (const auto& [key, c] : a.terms())
        out.emplace_hint(out.end(), key, s * c);
    return Series(a.n(), a.holo_bound(), a.anti_bound(), std::move(out));
}

Series mul(const Series& a, const Series& b)
{
    require_same_n(a.n(), b.n(), "series product");
    const unsigned holo = std::min(a.holo_bound(), b.holo_bound());
    const unsigned anti = std::min(a.anti_bound(), b.anti_bound());
    const auto ord = covering_order(a.n(), {a.holo_bound(), a.anti_bound(), b.holo_bound(), b.anti_bound()});
    DenseGrid acc(*ord, holo, anti);
    for (const auto& [ka, ca] : a.terms()) {
        const unsigned dh = ord->degree(ka.first);
        const unsigned da = ord->degree(ka.second);
        if (dh > holo || da > anti)
            continue;
        const std::size_t holo_limit = ord->count_up_to(holo - dh);
        const std::size_t anti_limit = ord->count_up_to(anti - da);
        for (const auto& [kb, cb] : b.terms()) {
            if (kb.first >= holo_limit)
                break;
            if (kb.second >= anti_limit)
                continue;
            acc.at(std::size_t(ord->sum(ka.first, kb.first)), std::size_t(ord->sum(ka.second, kb.second)))
                .add_product(ca, cb);
        }
    }
    return Series(a.n(), holo, anti, acc.to_terms());
}

namespace {

struct WeightedTerm {
    std::uint32_t holo;
    std::uint32_t anti;
    unsigned holo_degree;
    unsigned anti_degree;
    Coefficient value;
};

} // namespace

// exp and log use the Euler-operator recurrence: with theta multiplying each
// monomial by its total degree, theta(exp a) = exp(a) * theta(a).
Series exp(const Series& a)
{
    if (!a.constant_term().is_zero())
        throw DomainError("exp: argument must have zero constant term");
    const auto& ord = a.order();
    const unsigned holo = a.holo_bound();
    const unsigned anti = a.anti_bound();
    std::vector<WeightedTerm> weighted;
    for (const auto& [key, c] : a.terms()) {
        const unsigned dh = ord.degree(key.first);
        const unsigned da = ord.degree(key.second);
        weighted.push_back({key.first, key.second, dh, da, c * Rational(dh + da)});
    }
    DenseGrid e(ord, holo, anti);
    e.at(0, 0) = Coefficient(1);
    for (std::size_t h = 0; h < e.rows; ++h) {
        const unsigned th = ord.degree(h);
        const std::size_t holo_limit = ord.count_up_to(th);
        for (std::size_t an = 0; an < e.cols; ++an) {
            if (h == 0 && an == 0)
                continue;
            const unsigned ta = ord.degree(an);
            Coefficient acc;
            for (const auto& w : weighted) {
                if (w.holo >= holo_limit)
                    break;
                if (w.anti_degree > ta)
                    continue;
                const auto dh = ord.difference(h, w.holo);
                const auto da = ord.difference(an, w.anti);
                if (dh < 0 || da < 0)
                    continue;
                const auto& prev = e.at(std::size_t(dh), std::size_t(da));
                if (!prev.is_zero())
                    acc.add_product(w.value, prev);
            }
            if (!acc.is_zero())
                e.at(h, an) = acc / Rational(th + ta);
        }
    }
    return Series(a.n(), holo, anti, e.to_terms());
}

Series log(const Series& b)
{
    if (!(b.constant_term() == Coefficient(1)))
        throw DomainError("log: argument must have constant term 1");
    const auto& ord = b.order();
    const unsigned holo = b.holo_bound();
    const unsigned anti = b.anti_bound();
    std::vector<WeightedTerm> terms;
    for (const auto& [key, c] : b.terms())
        if (key != Series::Key{0, 0})
            terms.push_back({key.first, key.second, ord.degree(key.first), ord.degree(key.second), c});
    DenseGrid weighted_log(ord, holo, anti); // tot(x) * L[x]
    Series::TermMap out;
    for (std::size_t h = 0; h < weighted_log.rows; ++h) {
        const unsigned th = ord.degree(h);
        const std::size_t holo_limit = ord.count_up_to(th);
        for (std::size_t an = 0; an < weighted_log.cols; ++an) {
            if (h == 0 && an == 0)
                continue;
            const unsigned ta = ord.degree(an);
            const Rational total(th + ta);
            Coefficient acc = b.coeff(Series::Key{std::uint32_t(h), std::uint32_t(an)}) * total;
            for (const auto& u : terms) {
                if (u.holo >= holo_limit)
                    break;
                if (u.anti_degree > ta || (u.holo == h && u.anti == an))
                    continue;
                const auto dh = ord.difference(h, u.holo);
                const auto da = ord.difference(an, u.anti);
                if (dh < 0 || da < 0)
                    continue;
                const auto& prev = weighted_log.at(std::size_t(dh), std::size_t(da));
                if (!prev.is_zero())
                    acc -= prev * u.value;
            }
            if (!acc.is_zero()) {
                weighted_log.at(h, an) = acc;
                out.emplace_hint(out.end(), Series::Key{std::uint32_t(h), std::uint32_t(an)}, acc / total);
            }
        }
    }
    return Series(b.n(), holo, anti, std::move(out));
}

Series wirtinger(const Series& a, std::size_t var, bool conjugate)
{
    if (var >= a.n())
        throw DimensionError("wirtinger: variable " + std::to_string(var) + " out of range for n="
            + std::to_string(a.n()));
    const auto& ord = a.order();
    const unsigned holo = conjugate ? a.holo_bound() : (a.holo_bound() == 0 ? 0 : a.holo_bound() - 1);
    const unsigned anti = conjugate ? (a.anti_bound() == 0 ? 0 : a.anti_bound() - 1) : a.anti_bound();
    Series::TermMap out;
    if ((conjugate ? a.anti_bound() : a.holo_bound()) > 0) {
        const std::size_t unit = ord.position(MultiIndex::unit(a.n(), var));
        for (const auto& [key, c] : a.terms()) {
            const std::size_t side = conjugate ? key.second : key.first;
            const unsigned exponent = ord.monomial(side)[var];
            if (exponent == 0)
                continue;
            const auto lowered = std::uint32_t(ord.difference(side, unit));
            const Series::Key target = conjugate ? Series::Key{key.first, lowered} : Series::Key{lowered, key.second};
            out.emplace(target, c * Rational(exponent));
        }
    }
    return Series(a.n(), holo, anti, std::move(out));
}

Series wirtinger(const HermitianSeries& a, std::size_t var, bool conjugate)
{
    return wirtinger(a.series(), var, conjugate);
}

// ----------------------------------------------------------- HermitianSeries

HermitianSeries::HermitianSeries(std::size_t n, unsigned bound) : s_(n, bound, bound) {}

HermitianSeries::HermitianSeries(Series s) : s_(std::move(s))
{
    if (s_.holo_bound() != s_.anti_bound())
        throw InvariantError("hermitian series needs equal holomorphic and antiholomorphic bounds");
    if (!s_.is_hermitian())
        throw InvariantError("series is not hermitian (c_kj != conj(c_jk))");
}

HermitianSeries HermitianSeries::constant(std::size_t n, unsigned bound, const Rational& value)
{
    Series::TermMap t;
    t.emplace(Series::Key{0, 0}, Coefficient(value));
    return HermitianSeries(Series(n, bound, bound, std::move(t)));
}

HermitianSeries HermitianSeries::from_terms(std::size_t n, unsigned bound,
    const std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>>& terms)
{
    const auto ord = GradedOrder::make(n, bound);
    Series::TermMap t;
    for (const auto& [m, k, c] : terms) {
        if (m.degree() > bound || k.degree() > bound)
            throw DomainError("term " + to_string(m) + "x" + to_string(k) + " exceeds bound " + std::to_string(bound));
        const Series::Key key{std::uint32_t(ord->position(m)), std::uint32_t(ord->position(k))};
        auto [it, inserted] = t.emplace(key, c);
        if (!inserted && !(it->second == c))
            throw DomainError("duplicate term " + to_string(m) + "x" + to_string(k) + " with different values");
    }
    Series::TermMap partners;
    for (const auto& [key, c] : t) {
        const Series::Key mirror{key.second, key.first};
        auto it = t.find(mirror);
        if (it == t.end())
            partners.emplace(mirror, c.conj());
        else if (!(it->second == c.conj()))
            throw DomainError("terms " + to_string(ord->monomial(key.first)) + "x" + to_string(ord->monomial(key.second))
                + " and its mirror are not conjugate");
    }
    t.merge(partners);
    return HermitianSeries(Series(n, bound, bound, std::move(t)));
}

HermitianSeries HermitianSeries::truncated(unsigned bound) const
{
    return HermitianSeries(s_.truncated(bound, bound));
}

HermitianSeries HermitianSeries::scaled(const Rational& s) const
{
    return HermitianSeries(Coefficient(s) * s_);
}

HermitianSeries operator+(const HermitianSeries& a, const HermitianSeries& b)
{
    return HermitianSeries(a.series() + b.series());
}

HermitianSeries operator-(const HermitianSeries& a, const HermitianSeries& b)
{
    return HermitianSeries(a.series() - b.series());
}

HermitianSeries operator*(const Rational& s, const HermitianSeries& a)
{
    return a.scaled(s);
}

HermitianSeries mul(const HermitianSeries& a, const HermitianSeries& b)
{
    return HermitianSeries(mul(a.series(), b.series()));
}

HermitianSeries power(const HermitianSeries& a, unsigned k)
{
    HermitianSeries out = HermitianSeries::constant(a.n(), a.bound(), 1);
    for (unsigned i = 0; i < k; ++i)
        out = mul(out, a);
    return out;
}

HermitianSeries exp(const HermitianSeries& a)
{
    return HermitianSeries(exp(a.series()));
}

HermitianSeries log(const HermitianSeries& a)
{
    return HermitianSeries(log(a.series()));
}

// ---------------------------------------------------------------- HoloSeries

HoloSeries::HoloSeries(std::size_t n, unsigned bound, TermMap terms)
    : n_(n), bound_(bound), order_(GradedOrder::make(n, bound))
{
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->first >= order_->size())
            throw DomainError("holomorphic term beyond truncation bound");
        it = it->second.is_zero() ? terms.erase(it) : std::next(it);
    }
    terms_ = std::move(terms);
}

HoloSeries HoloSeries::from_terms(std::size_t n, unsigned bound,
    const std::vector<std::pair<MultiIndex, Coefficient>>& terms)
{
    const auto ord = GradedOrder::make(n, bound);
    TermMap t;
    for (const auto& [m, c] : terms)
        t[std::uint32_t(ord->position(m))] += c;
    return HoloSeries(n, bound, std::move(t));
}

HoloSeries operator*(const HoloSeries& a, const HoloSeries& b)
{
    require_same_n(a.n(), b.n(), "holomorphic product");
    const unsigned bound = std::min(a.bound(), b.bound());
    const auto ord = GradedOrder::make(a.n(), std::max(a.bound(), b.bound()));
    HoloSeries::TermMap out;
    for (const auto& [pa, ca] : a.terms())
        for (const auto& [pb, cb] : b.terms())
            if (ord->degree(pa) + ord->degree(pb) <= bound)
                out[std::uint32_t(ord->sum(pa, pb))].add_product(ca, cb);
    return HoloSeries(a.n(), bound, std::move(out));
}

HermitianSeries gram_from_factors(std::span<const HoloSeries> factors, std::span<const Rational> weights)
{
    if (factors.empty())
        throw DomainError("gram_from_factors: empty factor list");
    if (!weights.empty() && weights.size() != factors.size())
        throw DomainError("gram_from_factors: one weight per factor required");
    const std::size_t n = factors.front().n();
    unsigned bound = factors.front().bound();
    for (const auto& f : factors) {
        require_same_n(n, f.n(), "gram_from_factors");
        bound = std::min(bound, f.bound());
    }
    const auto limit = GradedOrder::make(n, bound)->size();
    Series::TermMap out;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const Rational w = weights.empty() ? Rational(1) : weights[j];
        if (sgn(w) <= 0)
            throw DomainError("gram_from_factors: weights must be positive");
        for (const auto& [pa, ca] : factors[j].terms()) {
            if (pa >= limit)
                continue;
            const Coefficient wa = ca * w;
            for (const auto& [pb, cb] : factors[j].terms())
                if (pb < limit)
                    out[Series::Key{pa, pb}].add_product(wa, cb.conj());
        }
    }
    return HermitianSeries(Series(n, bound, bound, std::move(out)));
}

// --------------------------------------------------------- substitutions

LaurentRules identity_rules(std::size_t n)
{
    LaurentRules rules{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> row(n, 0);
        row[i] = 1;
        rules.images.push_back(std::move(row));
    }
    return rules;
}

HermitianSeries laurent_substitute(const HermitianSeries& a, const LaurentRules& rules)
{
    if (!a.is_polynomial())
        throw DomainError("laurent_substitute: input is not a polynomial at its truncation order");
    if (rules.images.size() != a.n())
        throw DimensionError("laurent_substitute: one image per source variable required");
    std::vector<bool> negative(rules.target_n, false);
    for (const auto& row : rules.images) {
        if (row.size() != rules.target_n)
            throw DimensionError("laurent_substitute: image length differs from target variable count");
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] < 0)
                negative[j] = true;
    }
    if (std::count(negative.begin(), negative.end(), true) > 1)
        throw DomainError("laurent_substitute: at most one variable may carry negative exponents");

    const auto& ord = a.order();
    auto image = [&](std::size_t pos) {
        std::vector<long> e(rules.target_n, 0);
        const auto& m = ord.monomial(pos);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < rules.target_n; ++j)
                e[j] += long(m[i]) * rules.images[i][j];
        return e;
    };
    std::map<std::pair<std::vector<long>, std::vector<long>>, Coefficient> acc;
    for (const auto& [key, c] : a.terms())
        acc[{image(key.first), image(key.second)}] += c;

    unsigned max_degree = 0;
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> terms;
    for (const auto& [exps, c] : acc) {
        if (c.is_zero())
            continue;
        std::vector<unsigned> m, k;
        for (std::size_t j = 0; j < rules.target_n; ++j) {
            if (exps.first[j] < 0 || exps.second[j] < 0)
                throw DomainError("laurent_substitute: negative exponent survives in the result");
            m.push_back(unsigned(exps.first[j]));
            k.push_back(unsigned(exps.second[j]));
        }
        MultiIndex mi(std::move(m)), ki(std::move(k));
        max_degree = std::max({max_degree, mi.degree(), ki.degree()});
        terms.emplace_back(std::move(mi), std::move(ki), c);
    }
    return HermitianSeries::from_terms(rules.target_n, std::max(a.bound(), max_degree + 1), terms);
}

namespace {

// (z + w)^m as a list of monomials.
std::vector<std::pair<MultiIndex, GaussRational>> shifted_monomial(const MultiIndex& m,
    std::span<const GaussRational> w)
{
    std::vector<std::pair<MultiIndex, GaussRational>> acc{{MultiIndex::zero(m.size()), GaussRational(1)}};
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<std::pair<MultiIndex, GaussRational>> next;
        std::vector<GaussRational> powers{GaussRational(1)};
        for (unsigned e = 1; e <= m[i]; ++e)
            powers.push_back(powers.back() * w[i]);
        for (const auto& [mono, c] : acc)
            for (unsigned j = 0; j <= m[i]; ++j) {
                Integer binom;
                mpz_bin_uiui(binom.get_mpz_t(), m[i], j);
                auto e = mono.exponents();
                e[i] = j;
                next.emplace_back(MultiIndex(e), c * powers[m[i] - j] * Rational(binom));
            }
        acc = std::move(next);
    }
    return acc;
}

} // namespace

HermitianSeries translate(const HermitianSeries& a, std::span<const GaussRational> shift)
{
    if (shift.size() != a.n())
        throw DimensionError("translate: shift length differs from variable count");
    if (!a.is_polynomial())
        throw DomainError("translate: input is not a polynomial at its truncation order");
    std::vector<GaussRational> conj_shift;
    for (const auto& w : shift)
        conj_shift.push_back(w.conj());
    const auto& ord = a.order();
    Series::TermMap out;
    for (const auto& [key, c] : a.terms()) {
        const auto holo = shifted_monomial(ord.monomial(key.first), shift);
        const auto anti = shifted_monomial(ord.monomial(key.second), conj_shift);
        for (const auto& [mh, ch] : holo) {
            const auto ph = std::uint32_t(ord.position(mh));
            const auto cc = c * ch;
            for (const auto& [ma, ca] : anti)
                out[Series::Key{ph, std::uint32_t(ord.position(ma))}].add_product(cc, ca);
        }
    }
    return HermitianSeries(Series(a.n(), a.bound(), a.bound(), std::move(out)));
}

HermitianSeries embed(const HermitianSeries& a, std::size_t target_n, std::size_t offset)
{
    return embed(a, target_n, offset, a.bound());
}

HermitianSeries embed(const HermitianSeries& a, std::size_t target_n, std::size_t offset, unsigned bound)
{
    if (bound < a.bound())
        return embed(a.truncated(bound), target_n, offset, bound);
    if (bound > a.bound() && !a.is_polynomial())
        throw DomainError("embed: raising the order of a truncated series");
    if (offset + a.n() > target_n)
        throw DimensionError("embed: source variables do not fit in target");
    const auto& ord = a.order();
    auto lift = [&](std::size_t pos) {
        std::vector<unsigned> e(target_n, 0);
        const auto& m = ord.monomial(pos);
        for (std::size_t i = 0; i < m.size(); ++i)
            e[offset + i] = m[i];
        return MultiIndex(std::move(e));
    };
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> terms;
    for (const auto& [key, c] : a.terms())
        terms.emplace_back(lift(key.first), lift(key.second), c);
    return HermitianSeries::from_terms(target_n, bound, terms);
}

// ---------------------------------------------------------------- evaluation

std::complex<double> evaluate(const Series& a, std::span<const std::complex<double>> point)
{
    if (point.size() != a.n())
        throw DimensionError("evaluate: point dimension differs from variable count");
    const auto& ord = a.order();
    std::vector<std::complex<double>> holo(ord.size()), anti(ord.size());
    for (std::size_t p = 0; p < ord.size(); ++p) {
        std::complex<double> h = 1.0, c = 1.0;
        const auto& m = ord.monomial(p);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned e = 0; e < m[i]; ++e) {
                h *= point[i];
                c *= std::conj(point[i]);
            }
        holo[p] = h;
        anti[p] = c;
    }
    std::complex<double> sum = 0.0;
    for (const auto& [key, c] : a.terms())
        sum += c.to_complex() * holo[key.first] * anti[key.second];
    return sum;
}

std::complex<double> evaluate(const HermitianSeries& a, std::span<const std::complex<double>> point)
{
    return evaluate(a.series(), point);
}

std::complex<double> evaluate(const HermitianSeries& a, std::span<const GaussRational> point)
{
    std::vector<std::complex<double>> p;
    for (const auto& z : point)
        p.push_back(z.to_complex());
    return evaluate(a.series(), p);
}

std::string to_string(const Series& a)
{
    if (a.is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, c] : a.terms()) {
        if (!first)
            out << " + ";
        first = false;
        out << "(" << to_string(c) << ")*z^" << to_string(a.order().monomial(key.first)) << "*zb^"
            << to_string(a.order().monomial(key.second));
    }
    return out.str();
}

} // namespace diastasis
