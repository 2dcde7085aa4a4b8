#include "diastasis/calabi.hpp"

#include <algorithm>

#include "diastasis/errors.hpp"

namespace diastasis {

bool HermitianMatrix::is_hermitian() const
{
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (!((*this)(i, j) == (*this)(j, i).conj()))
                return false;
    return true;
}

bool HermitianMatrix::is_diagonal() const
{
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j && !(*this)(i, j).is_zero())
                return false;
    return true;
}

HermitianMatrix HermitianMatrix::principal(std::size_t size) const
{
    if (size > dim_)
        throw DimensionError("principal submatrix larger than matrix");
    HermitianMatrix out(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j)
            out(i, j) = (*this)(i, j);
    return out;
}

Rational HermitianMatrix::quadratic_form(const std::vector<Coefficient>& v) const
{
    if (v.size() != dim_)
        throw DimensionError("quadratic form: vector length differs from matrix dimension");
    Coefficient total;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (v[i].is_zero())
            continue;
        Coefficient row;
        for (std::size_t j = 0; j < dim_; ++j)
            if (!v[j].is_zero())
                row.add_product((*this)(i, j), v[j]);
        total.add_product(v[i].conj(), row);
    }
    if (!total.is_real())
        throw InvariantError("quadratic form of a hermitian matrix is not real");
    return total.re;
}

HermitianMatrix coefficient_matrix(const HermitianSeries& s, unsigned order)
{
    if (order > s.bound())
        throw DomainError("coefficient matrix requested beyond the series order");
    const auto ord = GradedOrder::make(s.n(), order);
    HermitianMatrix m(ord->size());
    for (const auto& [key, c] : s.terms())
        if (key.first < m.dim() && key.second < m.dim())
            m(key.first, key.second) = c;
    return m;
}

HermitianMatrix LdlFactor::reconstruct(std::size_t dim) const
{
    HermitianMatrix m(dim);
    for (std::size_t p = 0; p < pivot.size(); ++p)
        for (std::size_t i = 0; i < dim; ++i) {
            if (column[p][i].is_zero())
                continue;
            const Coefficient scaled = column[p][i] * pivot[p];
            for (std::size_t j = 0; j < dim; ++j)
                if (!column[p][j].is_zero())
                    m(i, j).add_product(scaled, column[p][j].conj());
        }
    return m;
}

namespace {

// Scales v by a positive rational so every entry is a Gaussian integer and the
// gcd of all parts is one; the first nonzero entry gets a positive leading part.
std::vector<Coefficient> normalize_witness(std::vector<Coefficient> v)
{
    Integer lcm = 1;
    for (const auto& c : v) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re.get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im.get_den_mpz_t());
    }
    Integer g = 0;
    for (auto& c : v) {
        c *= Rational(lcm);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.re.get_num_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.im.get_num_mpz_t());
    }
    if (g == 0)
        throw InvariantError("negativity witness is the zero vector");
    const auto lead = std::find_if(v.begin(), v.end(), [](const Coefficient& c) { return !c.is_zero(); });
    const bool flip = sgn(lead->re) < 0 || (sgn(lead->re) == 0 && sgn(lead->im) < 0);
    const Rational scale = flip ? Rational(-1, g) : Rational(1, g);
    for (auto& c : v)
        c *= scale;
    return v;
}

class Eliminator {
public:
    explicit Eliminator(const HermitianMatrix& m) : original_(m), work_(m), dim_(m.dim())
    {
        for (std::size_t i = 0; i < dim_; ++i)
            remaining_.push_back(i);
    }

    PsdVerdict run()
    {
        while (true) {
            if (auto w = negative_diagonal())
                return *w;
            if (auto w = zero_pivot_with_row())
                return *w;
            std::erase_if(remaining_, [&](std::size_t i) { return sgn(work_(i, i).re) == 0; });
            if (remaining_.empty())
                break;
            eliminate(remaining_.front());
        }
        PsdCertificate cert;
        cert.rank = factor_.pivot.size();
        cert.factor = std::move(factor_);
        return cert;
    }

private:
    // Current Schur-complement direction for index i in original coordinates:
    // w_i = e_i - sum_p conj(l_p[i]) w_p over pivots taken so far.
    std::vector<Coefficient> direction(std::size_t i) const
    {
        std::vector<std::vector<Coefficient>> pivot_dirs;
        for (std::size_t p = 0; p < factor_.pivot.size(); ++p)
            pivot_dirs.push_back(unit_minus(factor_.pivot_index[p], p, pivot_dirs));
        return unit_minus(i, factor_.pivot.size(), pivot_dirs);
    }

    std::vector<Coefficient> unit_minus(std::size_t i, std::size_t upto,
        const std::vector<std::vector<Coefficient>>& pivot_dirs) const
    {
        std::vector<Coefficient> w(dim_);
        w[i] = Coefficient(1);
        for (std::size_t q = 0; q < upto; ++q) {
            const Coefficient alpha = factor_.column[q][i].conj();
            if (alpha.is_zero())
                continue;
            for (std::size_t k = 0; k < dim_; ++k)
                if (!pivot_dirs[q][k].is_zero())
                    w[k] -= alpha * pivot_dirs[q][k];
        }
        return w;
    }

    NegativityWitness finish(std::vector<Coefficient> v) const
    {
        NegativityWitness w;
        w.vector = normalize_witness(std::move(v));
        w.value = original_.quadratic_form(w.vector);
        if (sgn(w.value) >= 0)
            throw InvariantError("negativity witness does not certify");
        return w;
    }

    std::optional<NegativityWitness> negative_diagonal() const
    {
        for (std::size_t i : remaining_)
            if (sgn(work_(i, i).re) < 0)
                return finish(direction(i));
        return std::nullopt;
    }

    std::optional<NegativityWitness> zero_pivot_with_row() const
    {
        for (std::size_t i : remaining_) {
            if (sgn(work_(i, i).re) != 0)
                continue;
            for (std::size_t j : remaining_) {
                if (j == i || work_(i, j).is_zero())
                    continue;
                // 2x2 block [[0, b], [conj b, s]] with s >= 0: t = -max(1,s) b / |b|^2.
                const Coefficient& b = work_(i, j);
                const Rational s = work_(j, j).re;
                const Coefficient t = -(b * (std::max(Rational(1), s) / b.norm()));
                auto wi = direction(i);
                auto v = direction(j);
                for (std::size_t k = 0; k < dim_; ++k)
                    v[k] += t * wi[k];
                return finish(std::move(v));
            }
        }
        return std::nullopt;
    }

    void eliminate(std::size_t p)
    {
        const Rational pivot = work_(p, p).re;
        std::vector<Coefficient> col(dim_);
        for (std::size_t i : remaining_)
            col[i] = work_(i, p) / pivot;
        std::erase(remaining_, p);
        for (std::size_t a = 0; a < remaining_.size(); ++a) {
            const std::size_t i = remaining_[a];
            if (work_(i, p).is_zero())
                continue;
            for (std::size_t b = a; b < remaining_.size(); ++b) {
                const std::size_t j = remaining_[b];
                if (work_(p, j).is_zero())
                    continue;
                work_(i, j) -= col[i] * work_(p, j);
                if (i != j)
                    work_(j, i) = work_(i, j).conj();
            }
        }
        factor_.pivot_index.push_back(p);
        factor_.pivot.push_back(pivot);
        factor_.column.push_back(std::move(col));
    }

    const HermitianMatrix& original_;
    HermitianMatrix work_;
    std::size_t dim_;
    std::vector<std::size_t> remaining_;
    LdlFactor factor_;
};

} // namespace

PsdVerdict psd_check_exact(const HermitianMatrix& m)
{
    if (!m.is_hermitian())
        throw DomainError("psd_check_exact: matrix is not hermitian");
    return Eliminator(m).run();
}

HermitianSeries diastasis_normalize(const HermitianSeries& phi)
{
    Series::TermMap out;
    for (const auto& [key, c] : phi.terms())
        if (key.first != 0 && key.second != 0)
            out.emplace_hint(out.end(), key, c);
    return HermitianSeries(Series(phi.n(), phi.bound(), phi.bound(), std::move(out)));
}

bool is_diastasis_normalized(const HermitianSeries& phi)
{
    return std::none_of(phi.terms().begin(), phi.terms().end(),
        [](const auto& t) { return t.first.first == 0 || t.first.second == 0; });
}

HermitianMatrix metric_at_origin(const HermitianSeries& phi)
{
    if (phi.bound() < 1)
        throw DomainError("potential carries no second-order terms");
    const std::size_t n = phi.n();
    HermitianMatrix g(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            g(a, b) = phi.coeff(MultiIndex::unit(n, a), MultiIndex::unit(n, b));
    return g;
}

bool is_kahler_at_origin(const HermitianSeries& phi)
{
    const auto verdict = psd_check_exact(metric_at_origin(phi));
    return is_psd(verdict) && std::get<PsdCertificate>(verdict).rank == phi.n();
}

CalabiMatrix calabi_matrix(const HermitianSeries& diastasis, unsigned d)
{
    if (!is_diastasis_normalized(diastasis))
        throw DomainError("calabi_matrix: potential is not diastasis-normalized");
    if (d > diastasis.bound())
        throw DomainError("calabi_matrix: order " + std::to_string(d) + " exceeds the series order "
            + std::to_string(diastasis.bound()));
    const auto D = diastasis.truncated(d);
    const auto e = exp(D) - HermitianSeries::constant(D.n(), d, 1);
    return CalabiMatrix{GradedOrder::make(D.n(), d), d, coefficient_matrix(e, d)};
}

InducibilityVerdict inducibility(const HermitianSeries& phi, unsigned d)
{
    if (d > phi.bound())
        throw DomainError("inducibility: order " + std::to_string(d) + " exceeds the series order "
            + std::to_string(phi.bound()));
    if (!is_kahler_at_origin(phi))
        throw DomainError("inducibility: metric is degenerate at the center");
    const auto m = calabi_matrix(diastasis_normalize(phi.truncated(d)), d);
    auto verdict = psd_check_exact(m.entries);
    if (auto* w = std::get_if<NegativityWitness>(&verdict))
        return NotInduced{d, std::move(*w), std::nullopt};
    return ConsistentUpTo{d, std::get<PsdCertificate>(verdict).rank};
}

MultipleSearch find_inducing_multiple(const HermitianSeries& phi, unsigned max_k, unsigned d)
{
    MultipleSearch out;
    for (unsigned k = 1; k <= max_k; ++k) {
        auto verdict = inducibility(phi.scaled(Rational(k)), d);
        if (!is_not_induced(verdict)) {
            out.k = k;
            break;
        }
        out.failures.emplace_back(k, std::get<NotInduced>(std::move(verdict)));
    }
    return out;
}

} // namespace diastasis
