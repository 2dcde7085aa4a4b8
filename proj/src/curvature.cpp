#include "diastasis/curvature.hpp"

#include "diastasis/calabi.hpp"
#include "diastasis/errors.hpp"

namespace diastasis {

MetricSeries metric_from_potential(const HermitianSeries& phi, unsigned d)
{
    if (phi.bound() < d + 1)
        throw DomainError("metric_from_potential: potential order " + std::to_string(phi.bound())
            + " is below the required " + std::to_string(d + 1));
    if (!is_kahler_at_origin(phi))
        throw DomainError("metric_from_potential: metric is degenerate at the center");
    const auto base = phi.truncated(d + 1);
    MetricSeries g{phi.n(), d, {}};
    g.entries.assign(g.n, {});
    for (std::size_t a = 0; a < g.n; ++a) {
        const Series da = wirtinger(base, a, false);
        for (std::size_t b = 0; b < g.n; ++b)
            g.entries[a].push_back(wirtinger(da, b, true).truncated(d, d));
    }
    return g;
}

namespace {

Series cofactor_det(const std::vector<std::vector<Series>>& m, const std::vector<std::size_t>& rows,
    const std::vector<std::size_t>& cols)
{
    if (rows.size() == 1)
        return m[rows[0]][cols[0]];
    const std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    std::optional<Series> total;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Series& entry = m[rows[0]][cols[j]];
        if (entry.is_zero())
            continue;
        std::vector<std::size_t> sub_cols;
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (k != j)
                sub_cols.push_back(cols[k]);
        Series term = mul(entry, cofactor_det(m, sub_rows, sub_cols));
        if (j % 2 == 1)
            term = Coefficient(-1) * term;
        total = total ? *total + term : term;
    }
    if (!total) {
        const Series& any = m[rows[0]][cols[0]];
        return Series(any.n(), any.holo_bound(), any.anti_bound());
    }
    return *total;
}

std::string term_label(const GradedOrder& ord, const Series::Key& key)
{
    return to_string(ord.monomial(key.first)) + "x" + to_string(ord.monomial(key.second));
}

} // namespace

HermitianSeries metric_determinant(const MetricSeries& g)
{
    std::vector<std::size_t> idx(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        idx[i] = i;
    return HermitianSeries(cofactor_det(g.entries, idx, idx));
}

RicciReport ricci_report(const HermitianSeries& phi, unsigned d)
{
    const auto g = metric_from_potential(phi, d);
    const auto det = metric_determinant(g);
    const Rational det0 = det.constant_term();
    if (sgn(det0) <= 0)
        throw InvariantError("metric determinant is not positive at the center");
    const auto ricci = diastasis_normalize(log(det.scaled(Rational(1) / det0)).scaled(Rational(-2)));
    const auto target = diastasis_normalize(phi.truncated(d));

    RicciReport report{d, ricci, std::nullopt, ricci, std::nullopt};
    if (ricci.is_zero()) {
        report.lambda = Rational(0);
        return report;
    }
    // Lowest term of the ricci potential fixes the candidate.
    const auto& [key, rc] = *ricci.terms().begin();
    const Coefficient tc = target.series().coeff(key);
    if (tc.is_zero()) {
        report.first_mismatch = term_label(ricci.order(), key);
        return report;
    }
    const Coefficient ratio = rc / tc;
    if (!ratio.is_real()) {
        report.first_mismatch = term_label(ricci.order(), key);
        return report;
    }
    const auto residual = ricci - target.scaled(ratio.re);
    if (residual.is_zero()) {
        report.lambda = ratio.re;
        report.residual = residual;
        return report;
    }
    report.first_mismatch = term_label(residual.order(), residual.terms().begin()->first);
    return report;
}

RicciFlatness ricci_flat_check(const HermitianSeries& phi, unsigned d)
{
    const auto r = ricci_report(phi, d);
    return RicciFlatness{r.ricci_potential.is_zero(), r.ricci_potential};
}

RicciFlatness ricci_flat_check(const ConePotential& cp, unsigned d)
{
    if (cp.c().get_den() != 1)
        throw DomainError("ricci_flat_check: cone exponent c = " + to_string(cp.c())
            + " is fractional; use sasaki_einstein_bridge");
    return ricci_flat_check(cone_potential_series(cp, Rational(1), d + 1), d);
}

BridgeReport sasaki_einstein_bridge(const HermitianSeries& psi, const Rational& a, unsigned d)
{
    if (sgn(a) <= 0)
        throw DomainError("sasaki_einstein_bridge: a must be positive");
    BridgeReport out;
    out.c = Rational(1) / a;
    out.n = psi.n();
    out.d = d;
    const auto base = psi.scaled(out.c);
    out.lambda_base = ricci_report(base, d).lambda;
    out.base_is_ke_2n2 = out.lambda_base && *out.lambda_base == Rational(2 * psi.n() + 2);
    out.cone_ricci_flat = ricci_flat_check(ConePotential(Rational(1), base), d).flat;
    out.consistent = out.base_is_ke_2n2 == out.cone_ricci_flat;
    return out;
}

} // namespace diastasis
