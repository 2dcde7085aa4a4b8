#include "diastasis/cone.hpp"

#include <cmath>

#include "diastasis/errors.hpp"
#include "diastasis/oracle.hpp"

namespace diastasis {

namespace {

void require_positive(const Rational& a, const char* what)
{
    if (sgn(a) <= 0)
        throw DomainError(std::string(what) + " must be positive, got " + to_string(a));
}

unsigned integer_exponent(const Rational& c, const char* what)
{
    if (c.get_den() != 1 || !c.get_num().fits_uint_p())
        throw DomainError(std::string(what) + " requires an integer radial exponent c, got " + to_string(c));
    return unsigned(c.get_num().get_ui());
}

// (z0 + shift)^k as a holomorphic series in n+1 variables (z0 is variable 0).
HoloSeries shifted_radial_power(std::size_t n_total, unsigned k, const Rational& shift, unsigned bound)
{
    std::vector<std::pair<MultiIndex, Coefficient>> terms;
    for (unsigned j = 0; j <= std::min(k, bound); ++j) {
        Integer binom;
        mpz_bin_uiui(binom.get_mpz_t(), k, j);
        Rational power = 1;
        for (unsigned i = 0; i < k - j; ++i)
            power *= shift;
        std::vector<unsigned> e(n_total, 0);
        e[0] = j;
        terms.emplace_back(MultiIndex(e), Coefficient(Rational(binom) * power));
    }
    return HoloSeries::from_terms(n_total, bound, terms);
}

HermitianSeries one(std::size_t n, unsigned d)
{
    return HermitianSeries::constant(n, d, 1);
}

} // namespace

ConePotential::ConePotential(Rational c, HermitianSeries psi)
    : c_(std::move(c)), psi_(diastasis_normalize(psi)), exp_c_psi_(psi_.n(), psi_.bound())
{
    require_positive(c_, "cone exponent c");
    if (!is_psd(psd_check_exact(metric_at_origin(psi_))))
        throw DomainError("cone base potential has an indefinite metric at the center");
    exp_c_psi_ = exp(psi_.scaled(c_));
}

ConePotential lift(const HermitianSeries& psi, const Rational& a)
{
    require_positive(a, "lift parameter a");
    return ConePotential(Rational(1) / a, psi);
}

ConePotential homothety(const ConePotential& cp, const Rational& a)
{
    require_positive(a, "homothety parameter a");
    return ConePotential(cp.c() * a, cp.psi());
}

RadialBlockMatrix radial_blocks(const ConePotential& cp, unsigned K, unsigned d)
{
    if (K < 1)
        throw DomainError("radial_blocks: K must be at least 1");
    if (d > cp.psi().bound())
        throw DomainError("radial_blocks: order exceeds the base series order");
    RadialBlockMatrix out{d, {}};
    const auto psi = cp.psi().truncated(d);
    for (unsigned k = 1; k <= K; ++k) {
        auto block = coefficient_matrix(exp(psi.scaled(cp.c() * Rational(k))), d);
        const Rational inv = Rational(1) / factorial(k);
        for (std::size_t i = 0; i < block.dim(); ++i)
            for (std::size_t j = 0; j < block.dim(); ++j)
                block(i, j) *= inv;
        out.blocks.push_back(std::move(block));
    }
    return out;
}

InducibilityVerdict cone_inducibility(const ConePotential& cp, unsigned K, unsigned d)
{
    const auto blocks = radial_blocks(cp, K, d);
    std::size_t rank = 0;
    for (unsigned k = 1; k <= K; ++k) {
        auto verdict = psd_check_exact(blocks.blocks[k - 1]);
        if (auto* w = std::get_if<NegativityWitness>(&verdict))
            return NotInduced{d, std::move(*w), k};
        rank += std::get<PsdCertificate>(verdict).rank;
    }
    return ConsistentUpTo{d, rank};
}

namespace {

// eps^{2c} for c = p/q, exact when eps is a perfect q-th power.
Rational epsilon_power(const Rational& c, const Rational& epsilon)
{
    const unsigned q = unsigned(c.get_den().get_ui());
    Rational root;
    if (!exact_root(epsilon, q, root))
        throw DomainError("epsilon " + to_string(epsilon) + " is not a perfect " + std::to_string(q)
            + "-th power, so eps^(2c) is irrational for c = " + to_string(c));
    if (!c.get_num().fits_uint_p())
        throw DomainError("cone exponent too large");
    Rational out = 1;
    for (unsigned long i = 0; i < 2 * c.get_num().get_ui(); ++i)
        out *= root;
    return out;
}

} // namespace

EpsilonSubmatrix epsilon_submatrix(const ConePotential& cp, const Rational& epsilon, unsigned d)
{
    require_positive(epsilon, "epsilon");
    if (d > cp.psi().bound())
        throw DomainError("epsilon_submatrix: order exceeds the base series order");
    const Rational s = epsilon_power(cp.c(), epsilon);
    const auto e = cp.exp_c_psi().truncated(d);
    const auto x = e - one(cp.n(), d);
    // D_q(0, z) = eps^{2c} (e^{c psi} - 1)
    const auto prefactor = exp(x.scaled(s));
    const auto braces = mul(x, x).scaled(s) + e;
    EpsilonSubmatrix out{epsilon, s, coefficient_matrix(mul(prefactor, braces), d), {}};
    const Rational u_scale = cp.c() * cp.c() * s / (epsilon * epsilon);
    out.u = out.v;
    for (std::size_t i = 0; i < out.u.dim(); ++i)
        for (std::size_t j = 0; j < out.u.dim(); ++j)
            out.u(i, j) *= u_scale;
    return out;
}

HermitianMatrix epsilon_limit_matrix(const ConePotential& cp, unsigned d)
{
    return coefficient_matrix(cp.exp_c_psi().truncated(d), d);
}

RadialIdentityReport verify_radial_derivative_identity(const ConePotential& cp, double epsilon,
    const std::vector<std::vector<std::complex<double>>>& samples, double tolerance)
{
    if (!(epsilon > 0))
        throw DomainError("verify_radial_derivative_identity: epsilon must be positive");
    const double c = cp.c().get_d();
    const auto& psi = cp.psi();
    auto psi_at = [&](std::span<const std::complex<double>> z) { return evaluate(psi, z).real(); };

    // e^{D_q(z0, z)} - 1 with z0 in slot 0 and the base point in the remaining slots.
    const oracle::ScalarField field = [&](std::span<const std::complex<double>> p) {
        const std::complex<double> w = p[0] + epsilon;
        const double radial = std::pow(std::norm(w), c);
        const std::complex<double> hol = std::pow(epsilon, c) * std::pow(w, c);
        const double dq = radial * std::exp(c * psi_at(p.subspan(1))) - 2.0 * hol.real() + std::pow(epsilon, 2 * c);
        return std::complex<double>(std::expm1(dq), 0.0);
    };

    RadialIdentityReport report{tolerance, {}, true};
    const double h = 1e-4 * epsilon;
    for (const auto& z : samples) {
        if (z.size() != cp.n())
            throw DimensionError("verify_radial_derivative_identity: sample has wrong dimension");
        std::vector<std::complex<double>> full{0.0};
        full.insert(full.end(), z.begin(), z.end());
        RadialIdentitySample s;
        s.point = z;
        s.finite_difference = oracle::fd_mixed_second(field, 0, 0, full, h);
        const double e = std::exp(c * psi_at(z));
        const double s2c = std::pow(epsilon, 2 * c);
        const double dq0 = s2c * (e - 1.0);
        s.closed_form = c * c * std::pow(epsilon, 2 * c - 2) * std::exp(dq0) * (s2c * (e - 1.0) * (e - 1.0) + e);
        s.relative_error = std::abs(s.finite_difference - s.closed_form) / std::abs(s.closed_form);
        if (!(s.relative_error <= tolerance))
            report.passed = false;
        report.samples.push_back(std::move(s));
    }
    return report;
}

HermitianSeries cone_potential_series(const ConePotential& cp, const Rational& center, unsigned d)
{
    const unsigned k = integer_exponent(cp.c(), "cone_potential_series");
    if (d > cp.psi().bound())
        throw DomainError("cone_potential_series: order exceeds the base series order");
    const std::size_t n1 = cp.n() + 1;
    const HoloSeries radial = shifted_radial_power(n1, k, center, d);
    const auto radial_sq = gram_from_factors(std::span<const HoloSeries>(&radial, 1));
    return mul(radial_sq, embed(cp.exp_c_psi().truncated(d), n1, 1));
}

HermitianSeries cone_diastasis_series(const ConePotential& cp, const Rational& epsilon, unsigned d)
{
    require_positive(epsilon, "epsilon");
    const unsigned k = integer_exponent(cp.c(), "cone_diastasis_series");
    const std::size_t n1 = cp.n() + 1;
    const auto phi = cone_potential_series(cp, epsilon, d);
    Rational eps_c = 1;
    for (unsigned i = 0; i < k; ++i)
        eps_c *= epsilon;
    // eps^c (z0 + eps)^c and its conjugate; together they hold 2 eps^{2c} at the origin.
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> pure;
    const HoloSeries h = shifted_radial_power(n1, k, epsilon, d);
    const auto& ord = h.order();
    for (const auto& [pos, c] : h.terms()) {
        const auto& m = ord.monomial(pos);
        const auto zero = MultiIndex::zero(n1);
        if (pos == 0) {
            pure.emplace_back(zero, zero, c * (Rational(2) * eps_c));
            continue;
        }
        pure.emplace_back(m, zero, c * eps_c);
    }
    const auto pure_part = HermitianSeries::from_terms(n1, d, pure);
    return phi - pure_part + HermitianSeries::constant(n1, d, eps_c * eps_c);
}

FlatnessReport flatness_witness(const ConePotential& cp, unsigned d)
{
    FlatnessReport report;
    if (cp.c().get_den() != 1) {
        report.reason = "radial exponent c = " + to_string(cp.c()) + " is not an integer";
        return report;
    }
    const unsigned k = integer_exponent(cp.c(), "flatness_witness");
    if (d > cp.psi().bound())
        throw DomainError("flatness_witness: order exceeds the base series order");
    const auto e = cp.exp_c_psi().truncated(d);
    if (!e.is_polynomial()) {
        report.reason = "e^(c psi) is not a polynomial through order " + std::to_string(d);
        return report;
    }
    const std::size_t n1 = cp.n() + 1;
    const unsigned bound = d + k + 1;
    std::vector<unsigned> radial(n1, 0);
    radial[0] = k;
    const auto radial_sq = HermitianSeries::from_terms(n1, bound, {{MultiIndex(radial), MultiIndex(radial), Coefficient(1)}});
    const auto phi = mul(radial_sq, embed(e, n1, 1, bound));

    LaurentRules rules = identity_rules(n1);
    for (std::size_t j = 1; j < n1; ++j)
        rules.images[j][0] = -1;
    try {
        report.substituted = laurent_substitute(phi, rules);
    } catch (const DomainError& err) {
        report.reason = err.what();
        return report;
    }
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> flat;
    for (std::size_t j = 0; j < n1; ++j)
        flat.emplace_back(MultiIndex::unit(n1, j), MultiIndex::unit(n1, j), Coefficient(1));
    const auto target = HermitianSeries::from_terms(n1, report.substituted->bound(), flat);
    report.flat = *report.substituted == target;
    report.reason = report.flat ? "substituted potential equals |z0|^2 + sum |z_j|^2"
                                : "substituted potential differs from the flat potential";
    return report;
}

} // namespace diastasis
