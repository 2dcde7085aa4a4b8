#include "diastasis/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "diastasis/calabi.hpp"
#include "diastasis/cone.hpp"
#include "diastasis/corpus.hpp"
#include "diastasis/curvature.hpp"
#include "diastasis/errors.hpp"
#include "diastasis/oracle.hpp"
#include "diastasis/report.hpp"

namespace diastasis::acceptance {

namespace {

using Point = std::vector<std::complex<double>>;

// Counts checks and keeps the first failure message.
class Tally {
public:
    void check(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok && failures_++ == 0)
            first_ = what;
    }

    template <typename F>
    void guarded(const std::string& what, F&& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            check(false, what + ": " + e.what());
        }
    }

    bool passed() const { return failures_ == 0 && checks_ > 0; }

    std::string detail(const std::string& summary) const
    {
        if (failures_ == 0)
            return summary + ", " + std::to_string(checks_) + " checks";
        return std::to_string(failures_) + "/" + std::to_string(checks_) + " failed; first: " + first_;
    }

private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string first_;
};

Rational frac(long p, long q)
{
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string describe(const InducibilityVerdict& v)
{
    if (const auto* c = std::get_if<ConsistentUpTo>(&v))
        return report::verdict_label(v) + " rank " + std::to_string(c->rank_lower_bound);
    return report::verdict_label(v) + " value " + to_string(std::get<NotInduced>(v).witness.value);
}

HermitianSeries flat_potential(std::size_t n, unsigned d)
{
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> terms;
    for (std::size_t j = 0; j < n; ++j)
        terms.emplace_back(MultiIndex::unit(n, j), MultiIndex::unit(n, j), Coefficient(1));
    return HermitianSeries::from_terms(n, d, terms);
}

CriterionResult calabi_instances()
{
    Tally t;
    t.guarded("fs:2", [&] {
        const auto v = inducibility(builtin_potential("fs:2", 4), 4);
        const auto* c = std::get_if<ConsistentUpTo>(&v);
        t.check(c && c->order == 4 && c->rank_lower_bound == 2, "fs:2 d=4 gave " + describe(v));
    });
    t.guarded("flat:1", [&] {
        const unsigned d = 6;
        const auto m = calabi_matrix(diastasis_normalize(builtin_potential("flat:1", d)), d).entries;
        bool diagonal = true;
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = 0; j < m.dim(); ++j) {
                const Rational expected = (i == j && i > 0) ? Rational(1 / factorial(unsigned(i))) : Rational(0);
                diagonal = diagonal && m(i, j) == Coefficient(expected);
            }
        t.check(diagonal, "flat:1 calabi matrix is not diag(1/k!)");
        const auto v = inducibility(builtin_potential("flat:1", d), d);
        t.check(std::holds_alternative<ConsistentUpTo>(v), "flat:1 gave " + describe(v));
    });
    t.guarded("perturbed_quartic", [&] {
        const auto v = inducibility(builtin_potential("perturbed_quartic", 3), 3);
        const auto* ni = std::get_if<NotInduced>(&v);
        t.check(ni && ni->order == 3 && ni->witness.value == frac(-1, 12), "perturbed_quartic d=3 gave " + describe(v));
    });
    return {1, "Calabi criterion instances", t.passed(), t.detail("fs:2 rank 2, flat 1/k!, quartic -1/12")};
}

CriterionResult cone_metamorphic()
{
    Tally t;
    std::size_t instances = 0;
    for (const auto& name : corpus_names())
        for (const Rational& c : {frac(1, 2), frac(1, 1), frac(2, 1), frac(3, 1)})
            for (unsigned d = 3; d <= 6; ++d) {
                const std::string where = name + " c=" + to_string(c) + " d=" + std::to_string(d);
                t.guarded(where, [&] {
                    const auto psi = builtin_potential(name, d);
                    const auto cone = cone_inducibility(ConePotential(c, psi), 4, d);
                    const auto base = inducibility(psi.scaled(c), d);
                    t.check(cone.index() == base.index(), where + ": cone " + describe(cone) + ", base " + describe(base));
                    ++instances;
                });
            }
    return {2, "cone verdict equals verdict of c psi", t.passed(),
        t.detail(std::to_string(instances) + " instances, 0 disagreements")};
}

// Entrywise |a - b|^2 as exact rationals.
std::vector<Rational> squared_deviation(const HermitianMatrix& a, const HermitianMatrix& b)
{
    std::vector<Rational> out;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const Coefficient diff = a(i, j) - b(i, j);
            out.push_back(diff.norm());
        }
    return out;
}

CriterionResult epsilon_limit()
{
    Tally t;
    for (const auto& [name, d] : std::vector<std::pair<std::string, unsigned>>{
             {"fs:1", 4}, {"fs:2", 3}, {"hyp:1", 4}, {"hyp:2", 3}, {"perturbed_quartic", 4}}) {
        t.guarded(name, [&] {
            const ConePotential cp(1, builtin_potential(name, d));
            const auto limit = epsilon_limit_matrix(cp, d);
            const auto calabi = calabi_matrix(cp.psi(), d).entries;
            bool equal = limit(0, 0) == Coefficient(1);
            for (std::size_t i = 0; i < limit.dim(); ++i)
                for (std::size_t j = 0; j < limit.dim(); ++j)
                    if (i + j > 0)
                        equal = equal && limit(i, j) == calabi(i, j);
            t.check(equal, name + ": eps = 0 matrix differs from the calabi matrix");

            std::vector<Rational> previous;
            Rational previous_max = -1;
            for (const Rational& eps : {frac(1, 10), frac(1, 100), frac(1, 1000)}) {
                const auto dev = squared_deviation(epsilon_submatrix(cp, eps, d).v, limit);
                Rational max = 0;
                for (const auto& x : dev)
                    max = std::max(max, x);
                t.check(sgn(max) > 0, name + ": eps = " + to_string(eps) + " matrix already equals the limit");
                if (!previous.empty()) {
                    t.check(max < previous_max, name + ": max deviation not decreasing at eps = " + to_string(eps));
                    for (std::size_t e = 0; e < dev.size(); ++e)
                        t.check(dev[e] <= previous[e], name + ": entry " + std::to_string(e) + " deviation grows at eps = "
                            + to_string(eps));
                }
                previous = dev;
                previous_max = max;
            }
        });
    }
    return {3, "epsilon submatrix converges to the calabi matrix", t.passed(), t.detail("5 potentials, eps 1/10..1/1000")};
}

CriterionResult radial_identity()
{
    Tally t;
    struct Case {
        Rational c;
        std::string psi;
        double eps;
        std::vector<Point> points;
    };
    const std::vector<Case> cases{
        {1, "fs:1", 0.5, {Point{0.1}, Point{{0.0, 0.2}}, Point{{-0.15, 0.1}}}},
        {2, "flat:1", 1.0 / 3, {Point{0.2}, Point{{0.1, -0.1}}, Point{{0.0, -0.15}}}},
        {1, "hyp:1", 0.5, {Point{0.1}, Point{{0.0, 0.15}}, Point{{0.1, 0.1}}}},
    };
    double worst = 0;
    for (const auto& cs : cases) {
        const std::string where = "c=" + to_string(cs.c) + " " + cs.psi;
        t.guarded(where, [&] {
            const auto r = verify_radial_derivative_identity(ConePotential(cs.c, builtin_potential(cs.psi, 16)), cs.eps,
                cs.points, 1e-6);
            t.check(r.samples.size() == 3, where + ": expected 3 samples");
            for (const auto& s : r.samples) {
                worst = std::max(worst, s.relative_error);
                std::ostringstream msg;
                msg << where << ": relative error " << s.relative_error;
                t.check(s.relative_error <= 1e-6, msg.str());
            }
            t.check(r.passed, where + ": report not passed");
        });
    }
    std::ostringstream summary;
    summary << "worst relative error " << worst;
    return {4, "radial derivative identity", t.passed(), t.detail(summary.str())};
}

CriterionResult curvature_constants()
{
    Tally t;
    auto expect = [&](const std::string& name, unsigned d, const Rational& lambda) {
        t.guarded(name, [&] {
            const auto r = ricci_report(builtin_potential(name, d + 1), d);
            t.check(r.lambda && *r.lambda == lambda && r.residual.is_zero(),
                name + ": lambda " + (r.lambda ? to_string(*r.lambda) : std::string("none")) + ", expected "
                    + to_string(lambda));
        });
    };
    expect("fs:1", 4, 4);
    expect("fs:2", 4, 6);
    expect("fs:3", 3, 8);
    expect("hyp:1", 4, -4);
    expect("flat:2", 4, 0);
    return {5, "Einstein constants", t.passed(), t.detail("fs n=1..3, hyp, flat")};
}

CriterionResult ricci_flat_chain()
{
    Tally t;
    const unsigned d = 4;
    for (std::size_t n : {1u, 2u}) {
        const std::string name = "fs:" + std::to_string(n);
        t.guarded(name, [&] {
            const auto cp = lift(builtin_potential(name, d + 1), 1);
            const auto flat = ricci_flat_check(cp, d);
            t.check(flat.flat && flat.residual.is_zero(), name + ": cone is not Ricci-flat");
            const auto v = cone_inducibility(cp, 4, d);
            t.check(std::holds_alternative<ConsistentUpTo>(v), name + ": cone verdict " + describe(v));
            const auto w = flatness_witness(cp, d);
            t.check(w.flat && w.substituted && w.substituted->truncated(std::min(w.substituted->bound(), d))
                        == flat_potential(n + 1, std::min(w.substituted->bound(), d)),
                name + ": flatness witness " + w.reason);
        });
    }
    t.guarded("hyp:1", [&] {
        t.check(!ricci_flat_check(lift(builtin_potential("hyp:1", d + 1), 1), d).flat, "hyp:1 cone is Ricci-flat");
    });
    return {6, "Ricci-flat cone chain", t.passed(), t.detail("fs n=1,2 and hyp control")};
}

CriterionResult homothety_instance()
{
    Tally t;
    t.guarded("fs:1:1/2", [&] {
        const auto psi = builtin_potential("fs:1:1/2", 4);
        const auto search = find_inducing_multiple(psi, 4, 4);
        t.check(search.k && *search.k == 2, "inducing multiple is " + (search.k ? std::to_string(*search.k) : std::string("none")));
        const auto before = cone_inducibility(ConePotential(1, psi), 4, 4);
        const auto after = cone_inducibility(homothety(ConePotential(1, psi), search.k.value_or(2)), 4, 4);
        t.check(std::holds_alternative<NotInduced>(before), "cone at c=1 gave " + describe(before));
        t.check(std::holds_alternative<ConsistentUpTo>(after), "cone after homothety gave " + describe(after));
    });
    return {7, "homothety flips the cone verdict", t.passed(), t.detail("k = 2, NotInduced -> ConsistentUpTo")};
}

// Random Hermitian series with small rational coefficients. min_total drops
// terms z^m zbar^k with |m| + |k| < min_total.
HermitianSeries random_series(std::mt19937_64& rng, std::size_t n, unsigned d, unsigned nterms, unsigned min_total)
{
    const auto ord = GradedOrder::make(n, d);
    std::uniform_int_distribution<std::size_t> pos(0, ord->size() - 1);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 5);
    Series::TermMap terms;
    for (unsigned i = 0; i < nterms; ++i) {
        const std::size_t a = pos(rng), b = pos(rng);
        if (ord->degree(a) + ord->degree(b) < min_total)
            continue;
        Rational re(num(rng), den(rng)), im(a == b ? 0 : num(rng), den(rng));
        re.canonicalize();
        im.canonicalize();
        const Coefficient c(re, im);
        if (c.is_zero())
            continue;
        terms[{std::uint32_t(a), std::uint32_t(b)}] = c;
        terms[{std::uint32_t(b), std::uint32_t(a)}] = c.conj();
    }
    return HermitianSeries(Series(n, d, d, std::move(terms)));
}

void property(Tally& t, std::mt19937_64& rng, int i)
{
    std::uniform_int_distribution<int> dim(1, 3);
    const std::size_t n = std::size_t(dim(rng));
    const unsigned d = n == 3 ? 3 : 4;
    const auto one = HermitianSeries::constant(n, d, 1);
    const std::string where = "property " + std::to_string(i);
    switch (i % 5) {
    case 0: {
        const auto a = random_series(rng, n, d, 6, 0), b = random_series(rng, n, d, 6, 0);
        t.check((a.series() * b.series()).is_hermitian(), where + ": product not hermitian");
        const auto a0 = a - HermitianSeries::constant(n, d, a.constant_term());
        t.check((a + b).series().is_hermitian(), where + ": sum not hermitian");
        t.check(exp(a0).series().is_hermitian() && log(one + a0).series().is_hermitian(), where + ": exp or log not hermitian");
        break;
    }
    case 1: {
        const auto a = random_series(rng, n, d, 6, 1);
        t.check(log(exp(a)) == a, where + ": log(exp(a)) != a");
        t.check(exp(log(one + a)) == one + a, where + ": exp(log(1 + a)) != 1 + a");
        t.check(exp(a) == oracle::brute_expand(oracle::exp(oracle::Expr::base(a)), n, d),
            where + ": exp disagrees with the naive expansion");
        break;
    }
    case 2: {
        const auto a = random_series(rng, n, d, 5, 0), b = random_series(rng, n, d, 5, 0),
                   c = random_series(rng, n, d, 5, 0);
        t.check(mul(mul(a, b), c) == mul(a, mul(b, c)), where + ": mul not associative");
        t.check(mul(a, b) == mul(b, a), where + ": mul not commutative");
        break;
    }
    case 3: {
        const unsigned top = n == 3 ? 3 : 4;
        const auto phi = flat_potential(n, top) + random_series(rng, n, top, 8, 3);
        const auto lo = calabi_matrix(diastasis_normalize(phi), top - 1).entries;
        const auto hi = calabi_matrix(diastasis_normalize(phi), top).entries;
        t.check(hi.principal(lo.dim()) == lo, where + ": order d matrix is not a principal block of order d+1");
        const auto vlo = inducibility(phi, top - 1), vhi = inducibility(phi, top);
        t.check(!is_not_induced(vlo) || is_not_induced(vhi), where + ": NotInduced at d but not at d+1");
        if (const auto* c = std::get_if<ConsistentUpTo>(&vhi))
            t.check(std::get<ConsistentUpTo>(vlo).rank_lower_bound <= c->rank_lower_bound,
                where + ": rank decreased with d");
        break;
    }
    default: {
        std::uniform_int_distribution<int> off(-5, 5);
        std::vector<GaussRational> w;
        for (std::size_t j = 0; j < 2; ++j)
            w.emplace_back(frac(off(rng), 100), frac(off(rng), 100));
        const auto quartic = embed(builtin_potential("perturbed_quartic", 4), 2, 0, 4) + embed(flat_potential(1, 4), 2, 1, 4);
        const auto at0 = inducibility(quartic, 3);
        const auto atw = inducibility(translate(quartic, w), 3);
        t.check(at0.index() == atw.index(), where + ": quartic verdict changed under recentering: " + describe(atw));
        const auto flat = flat_potential(2, 4);
        const auto f0 = inducibility(flat, 4), fw = inducibility(translate(flat, w), 4);
        const auto* a = std::get_if<ConsistentUpTo>(&f0);
        const auto* b = std::get_if<ConsistentUpTo>(&fw);
        t.check(a && b && a->rank_lower_bound == b->rank_lower_bound, where + ": flat verdict changed under recentering");
        break;
    }
    }
}

// log(1 + w) without cancellation for small w.
std::complex<double> log1p(std::complex<double> w)
{
    return {0.5 * std::log1p(2 * w.real() + std::norm(w)), std::atan2(w.imag(), 1 + w.real())};
}

double norm2(std::span<const std::complex<double>> p)
{
    double s = 0;
    for (const auto& x : p)
        s += std::norm(x);
    return s;
}

void oracle_checks(Tally& t, std::mt19937_64& rng, std::size_t& count)
{
    const double tol = 1e-6;
    auto run = [&](const std::string& what, const HermitianSeries& s, const oracle::ScalarField& f,
                   const std::vector<Point>& pts, double radius) {
        t.guarded(what, [&] {
            const auto r = oracle::cross_check(s, f, oracle::SamplePlan::make(pts, radius, tol));
            std::ostringstream msg;
            msg << what << ": deviation " << r.max_relative_deviation << " at point " << r.worst_point;
            t.check(r.passed, msg.str());
            ++count;
        });
    };
    for (std::size_t n = 1; n <= 3; ++n) {
        const unsigned d = n == 3 ? 8 : 14;
        std::vector<Point> pts;
        for (int k = 0; k < 3; ++k) {
            Point p;
            for (std::size_t j = 0; j < n; ++j)
                p.emplace_back(0.1 * double(k + 1) / double(n), 0.05 * double(j));
            pts.push_back(p);
        }
        run("fs:" + std::to_string(n), builtin_potential("fs:" + std::to_string(n), d),
            [](std::span<const std::complex<double>> p) { return std::complex<double>(std::log1p(norm2(p))); }, pts, 0.3);
        run("hyp:" + std::to_string(n), builtin_potential("hyp:" + std::to_string(n), d),
            [](std::span<const std::complex<double>> p) { return std::complex<double>(-std::log1p(-norm2(p))); }, pts,
            0.3);
        for (const Rational& c : {frac(1, 2), frac(2, 1), frac(3, 1)}) {
            const double cd = c.get_d();
            run("exp(c fs) c=" + to_string(c), exp(builtin_potential("fs:" + std::to_string(n), d).scaled(c)),
                [cd](std::span<const std::complex<double>> p) { return std::complex<double>(std::pow(1 + norm2(p), cd)); },
                pts, 0.3);
        }
    }
    // Kernel exp and log of random series against pointwise std::exp / std::log.
    // a = ||z||^2 / 2 + higher terms with coefficients <= 1/2, so |a(p)| ~ |p|^2 and
    // the dropped tail stays below 1e-8 relative for |z_j| <= 0.08.
    std::uniform_real_distribution<double> coord(-0.08, 0.08);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 1 + std::size_t(i % 2);
        const unsigned d = 6;
        const auto a = flat_potential(n, d).scaled(frac(1, 2)) + random_series(rng, n, d, 6, 3).scaled(frac(1, 8));
        std::vector<Point> pts;
        for (int k = 0; k < 3; ++k) {
            Point p;
            for (std::size_t j = 0; j < n; ++j)
                p.emplace_back(coord(rng), coord(rng));
            pts.push_back(p);
        }
        run("random exp " + std::to_string(i), exp(a),
            [&a](std::span<const std::complex<double>> p) { return std::exp(evaluate(a, p)); }, pts, 0.05);
        const auto one_plus = HermitianSeries::constant(n, d, 1) + a;
        run("random log " + std::to_string(i), log(one_plus),
            [&a](std::span<const std::complex<double>> p) { return log1p(evaluate(a, p)); }, pts, 0.05);
    }
}

CriterionResult kernel_properties()
{
    Tally t;
    std::mt19937_64 rng(20241016);
    for (int i = 0; i < 1000; ++i)
        t.guarded("property " + std::to_string(i), [&] { property(t, rng, i); });
    std::size_t cross = 0;
    oracle_checks(t, rng, cross);
    return {8, "kernel properties and oracle cross-checks", t.passed(),
        t.detail("1000 random properties, " + std::to_string(cross) + " cross-checks")};
}

using Runner = CriterionResult (*)();

constexpr Runner runners[] = {calabi_instances, cone_metamorphic, epsilon_limit, radial_identity, curvature_constants,
    ricci_flat_chain, homothety_instance, kernel_properties};

} // namespace

int count()
{
    return int(std::size(runners));
}

CriterionResult run(int id)
{
    if (id < 1 || id > count())
        throw DomainError("no acceptance criterion " + std::to_string(id));
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = runners[id - 1]();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result)
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= count(); ++id) {
        out.push_back(run(id));
        if (on_result)
            on_result(out.back());
    }
    return out;
}

} // namespace diastasis::acceptance
