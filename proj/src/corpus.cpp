#include "diastasis/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "diastasis/calabi.hpp"
#include "diastasis/errors.hpp"

namespace diastasis {

namespace {

using Json = nlohmann::ordered_json;

void layer(std::size_t n, unsigned k, std::vector<unsigned>& e, std::size_t var, std::vector<MultiIndex>& out)
{
    if (var + 1 == n) {
        e[var] = k;
        out.emplace_back(e);
        return;
    }
    for (unsigned j = 0; j <= k; ++j) {
        e[var] = j;
        layer(n, k - j, e, var + 1, out);
    }
}

// sum_k w_k ||z||^{2k} with ||z||^{2k} = sum_{|m|=k} k!/m! |z^m|^2.
template <typename Weight>
HermitianSeries radial(std::size_t n, unsigned d, Weight weight)
{
    Series::TermMap terms;
    const auto ord = GradedOrder::make(n, d);
    for (unsigned k = 1; k <= d; ++k) {
        const Rational w = weight(k);
        std::vector<MultiIndex> ms;
        std::vector<unsigned> e(n, 0);
        layer(n, k, e, 0, ms);
        for (const auto& m : ms) {
            const auto p = std::uint32_t(ord->position(m));
            terms.emplace(Series::Key{p, p}, Coefficient(w * factorial(k) / m.factorial()));
        }
    }
    return HermitianSeries(Series(n, d, d, std::move(terms)));
}

std::size_t parse_dimension(std::string_view s, std::string_view name)
{
    std::size_t n = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9')
            throw ParseError("builtin " + std::string(name) + ": bad dimension '" + std::string(s) + "'");
        n = n * 10 + std::size_t(ch - '0');
    }
    if (s.empty() || n == 0 || n > 8)
        throw ParseError("builtin " + std::string(name) + ": dimension must be 1..8");
    return n;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')')
            --depth;
        else if (s[i] == sep && depth == 0) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

HermitianSeries product(const std::vector<HermitianSeries>& parts, unsigned d)
{
    std::size_t total = 0;
    for (const auto& p : parts)
        total += p.n();
    HermitianSeries out(total, d);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        out = out + embed(p, total, offset);
        offset += p.n();
    }
    return out;
}

Rational json_rational(const Json& v, const std::string& where)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long>());
    throw ParseError(where + ": rationals must be \"p/q\" strings or integers");
}

MultiIndex json_index(const Json& v, std::size_t n, const std::string& where)
{
    if (!v.is_array() || v.size() != n)
        throw ParseError(where + ": multi-index must be an array of " + std::to_string(n) + " exponents");
    std::vector<unsigned> e;
    for (const auto& x : v) {
        if (!x.is_number_unsigned())
            throw ParseError(where + ": exponents must be nonnegative integers");
        e.push_back(x.get<unsigned>());
    }
    return MultiIndex(e);
}

using TermList = std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>>;

HermitianSeries at_order(std::size_t n, unsigned stored, const TermList& terms, unsigned d, bool polynomial,
    const std::string& source)
{
    if (d <= stored)
        return HermitianSeries::from_terms(n, stored, terms).truncated(d);
    if (!polynomial)
        throw DomainError(source + ": potential is stored through order " + std::to_string(stored)
            + " but order " + std::to_string(d) + " was requested");
    return HermitianSeries::from_terms(n, d, terms);
}

} // namespace

HermitianSeries builtin_potential(std::string_view name, unsigned d)
{
    if (name.starts_with("product(") && name.ends_with(")")) {
        const auto inner = name.substr(8, name.size() - 9);
        std::vector<HermitianSeries> parts;
        for (auto part : split(inner, ';'))
            parts.push_back(builtin_potential(part, d));
        if (parts.size() < 2)
            throw ParseError("builtin product needs at least two factors");
        return product(parts, d);
    }
    if (name == "perturbed_quartic")
        return radial(1, d, [](unsigned k) { return k == 1 ? Rational(1) : k == 2 ? Rational(-1, 4) : Rational(0); });

    const auto fields = split(name, ':');
    const auto kind = fields[0];
    if (fields.size() < 2)
        throw ParseError("unknown potential '" + std::string(name) + "'");
    const std::size_t n = parse_dimension(fields[1], kind);
    const Rational scale = fields.size() > 2 ? parse_rational(fields[2]) : Rational(1);
    if (fields.size() > 3 || (fields.size() > 2 && (kind == "flat" || kind == "zero")))
        throw ParseError("builtin " + std::string(kind) + ": too many parameters");
    if (sgn(scale) <= 0)
        throw ParseError("builtin " + std::string(kind) + ": scale must be positive");

    if (kind == "flat")
        return radial(n, d, [](unsigned k) { return k == 1 ? Rational(1) : Rational(0); });
    if (kind == "zero")
        return HermitianSeries(n, d);
    if (kind == "fs" || kind == "fubini_study")
        return radial(n, d, [&](unsigned k) -> Rational { return scale * Rational(k % 2 == 1 ? 1 : -1, k); });
    if (kind == "hyp" || kind == "hyperbolic")
        return radial(n, d, [&](unsigned k) -> Rational { return scale / k; });
    throw ParseError("unknown potential kind '" + std::string(kind) + "'");
}

const std::vector<std::string>& corpus_names()
{
    static const std::vector<std::string> names{"flat:1", "flat:2", "fs:1", "fs:2", "fs:1:1/2", "hyp:1", "hyp:1:1/2",
        "hyp:2", "perturbed_quartic", "product(fs:1;flat:1)"};
    return names;
}

ParsedPotential parse_potential_text(std::string_view text, unsigned d, std::string source)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError(source + ": top level must be an object");
    if (!doc.contains("version") || doc["version"] != 1)
        throw ParseError(source + ": unsupported or missing version (expected 1)");

    HermitianSeries series(1, 0);
    if (doc.contains("builtin")) {
        if (!doc["builtin"].is_string())
            throw ParseError(source + ": builtin must be a string");
        series = builtin_potential(doc["builtin"].get<std::string>(), d);
    } else {
        if (!doc.contains("n") || !doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() == 0)
            throw ParseError(source + ": n must be a positive integer");
        if (!doc.contains("d") || !doc["d"].is_number_unsigned())
            throw ParseError(source + ": d must be a nonnegative integer");
        if (!doc.contains("terms") || !doc["terms"].is_array())
            throw ParseError(source + ": terms must be an array");
        const auto n = doc["n"].get<std::size_t>();
        const auto file_d = doc["d"].get<unsigned>();
        bool polynomial = false;
        if (doc.contains("polynomial")) {
            if (!doc["polynomial"].is_boolean())
                throw ParseError(source + ": polynomial must be true or false");
            polynomial = doc["polynomial"].get<bool>();
        }

        std::map<std::pair<MultiIndex, MultiIndex>, std::pair<Coefficient, std::size_t>> seen;
        std::size_t index = 0;
        for (const auto& t : doc["terms"]) {
            const std::string where = source + ": term " + std::to_string(index);
            if (!t.is_object() || !t.contains("m") || !t.contains("k") || !t.contains("re"))
                throw ParseError(where + ": needs m, k and re");
            const auto m = json_index(t["m"], n, where);
            const auto k = json_index(t["k"], n, where);
            if (m.degree() > file_d || k.degree() > file_d)
                throw ParseError(where + ": " + to_string(m) + "x" + to_string(k) + " exceeds d = " + std::to_string(file_d));
            const Coefficient c(json_rational(t["re"], where), t.contains("im") ? json_rational(t["im"], where) : Rational(0));
            if (!seen.emplace(std::pair{m, k}, std::pair{c, index}).second)
                throw ParseError(where + ": duplicate term " + to_string(m) + "x" + to_string(k));
            ++index;
        }
        TermList terms;
        for (const auto& [mk, value] : seen) {
            const auto& [m, k] = mk;
            const auto partner = seen.find({k, m});
            const std::string pair = to_string(m) + "x" + to_string(k) + " and " + to_string(k) + "x" + to_string(m);
            if (partner == seen.end())
                throw ParseError(source + ": hermitian violation: term " + std::to_string(value.second) + " "
                    + to_string(m) + "x" + to_string(k) + " has no conjugate partner " + to_string(k) + "x" + to_string(m));
            if (!(partner->second.first == value.first.conj()))
                throw ParseError(source + ": hermitian violation: terms " + pair + " (terms "
                    + std::to_string(value.second) + ", " + std::to_string(partner->second.second)
                    + ") are not conjugate");
            terms.emplace_back(m, k, value.first);
        }
        series = at_order(n, file_d, terms, d, polynomial, source);
    }
    const bool kahler = series.bound() >= 1 && is_kahler_at_origin(series);
    return ParsedPotential{std::move(source), std::move(series), kahler};
}

ParsedPotential parse_potential(std::string_view arg, unsigned d)
{
    const std::filesystem::path path{std::string(arg)};
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ParseError("cannot read " + path.string());
        std::ostringstream text;
        text << in.rdbuf();
        return parse_potential_text(text.str(), d, path.string());
    }
    auto series = builtin_potential(arg, d);
    const bool kahler = d >= 1 && is_kahler_at_origin(series);
    return ParsedPotential{std::string(arg), std::move(series), kahler};
}

std::string serialize_potential(const HermitianSeries& s)
{
    Json doc;
    doc["version"] = 1;
    doc["n"] = s.n();
    doc["d"] = s.bound();
    doc["polynomial"] = s.is_polynomial();
    Json terms = Json::array();
    const auto& ord = s.order();
    for (const auto& [key, c] : s.terms()) {
        Json t;
        t["m"] = ord.monomial(key.first).exponents();
        t["k"] = ord.monomial(key.second).exponents();
        t["re"] = to_string(c.re);
        t["im"] = to_string(c.im);
        terms.push_back(std::move(t));
    }
    doc["terms"] = std::move(terms);
    return doc.dump(2) + "\n";
}

} // namespace diastasis
