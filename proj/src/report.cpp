#include "diastasis/report.hpp"

#include <array>

#include <openssl/evp.h>

#include "diastasis/errors.hpp"

namespace diastasis::report {

std::string sha256_hex(std::string_view bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw InvariantError("sha256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

Json conventions()
{
    Json c;
    c["monomial_order"] = "graded, then lexicographic with z_1 most significant; position 0 is the constant monomial";
    c["metric"] = "g_ab = d^2 phi / dz_a dzbar_b";
    c["ricci_potential"] = "-2 log(det g / det g(0)), diastasis-normalized; Einstein means ricci_potential = lambda * phi";
    c["cone_potential"] = "|z0|^(2c) exp(c psi), c = 1/a";
    c["epsilon_constant"] = "D_q carries the additive constant eps^(2c) so that it vanishes at its center";
    c["verdicts"] = "NotInduced is conclusive for every higher order; ConsistentUpTo only reports the absence of an obstruction through the stated order";
    return c;
}

Json rational(const Rational& r)
{
    return to_string(r);
}

Json monomial(const MultiIndex& m)
{
    return m.exponents();
}

Json witness(const NegativityWitness& w, const GradedOrder& order)
{
    Json re = Json::array(), im = Json::array(), support = Json::array();
    for (std::size_t i = 0; i < w.vector.size(); ++i) {
        const auto& c = w.vector[i];
        if (c.re.get_den() != 1 || c.im.get_den() != 1)
            throw InvariantError("witness entry is not a Gaussian integer");
        re.push_back(c.re.get_num().get_str());
        im.push_back(c.im.get_num().get_str());
        if (!c.is_zero())
            support.push_back(monomial(order.monomial(i)));
    }
    Json out;
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    out["support"] = std::move(support);
    out["value"] = rational(w.value);
    return out;
}

Json verdict(const InducibilityVerdict& v, const GradedOrder& order)
{
    Json out;
    if (const auto* ni = std::get_if<NotInduced>(&v)) {
        out["class"] = "NotInduced";
        out["order"] = ni->order;
        out["conclusive"] = true;
        if (ni->radial_weight)
            out["radial_weight"] = *ni->radial_weight;
        out["witness"] = witness(ni->witness, order);
    } else {
        const auto& c = std::get<ConsistentUpTo>(v);
        out["class"] = "ConsistentUpTo";
        out["order"] = c.order;
        out["conclusive"] = false;
        out["rank_lower_bound"] = c.rank_lower_bound;
    }
    return out;
}

Json psd(const PsdVerdict& v, const GradedOrder& order)
{
    Json out;
    if (const auto* cert = std::get_if<PsdCertificate>(&v)) {
        out["psd"] = true;
        out["rank"] = cert->rank;
        Json pivots = Json::array();
        for (std::size_t i = 0; i < cert->factor.pivot_index.size(); ++i)
            pivots.push_back(Json::array({cert->factor.pivot_index[i], rational(cert->factor.pivot[i])}));
        out["pivots"] = std::move(pivots);
    } else {
        out["psd"] = false;
        out["witness"] = witness(std::get<NegativityWitness>(v), order);
    }
    return out;
}

Json input(const ParsedPotential& p)
{
    Json out;
    out["source"] = p.source;
    out["n"] = p.series.n();
    out["d"] = p.series.bound();
    out["kahler_at_origin"] = p.kahler_at_origin;
    out["sha256"] = sha256_hex(serialize_potential(p.series));
    return out;
}

std::string verdict_label(const InducibilityVerdict& v)
{
    if (const auto* ni = std::get_if<NotInduced>(&v))
        return "NotInduced(" + std::to_string(ni->order) + ")";
    return "ConsistentUpTo(" + std::to_string(std::get<ConsistentUpTo>(v).order) + ")";
}

} // namespace diastasis::report
