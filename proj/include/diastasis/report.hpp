#pragma once

// Structured report pieces shared by the CLI and the Python bindings.
// Every value is exact: rationals are "p/q" strings and witness entries are
// integer strings, so equal inputs give byte-identical documents.

#include <string>
#include <string_view>

#include <json.hpp>

#include "diastasis/calabi.hpp"
#include "diastasis/corpus.hpp"

namespace diastasis::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema = "diastasis-report/1";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Monomial order, metric convention, verdict semantics.
Json conventions();

Json rational(const Rational& r);
Json monomial(const MultiIndex& m);
/// Entries as {"re": [...], "im": [...]} integer strings, indexed like the matrix.
Json witness(const NegativityWitness& w, const GradedOrder& order);
Json verdict(const InducibilityVerdict& v, const GradedOrder& order);
Json psd(const PsdVerdict& v, const GradedOrder& order);
/// Source name, n, d, Kähler flag and the hash of the canonical serialization.
Json input(const ParsedPotential& p);

/// "NotInduced(3)" or "ConsistentUpTo(4)".
std::string verdict_label(const InducibilityVerdict& v);

} // namespace diastasis::report
