#pragma once

// Builtin potentials and the potential file format.
//
// Builtin names:
//   flat:N                      ||z||^2
//   fs:N[:q], fubini_study:...  q log(1 + ||z||^2)
//   hyp:N[:q], hyperbolic:...   -q log(1 - ||z||^2)
//   perturbed_quartic           |z|^2 - |z|^4 / 4
//   zero:N                      0
//   product(A;B;...)            A(z_A) + B(z_B) + ... on disjoint variables
//
// File format (JSON):
//   {"version": 1, "n": 2, "d": 4, "polynomial": false,
//    "terms": [{"m": [1, 0], "k": [1, 0], "re": "1", "im": "0"}, ...]}
// or {"version": 1, "builtin": "fs:2"}. Rationals are "p" or "p/q" strings.
// Every off-diagonal term (m, k) must be listed together with (k, m) and the
// conjugate value. "polynomial": true declares the listed terms exact, which
// allows expansion to any order.

#include <string>
#include <string_view>
#include <vector>

#include "diastasis/series.hpp"

namespace diastasis {

/// Builtin potential at truncation bound d. Throws ParseError on unknown names.
HermitianSeries builtin_potential(std::string_view name, unsigned d);

/// Builtin names used by the acceptance suite and the CLI listing.
const std::vector<std::string>& corpus_names();

struct ParsedPotential {
    std::string source;
    HermitianSeries series;
    bool kahler_at_origin = false;
};

/// Parses file text at bound d. A file series stored at a lower order is
/// accepted only when declared polynomial.
ParsedPotential parse_potential_text(std::string_view text, unsigned d, std::string source = "<text>");

/// Builtin name, or path to a potential file.
ParsedPotential parse_potential(std::string_view arg, unsigned d);

/// Canonical JSON text; parse_potential_text(serialize_potential(s), s.bound()) == s.
std::string serialize_potential(const HermitianSeries& s);

} // namespace diastasis
