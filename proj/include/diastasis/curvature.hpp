#pragma once

// Metric and Ricci data of truncated Kähler potentials.
//
// Convention: g_{ab} = d^2 phi / dz_a dzbar_b and
// ricci_potential = -2 log(det g / det g(0)), diastasis-normalized, so that the
// Einstein condition reads ricci_potential = lambda * normalize(phi).

#include <optional>
#include <string>
#include <vector>

#include "diastasis/cone.hpp"
#include "diastasis/rational.hpp"
#include "diastasis/series.hpp"

namespace diastasis {

struct MetricSeries {
    std::size_t n = 0;
    unsigned d = 0;
    /// entries[a][b] = d^2 phi / dz_a dzbar_b; entries[b][a] is its conjugate.
    std::vector<std::vector<Series>> entries;
};

/// Requires phi.bound() >= d + 1 and a positive definite metric at 0.
MetricSeries metric_from_potential(const HermitianSeries& phi, unsigned d);

/// det g by cofactor expansion, truncated at g.d.
HermitianSeries metric_determinant(const MetricSeries& g);

struct RicciReport {
    unsigned d = 0;
    HermitianSeries ricci_potential;
    std::optional<Rational> lambda;
    /// ricci_potential - lambda * normalize(phi); ricci_potential when lambda is absent.
    HermitianSeries residual;
    /// Lowest term where no single lambda fits, as "(m)x(k)".
    std::optional<std::string> first_mismatch;
};

RicciReport ricci_report(const HermitianSeries& phi, unsigned d);

struct RicciFlatness {
    bool flat = false;
    HermitianSeries residual;
};

RicciFlatness ricci_flat_check(const HermitianSeries& phi, unsigned d);

/// |z0|^{2c} e^{c psi} expanded about (z0, z) = (1, 0); c must be an integer.
RicciFlatness ricci_flat_check(const ConePotential& cp, unsigned d);

struct BridgeReport {
    Rational c;
    std::size_t n = 0;
    unsigned d = 0;
    std::optional<Rational> lambda_base;
    bool base_is_ke_2n2 = false;
    bool cone_ricci_flat = false;
    /// base_is_ke_2n2 == cone_ricci_flat.
    bool consistent = false;
};

/// Base side: lambda of c psi with c = 1/a. Cone side: |z0|^2 e^{c psi}.
BridgeReport sasaki_einstein_bridge(const HermitianSeries& psi, const Rational& a, unsigned d);

} // namespace diastasis
