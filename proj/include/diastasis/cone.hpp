#pragma once

// Kähler cone potentials Phi_c = |z0|^{2c} e^{c psi} over a base potential psi,
// D_a-homothetic rescaling, and the radial-block / epsilon-submatrix analysis
// that ties projective inducibility of the cone to that of c*psi.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "diastasis/calabi.hpp"
#include "diastasis/rational.hpp"
#include "diastasis/series.hpp"

namespace diastasis {

/// Phi_c = |z0|^{2c} e^{c psi}. psi is stored diastasis-normalized: pure terms
/// of the base potential are absorbed by a holomorphic change of z0. The base
/// metric at 0 must be positive semidefinite; psi = 0 is the bare radial cone.
class ConePotential {
public:
    ConePotential(Rational c, HermitianSeries psi);

    const Rational& c() const { return c_; }
    std::size_t n() const { return psi_.n(); }
    const HermitianSeries& psi() const { return psi_; }
    /// exp(c * psi), exact.
    const HermitianSeries& exp_c_psi() const { return exp_c_psi_; }

    bool operator==(const ConePotential& o) const { return c_ == o.c_ && psi_ == o.psi_; }

private:
    Rational c_;
    HermitianSeries psi_;
    HermitianSeries exp_c_psi_;
};

/// Cone over the base with potential psi after rescaling by 1/a: c = 1/a.
ConePotential lift(const HermitianSeries& psi, const Rational& a);

/// D_a-homothety t' = t^a, i.e. c -> c * a with psi unchanged.
ConePotential homothety(const ConePotential& cp, const Rational& a);

/// B_k = (1/k!) * coefficient matrix of exp(k c psi), k = 1..K.
struct RadialBlockMatrix {
    unsigned d = 0;
    std::vector<HermitianMatrix> blocks;
};

RadialBlockMatrix radial_blocks(const ConePotential& cp, unsigned K, unsigned d);

/// NotInduced iff some radial block fails; rank bound is the sum of block ranks.
InducibilityVerdict cone_inducibility(const ConePotential& cp, unsigned K, unsigned d);

struct EpsilonSubmatrix {
    Rational epsilon;
    /// eps^{2c}, exact.
    Rational epsilon_power;
    /// v_{jk}: coefficients of e^{D_q(0,z)} {eps^{2c}(e^{c psi}-1)^2 + e^{c psi}}.
    HermitianMatrix v;
    /// u_{jk} = c^2 eps^{2c-2} v_{jk}.
    HermitianMatrix u;
};

/// eps must be a perfect q-th power when c = p/q so that eps^{2c} is rational.
/// D_q is taken with additive constant eps^{2c} so that it vanishes at its
/// center; any other constant only rescales v by a positive scalar.
EpsilonSubmatrix epsilon_submatrix(const ConePotential& cp, const Rational& epsilon, unsigned d);

/// v at eps = 0: the coefficient matrix of e^{c psi}.
HermitianMatrix epsilon_limit_matrix(const ConePotential& cp, unsigned d);

struct RadialIdentitySample {
    std::vector<std::complex<double>> point;
    std::complex<double> finite_difference;
    std::complex<double> closed_form;
    double relative_error = 0;
};

struct RadialIdentityReport {
    double tolerance = 0;
    std::vector<RadialIdentitySample> samples;
    bool passed = false;
};

/// Compares d^2/dz0 dzbar0 (e^{D_q} - 1) at z0 = 0, by central differences,
/// with c^2 eps^{2c-2} e^{D_q(0,z)} {eps^{2c}(e^{c psi}-1)^2 + e^{c psi}}.
RadialIdentityReport verify_radial_derivative_identity(const ConePotential& cp, double epsilon,
    const std::vector<std::vector<std::complex<double>>>& samples, double tolerance = 1e-6);

/// Full D_q(z0, z) = |z0+eps|^{2c} e^{c psi} - eps^c (z0+eps)^c - eps^c (zbar0+eps)^c + eps^{2c}
/// as a series in n+1 variables (z0 first). Requires integer c.
HermitianSeries cone_diastasis_series(const ConePotential& cp, const Rational& epsilon, unsigned d);

/// |z0 + center|^{2c} e^{c psi} in n+1 variables, expanded about (center, 0).
/// Requires integer c.
HermitianSeries cone_potential_series(const ConePotential& cp, const Rational& center, unsigned d);

struct FlatnessReport {
    bool flat = false;
    std::optional<HermitianSeries> substituted;
    std::string reason;
};

/// Applies z_j -> z_j / z0 to |z0|^{2c} e^{c psi} and compares with
/// |z0|^2 + |z_1|^2 + ... + |z_n|^2.
FlatnessReport flatness_witness(const ConePotential& cp, unsigned d = 4);

} // namespace diastasis
