#pragma once

// Diastasis normalization, the Calabi coefficient matrix of e^D - 1, and exact
// positive-semidefiniteness certificates.
//
// A potential is projectively induced iff the (infinite) matrix of
// coefficients of e^D - 1 is PSD. At a finite order d only the leading
// principal block is available, so a failure is conclusive while a pass only
// means no obstruction exists through order d.

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "diastasis/rational.hpp"
#include "diastasis/series.hpp"

namespace diastasis {

/// Dense square matrix of Gaussian rationals.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t dim) : dim_(dim), cells_(dim * dim) {}

    std::size_t dim() const { return dim_; }
    Coefficient& operator()(std::size_t i, std::size_t j) { return cells_[i * dim_ + j]; }
    const Coefficient& operator()(std::size_t i, std::size_t j) const { return cells_[i * dim_ + j]; }

    bool is_hermitian() const;
    bool is_diagonal() const;
    HermitianMatrix principal(std::size_t size) const;
    /// v* M v, real for Hermitian M.
    Rational quadratic_form(const std::vector<Coefficient>& v) const;

    bool operator==(const HermitianMatrix& other) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Coefficient> cells_;
};

/// Coefficient matrix (c_{jk}) of z^{m_j} zbar^{m_k} over all |m| <= order.
HermitianMatrix coefficient_matrix(const HermitianSeries& s, unsigned order);

/// M = sum_p pivot_p * col_p col_p^*. The Gram factor is diag(sqrt(pivot)) L^*.
struct LdlFactor {
    std::vector<std::size_t> pivot_index;
    std::vector<Rational> pivot;
    std::vector<std::vector<Coefficient>> column;

    HermitianMatrix reconstruct(std::size_t dim) const;
};

struct PsdCertificate {
    std::size_t rank = 0;
    LdlFactor factor;
};

/// v with v* M v = value < 0; v has Gaussian-integer entries with gcd 1.
struct NegativityWitness {
    std::vector<Coefficient> vector;
    Rational value;
};

using PsdVerdict = std::variant<PsdCertificate, NegativityWitness>;

inline bool is_psd(const PsdVerdict& v)
{
    return std::holds_alternative<PsdCertificate>(v);
}

/// Exact LDL* elimination with symmetric pivoting. Negative pivots and zero
/// pivots with a nonzero row produce a witness.
PsdVerdict psd_check_exact(const HermitianMatrix& m);

struct CalabiMatrix {
    std::shared_ptr<const GradedOrder> order;
    unsigned d = 0;
    HermitianMatrix entries;
};

struct NotInduced {
    unsigned order = 0;
    NegativityWitness witness;
    /// Set when the failing matrix is a radial block of a cone potential.
    std::optional<unsigned> radial_weight;
};

struct ConsistentUpTo {
    unsigned order = 0;
    std::size_t rank_lower_bound = 0;
};

using InducibilityVerdict = std::variant<NotInduced, ConsistentUpTo>;

inline bool is_not_induced(const InducibilityVerdict& v)
{
    return std::holds_alternative<NotInduced>(v);
}

/// Drops pure holomorphic, pure antiholomorphic and constant terms.
HermitianSeries diastasis_normalize(const HermitianSeries& phi);
bool is_diastasis_normalized(const HermitianSeries& phi);

/// Matrix (z_a zbar_b coefficient) of the metric at the origin.
HermitianMatrix metric_at_origin(const HermitianSeries& phi);
bool is_kahler_at_origin(const HermitianSeries& phi);

CalabiMatrix calabi_matrix(const HermitianSeries& diastasis, unsigned d);

InducibilityVerdict inducibility(const HermitianSeries& phi, unsigned d);

struct MultipleSearch {
    std::optional<unsigned> k;
    /// Witness for every multiple tried before k (or all of 1..K when k is absent).
    std::vector<std::pair<unsigned, NotInduced>> failures;
};

/// Smallest k in 1..max_k with inducibility(k * phi, d) not NotInduced.
MultipleSearch find_inducing_multiple(const HermitianSeries& phi, unsigned max_k, unsigned d);

} // namespace diastasis
