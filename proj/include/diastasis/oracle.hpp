#pragma once

// Independent cross-checker for the series kernel.
//
// Nothing here shares arithmetic with series.cpp: expansions use a naive
// exponent-vector representation and plain term-by-term products, and
// derivatives are taken numerically by central differences.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "diastasis/rational.hpp"
#include "diastasis/series.hpp"

namespace diastasis::oracle {

using Point = std::vector<std::complex<double>>;
using ScalarField = std::function<std::complex<double>(std::span<const std::complex<double>>)>;

struct SamplePlan {
    std::vector<Point> points;
    double radius = 1.0;
    double step = 1e-4;
    double tolerance = 1e-6;

    /// step = 1e-4 * radius.
    static SamplePlan make(std::vector<Point> points, double radius, double tolerance = 1e-6);
};

/// d^2 f / dz_alpha dzbar_beta from 4-point central stencils in the real and
/// imaginary directions.
std::complex<double> fd_mixed_second(const ScalarField& f, std::size_t alpha, std::size_t beta,
    std::span<const std::complex<double>> point, double h);

/// Composed expression over fixed series.
class Expr {
public:
    struct Node;

    static Expr base(HermitianSeries s);
    static Expr constant(Rational value);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(const Rational& s, const Expr& a);

    const Node& node() const { return *node_; }

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend Expr exp(const Expr& a);
    friend Expr log(const Expr& a);
    friend Expr pow(const Expr& a, const Rational& r);
};

/// e^a; a must expand with zero constant term.
Expr exp(const Expr& a);
/// log(a); a must expand with constant term 1.
Expr log(const Expr& a);
/// a^r by the generalized binomial series; a must have constant term 1.
Expr pow(const Expr& a, const Rational& r);

/// Term-by-term expansion of expr in n variables truncated at bound d per side.
HermitianSeries brute_expand(const Expr& expr, std::size_t n, unsigned d);

struct CrossCheckReport {
    double max_relative_deviation = 0;
    std::size_t worst_point = 0;
    bool passed = false;
};

/// max |evaluate(symbolic, p) - f(p)| / max(|f(p)|, 1e-12) over the plan.
CrossCheckReport cross_check(const HermitianSeries& symbolic, const ScalarField& f, const SamplePlan& plan);

} // namespace diastasis::oracle
