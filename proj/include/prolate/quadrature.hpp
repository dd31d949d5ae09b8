///
/// \file quadrature.hpp
///
/// Composite Gauss-Legendre rules for band integrals of trigonometric
/// polynomials.
///
#ifndef PROLATE_QUADRATURE_HPP
#define PROLATE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "prolate/errors.hpp"

namespace prolate
{

template <typename Real>
struct QuadratureRule
{
    Eigen::Matrix<Real, Eigen::Dynamic, 1> nodes;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> weights;

    Eigen::Index size() const
    {
        return nodes.size();
    }
};

/// n-point Gauss-Legendre rule on [-1, 1] by the Golub-Welsch eigenvalue method.
template <typename Real = double>
QuadratureRule<Real> gauss_legendre(Eigen::Index n)
{
    if (n < 1)
    {
        throw ParameterError("gauss_legendre: need at least one node");
    }
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> diag = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(n);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 1; k < n; ++k)
    {
        const Real kk = static_cast<Real>(k);
        sub[k - 1]    = kk / std::sqrt(Real(4) * kk * kk - Real(1));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadratureRule<Real> rule;
    rule.nodes   = es.eigenvalues();
    rule.weights = Real(2) * es.eigenvectors().row(0).transpose().array().square();
    return rule;
}

/// Composite rule on [a, b]: `panels` equal panels with `order` nodes each.
template <typename Real = double>
QuadratureRule<Real> composite_gauss_legendre(Real a, Real b, Eigen::Index panels,
                                              Eigen::Index order = 8)
{
    if (panels < 1 || !(b > a))
    {
        throw ParameterError("composite_gauss_legendre: need b > a and panels >= 1");
    }
    const auto base = gauss_legendre<Real>(order);
    QuadratureRule<Real> rule;
    rule.nodes.resize(panels * order);
    rule.weights.resize(panels * order);
    const Real h = (b - a) / static_cast<Real>(panels);
    for (Eigen::Index p = 0; p < panels; ++p)
    {
        const Real mid = a + h * (static_cast<Real>(p) + Real(0.5));
        for (Eigen::Index i = 0; i < order; ++i)
        {
            rule.nodes[p * order + i]   = mid + Real(0.5) * h * base.nodes[i];
            rule.weights[p * order + i] = Real(0.5) * h * base.weights[i];
        }
    }
    return rule;
}

} // namespace prolate

#endif // PROLATE_QUADRATURE_HPP
