///
/// \file approx.hpp
///
/// Subspace approximation with Slepian bases: Kolmogorov n-widths,
/// effective dimensionality, mean-square and uniform representation of
/// time-limited characters, and Monte-Carlo validation of the random-signal
/// residual.
///
#ifndef PROLATE_APPROX_HPP
#define PROLATE_APPROX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prolate/errors.hpp"
#include "prolate/group.hpp"
#include "prolate/quadrature.hpp"
#include "prolate/spectral.hpp"
#include "prolate/symbol.hpp"
#include "prolate/toeplitz.hpp"

namespace prolate
{

/// Default seed for Monte-Carlo validation runs.
inline constexpr std::uint64_t kDefaultSeed = 20170523;

///
/// First n eigenvectors of a time-frequency limiting operator.
///
template <typename Real = double>
struct SlepianBasis
{
    ComplexMatrix<Real> vectors; ///< dimension x n, orthonormal columns
    RealVector<Real> eigenvalues;
    std::string source;
    GroupSpec group;
    std::array<Index, 2> shape{0, 1};

    Index dimension() const
    {
        return vectors.rows();
    }

    Index rank() const
    {
        return vectors.cols();
    }

    ComplexMatrix<Real> projector() const
    {
        return vectors * vectors.adjoint();
    }

    ComplexVector<Real> project(const ComplexVector<Real>& x) const
    {
        return vectors * (vectors.adjoint() * x);
    }
};

template <typename Real>
SlepianBasis<Real> make_slepian_basis(const EigenDecomposition<Real>& dec, Index n)
{
    if (!dec.has_vectors())
    {
        throw ConfigError("make_slepian_basis: decomposition has no eigenvectors");
    }
    if (n < 0 || n > dec.size())
    {
        throw IndexError("make_slepian_basis: n=" + std::to_string(n) + " outside [0, " +
                         std::to_string(dec.size()) + "]");
    }
    SlepianBasis<Real> b;
    b.vectors     = dec.eigenvectors.leftCols(n);
    b.eigenvalues = dec.eigenvalues.head(n);
    b.source      = dec.source;
    b.group       = dec.group;
    b.shape       = dec.shape;
    if (b.shape[0] * b.shape[1] != b.vectors.rows())
    {
        b.shape = {b.vectors.rows(), 1};
    }
    return b;
}

/// Kolmogorov n-width d_n = sqrt(lambda_n) (0-based n).
template <typename Real>
Real n_width(const EigenDecomposition<Real>& dec, Index n)
{
    if (n < 0 || n >= dec.size())
    {
        throw IndexError("n_width: index " + std::to_string(n) + " outside [0, " +
                         std::to_string(dec.size()) + ")");
    }
    const Real l = dec.eigenvalues[n];
    if (l < Real(-1e-10))
    {
        throw NumericError("n_width: eigenvalue lambda_" + std::to_string(n) + " = " +
                           std::to_string(l) + " is negative; operator is not PSD");
    }
    return std::sqrt(std::max(l, Real(0)));
}

/// min{n : d_n < eps}; the dimension when no width drops below eps.
template <typename Real>
Index effective_dimension(const EigenDecomposition<Real>& dec, Real eps)
{
    if (!(eps > 0))
    {
        throw ParameterError("effective_dimension: eps must be positive");
    }
    for (Index n = 0; n < dec.size(); ++n)
    {
        if (std::sqrt(std::max(dec.eigenvalues[n], Real(0))) < eps)
        {
            return n;
        }
    }
    return dec.size();
}

template <typename Real = double>
struct DofRow
{
    Index n           = 0;
    Index eff_dim     = 0;
    Real ratio        = 0; ///< eff_dim / n
    Real gap          = 0; ///< |ratio - limit|
};

template <typename Real = double>
struct DofStudy
{
    std::vector<DofRow<Real>> rows;
    Real limit = 0; ///< nu{f : |phi^(f)| > eps} measured on the grid
    Real eps   = 0;
};

namespace detail
{

template <typename Real>
Real level_measure(const SymbolGrid<Real>& pulse, Real eps)
{
    const auto mag     = pulse.samples().cwiseAbs();
    const Index g      = pulse.grid_size();
    const Real tol     = Real(1e-12) * std::max(Real(1), eps);
    Index on_level     = 0;
    Index above        = 0;
    for (Index m = 0; m < g; ++m)
    {
        on_level += std::abs(mag[m] - eps) <= tol;
        above += mag[m] > eps;
    }
    if (on_level > 2 && on_level * 1000 > g)
    {
        throw HypothesisError("dof_convergence_study: eps=" + std::to_string(eps) +
                              " is a flat level of |phi^| (" + std::to_string(on_level) +
                              " of " + std::to_string(g) + " grid points)");
    }
    return static_cast<Real>(above) / static_cast<Real>(g);
}

template <typename Real, typename BuildOp>
DofStudy<Real> dof_study(Real limit, Real eps, const std::vector<Index>& sizes, BuildOp&& build)
{
    DofStudy<Real> study;
    study.limit = limit;
    study.eps   = eps;
    for (Index n : sizes)
    {
        const auto dec = eig_hermitian(build(n), EigenOptions{false});
        DofRow<Real> row;
        row.n       = n;
        row.eff_dim = effective_dimension(dec, eps);
        row.ratio   = static_cast<Real>(row.eff_dim) / static_cast<Real>(n);
        row.gap     = std::abs(row.ratio - limit);
        study.rows.push_back(row);
    }
    return study;
}

} // namespace detail

///
/// Effective dimension per N of the signal set controlled by |phi^|, against
/// its limit nu{|phi^| > eps}.
///
template <typename Real>
DofStudy<Real> dof_convergence_study(const SymbolGrid<Real>& pulse, Real eps,
                                     const std::vector<Index>& sizes)
{
    if (!(eps > 0))
    {
        throw ParameterError("dof_convergence_study: eps must be positive");
    }
    const Real limit = detail::level_measure(pulse, eps);
    return detail::dof_study<Real>(limit, eps, sizes,
                                   [&](Index n) { return autocorrelation_operator(pulse, n); });
}

/// Closed-form pulse: exact operators, limit measured on a grid of `grid_size`.
template <typename Real>
DofStudy<Real> dof_convergence_study(const Symbol<Real>& pulse, Real eps,
                                     const std::vector<Index>& sizes, Index grid_size = 1 << 16)
{
    if (!(eps > 0))
    {
        throw ParameterError("dof_convergence_study: eps must be positive");
    }
    const Real limit = detail::level_measure(SymbolGrid<Real>::sample(pulse, grid_size), eps);
    return detail::dof_study<Real>(limit, eps, sizes,
                                   [&](Index n) { return autocorrelation_operator(pulse, n); });
}

namespace detail
{

/// Mean over band nodes of 1 - ||U^H e_f||^2 / ||e_f||^2 for e_f[n] = exp(j 2 pi f n).
template <typename Real>
Real band_average_residual_1d(const ComplexMatrix<Real>& basis, const QuadratureRule<Real>& rule,
                              Real band_measure)
{
    const Index n = basis.rows();
    Real acc      = 0;
    const Index chunk = 256;
    for (Index start = 0; start < rule.size(); start += chunk)
    {
        const Index len = std::min(chunk, rule.size() - start);
        ComplexMatrix<Real> e(n, len);
        for (Index j = 0; j < len; ++j)
        {
            for (Index t = 0; t < n; ++t)
            {
                e(t, j) = unit_phase<Real>(rule.nodes[start + j] * static_cast<Real>(t));
            }
        }
        const RealVector<Real> captured = (basis.adjoint() * e).colwise().squaredNorm().transpose();
        for (Index j = 0; j < len; ++j)
        {
            acc += rule.weights[start + j] * (Real(1) - captured[j] / static_cast<Real>(n));
        }
    }
    return acc / band_measure;
}

} // namespace detail

///
/// Band-averaged normalized residual of time-limited characters,
///   (1/|B|) int_B ||chi - P chi||^2 / ||chi||^2 dxi,
/// by composite Gauss-Legendre quadrature with at least `nodes` nodes per
/// band dimension (circle bands), or exactly (index bands on Z_N).
///
template <typename Real>
Real character_approx_mse(const SlepianBasis<Real>& basis, const BandSpec& band, Index nodes)
{
    const Index dim = basis.dimension();
    band_measure(basis.group, band); // throws on group/band mismatch
    switch (band.kind)
    {
    case BandKind::SymmetricBand:
    {
        if (nodes < 16 * dim)
        {
            throw ResolutionError("character_approx_mse: need >= 16 * dimension nodes");
        }
        const Real w   = static_cast<Real>(band.width[0]);
        const auto rule = composite_gauss_legendre<Real>(-w, w, (nodes + 7) / 8, 8);
        return detail::band_average_residual_1d(basis.vectors, rule, Real(2) * w);
    }
    case BandKind::IndexBlock:
    {
        const Index N = basis.group.modulus;
        Real acc      = 0;
        ComplexVector<Real> chi(dim);
        for (Index k = 0; k < band.count; ++k)
        {
            const Index kk = (band.offset + k) % N;
            for (Index t = 0; t < dim; ++t)
            {
                chi[t] = detail::unit_phase<Real>(static_cast<Real>((kk * t) % N) / static_cast<Real>(N));
            }
            const Real captured = (basis.vectors.adjoint() * chi).squaredNorm();
            acc += Real(1) - captured / static_cast<Real>(dim);
        }
        return acc / static_cast<Real>(band.count);
    }
    case BandKind::ProductBand:
    {
        const Index n1 = basis.shape[0];
        const Index n2 = basis.shape[1];
        if (nodes < 16 * std::max(n1, n2))
        {
            throw ResolutionError("character_approx_mse: need >= 16 * max(N1, N2) nodes per axis");
        }
        const Real w1 = static_cast<Real>(band.width[0]);
        const Real w2 = static_cast<Real>(band.width[1]);
        const auto r1 = composite_gauss_legendre<Real>(-w1, w1, (nodes + 7) / 8, 8);
        const auto r2 = composite_gauss_legendre<Real>(-w2, w2, (nodes + 7) / 8, 8);
        Real acc      = 0;
        ComplexVector<Real> chi(dim);
        for (Index a = 0; a < r1.size(); ++a)
        {
            for (Index b = 0; b < r2.size(); ++b)
            {
                for (Index i = 0; i < n1; ++i)
                {
                    for (Index j = 0; j < n2; ++j)
                    {
                        chi[i * n2 + j] = detail::unit_phase<Real>(r1.nodes[a] * static_cast<Real>(i) +
                                                           r2.nodes[b] * static_cast<Real>(j));
                    }
                }
                const Real captured = (basis.vectors.adjoint() * chi).squaredNorm();
                acc += r1.weights[a] * r2.weights[b] * (Real(1) - captured / static_cast<Real>(dim));
            }
        }
        return acc / (Real(4) * w1 * w2);
    }
    }
    throw ConfigError("character_approx_mse: unknown band kind");
}

/// Closed form of the band-averaged residual: 1 - sum_{l<n} lambda_l / (|A| |B|).
template <typename Real>
Real random_residual(const EigenDecomposition<Real>& dec, Index n, Index domain_size,
                     Real band_measure_value)
{
    if (n < 0 || n > dec.size())
    {
        throw IndexError("random_residual: n outside [0, " + std::to_string(dec.size()) + "]");
    }
    if (!(band_measure_value > 0) || domain_size < 1)
    {
        throw ParameterError("random_residual: |A| and |B| must be positive");
    }
    const Real area = static_cast<Real>(domain_size) * band_measure_value;
    const Real head = Real(1) - dec.eigenvalues.head(n).sum() / area;
    if (dec.size() == domain_size && head < Real(0.5))
    {
        // The eigenvalues sum to the trace, so the residual is also
        // (area - trace + sum_{l >= n} lambda_l) / area. This tail form does
        // not cancel when the residual is small.
        return (area - dec.trace + dec.eigenvalues.tail(dec.size() - n).sum()) / area;
    }
    return head;
}

template <typename Real = double>
struct MonteCarloEstimate
{
    Real mean      = 0;
    Real std_error = 0;
    Index draws    = 0;
    std::uint64_t seed = 0;
};

///
/// Monte-Carlo estimate of E||x - P x||^2 / E||x||^2 for x = chi_xi restricted
/// to the window with xi uniform on the band.
///
template <typename Real>
MonteCarloEstimate<Real> random_residual_monte_carlo(const SlepianBasis<Real>& basis,
                                                     const BandSpec& band, Index draws,
                                                     std::uint64_t seed = kDefaultSeed)
{
    if (draws < 2)
    {
        throw ParameterError("random_residual_monte_carlo: need at least two draws");
    }
    band_measure(basis.group, band);
    const Index dim = basis.dimension();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<Real> u01(Real(0), Real(1));
    ComplexVector<Real> chi(dim);
    Real sum  = 0;
    Real sum2 = 0;
    for (Index d = 0; d < draws; ++d)
    {
        switch (band.kind)
        {
        case BandKind::SymmetricBand:
        {
            const Real f = static_cast<Real>(band.width[0]) * (Real(2) * u01(rng) - Real(1));
            for (Index t = 0; t < dim; ++t)
            {
                chi[t] = detail::unit_phase<Real>(f * static_cast<Real>(t));
            }
            break;
        }
        case BandKind::IndexBlock:
        {
            const Index N  = basis.group.modulus;
            const auto pick = std::min<Index>(band.count - 1,
                                              static_cast<Index>(u01(rng) * static_cast<Real>(band.count)));
            const Index k  = (band.offset + pick) % N;
            for (Index t = 0; t < dim; ++t)
            {
                chi[t] = detail::unit_phase<Real>(static_cast<Real>((k * t) % N) / static_cast<Real>(N));
            }
            break;
        }
        case BandKind::ProductBand:
        {
            const Real f1  = static_cast<Real>(band.width[0]) * (Real(2) * u01(rng) - Real(1));
            const Real f2  = static_cast<Real>(band.width[1]) * (Real(2) * u01(rng) - Real(1));
            const Index n2 = basis.shape[1];
            for (Index t = 0; t < dim; ++t)
            {
                chi[t] = detail::unit_phase<Real>(f1 * static_cast<Real>(t / n2) +
                                                  f2 * static_cast<Real>(t % n2));
            }
            break;
        }
        }
        // residual vector rather than 1 - ||U^H chi||^2 / dim, which cancels
        // to rounding error once the residual is tiny
        const ComplexVector<Real> coeff = basis.vectors.adjoint() * chi;
        const Real r = (chi - basis.vectors * coeff).squaredNorm() / static_cast<Real>(dim);
        sum += r;
        sum2 += r * r;
    }
    MonteCarloEstimate<Real> est;
    const Real nd  = static_cast<Real>(draws);
    est.mean       = sum / nd;
    const Real var = std::max(Real(0), (sum2 - nd * est.mean * est.mean) / (nd - Real(1)));
    est.std_error  = std::sqrt(var / nd);
    est.draws      = draws;
    est.seed       = seed;
    return est;
}

///
/// Fraction of the DTFT energy of `u` inside [-W, W]:
///   int_{-W}^{W} |U(f)|^2 df / ||u||^2,  U(f) = sum_n u[n] exp(-j 2 pi f n).
///
template <typename Real>
Real band_energy_fraction(const ComplexVector<Real>& u, Real w, Index nodes)
{
    BandSpec::check_width(static_cast<double>(w));
    const Index n   = u.size();
    const auto rule = composite_gauss_legendre<Real>(-w, w, std::max<Index>(1, (nodes + 7) / 8), 8);
    Real acc        = 0;
    for (Index i = 0; i < rule.size(); ++i)
    {
        std::complex<Real> s(0);
        for (Index t = 0; t < n; ++t)
        {
            s += u[t] * detail::unit_phase<Real>(-rule.nodes[i] * static_cast<Real>(t));
        }
        acc += rule.weights[i] * std::norm(s);
    }
    return acc / u.squaredNorm();
}

template <typename Real = double>
struct SinusoidK
{
    Index k            = 0;
    Real max_residual  = 0; ///< worst-case residual over the grid at k
    bool saturated     = false;
};

///
/// Smallest K such that max_f ||e_f - S_K S_K^* e_f||^2 / N <= eps over a
/// uniform grid of `f_grid` frequencies covering [-W, W], where S_K holds the
/// first K DPSS vectors.
///
template <typename Real = double>
SinusoidK<Real> uniform_sinusoid_K(Index n, Real w, Real eps, Index f_grid)
{
    if (!(eps > 0 && eps < Real(0.5)))
    {
        throw ParameterError("uniform_sinusoid_K: eps must lie in (0, 1/2)");
    }
    if (f_grid < 64 * n)
    {
        throw ResolutionError("uniform_sinusoid_K: need >= 64 N grid frequencies");
    }
    using Mat       = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    const auto dpss = dpss_basis<Real>(n, w, n, DpssMethod::Tridiagonal);
    const Mat s     = dpss.eigenvectors.real();
    const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
    const Real nn     = static_cast<Real>(n);

    Index cap = std::min<Index>(n, static_cast<Index>(std::ceil(Real(2) * nn * w)) + 32);
    for (;;)
    {
        // worst[K] = max_f residual with the first K vectors
        RealVector<Real> worst = RealVector<Real>::Zero(cap + 1);
        worst[0]               = 1;
        const Mat st           = s.leftCols(cap).transpose();
        const Index chunk      = 1024;
        for (Index start = 0; start < f_grid; start += chunk)
        {
            const Index len = std::min(chunk, f_grid - start);
            Mat c(n, len);
            Mat sn(n, len);
            for (Index j = 0; j < len; ++j)
            {
                const Real f = -w + Real(2) * w * static_cast<Real>(start + j) /
                                        static_cast<Real>(f_grid - 1);
                for (Index t = 0; t < n; ++t)
                {
                    const Real a = two_pi * canonical_frequency(f * static_cast<Real>(t));
                    c(t, j)      = std::cos(a);
                    sn(t, j)     = std::sin(a);
                }
            }
            const Mat energy = (st * c).array().square() + (st * sn).array().square();
            for (Index j = 0; j < len; ++j)
            {
                Real captured = 0;
                for (Index k = 1; k <= cap; ++k)
                {
                    captured += energy(k - 1, j);
                    worst[k] = std::max(worst[k], Real(1) - captured / nn);
                }
            }
        }
        for (Index k = 0; k <= cap; ++k)
        {
            if (worst[k] <= eps)
            {
                return {k, worst[k], false};
            }
        }
        if (cap == n)
        {
            return {n, worst[n], true};
        }
        cap = std::min(n, 2 * cap);
    }
}

} // namespace prolate

#endif // PROLATE_APPROX_HPP
