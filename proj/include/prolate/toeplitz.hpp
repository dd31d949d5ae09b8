///
/// \file toeplitz.hpp
///
/// Hermitian time-limited Toeplitz operators T[m, n] = h[m - n] and the
/// factories that build them from band-limiting kernels, impulse responses,
/// symbols and pulse autocorrelations.
///
#ifndef PROLATE_TOEPLITZ_HPP
#define PROLATE_TOEPLITZ_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prolate/errors.hpp"
#include "prolate/fft.hpp"
#include "prolate/group.hpp"
#include "prolate/symbol.hpp"

namespace prolate
{

///
/// ### ToeplitzOperator
///
/// Hermitian Toeplitz operator described by its first column c[k] = h[k],
/// k = 0..n-1, with h[-k] = conj(h[k]). A separable operator on Z x Z is
/// stored as two 1-D factors; its matrix is kron(first, second) with the
/// window element (i1, i2) at flat index i1 * n2 + i2.
///
/// \tparam Real  real scalar type
///
template <typename Real = double>
class ToeplitzOperator
{
public:
    using RealScalar    = Real;
    using Complex       = std::complex<Real>;
    using Vector        = ComplexVector<Real>;
    using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    ToeplitzOperator() = default;

    ToeplitzOperator(Vector first_column, GroupSpec group, std::string symbol_tag = {})
        : m_column(std::move(first_column)), m_group(group), m_tag(std::move(symbol_tag))
    {
        if (m_column.size() < 1)
        {
            throw ParameterError("operator dimension must be >= 1");
        }
        if (std::abs(m_column[0].imag()) > Real(1e-12))
        {
            throw ValidationError("diagonal of a Hermitian Toeplitz operator must be real");
        }
        m_column[0] = Complex(m_column[0].real(), 0);
    }

    /// Tensor product of two 1-D operators.
    static ToeplitzOperator separable(ToeplitzOperator first, ToeplitzOperator second,
                                      std::string symbol_tag = {})
    {
        if (first.is_separable() || second.is_separable())
        {
            throw ConfigError("separable factors must be one-dimensional");
        }
        ToeplitzOperator op;
        op.m_group = GroupSpec::lattice2d();
        op.m_tag   = std::move(symbol_tag);
        op.m_factors.push_back(std::move(first));
        op.m_factors.push_back(std::move(second));
        return op;
    }

    bool is_separable() const
    {
        return !m_factors.empty();
    }

    const std::vector<ToeplitzOperator>& factors() const
    {
        return m_factors;
    }

    /// Total dimension (n1 * n2 when separable).
    Index size() const
    {
        if (is_separable())
        {
            return m_factors[0].size() * m_factors[1].size();
        }
        return m_column.size();
    }

    const Vector& first_column() const
    {
        return m_column;
    }

    const GroupSpec& group() const
    {
        return m_group;
    }

    const std::string& symbol_tag() const
    {
        return m_tag;
    }

    /// h[k] for |k| < n (1-D only).
    Complex lag(Index k) const
    {
        return k >= 0 ? m_column[k] : std::conj(m_column[-k]);
    }

    Real trace() const
    {
        if (is_separable())
        {
            return m_factors[0].trace() * m_factors[1].trace();
        }
        return static_cast<Real>(m_column.size()) * m_column[0].real();
    }

    /// Real-valued generating sequence (operator is real symmetric).
    bool is_real(Real tol = Real(0)) const
    {
        if (is_separable())
        {
            return m_factors[0].is_real(tol) && m_factors[1].is_real(tol);
        }
        return m_column.imag().cwiseAbs().maxCoeff() <= tol;
    }

    /// Largest |k| < n with h[k] != 0.
    Index bandwidth() const
    {
        Index b = 0;
        for (Index k = 0; k < m_column.size(); ++k)
        {
            if (m_column[k] != Complex(0))
            {
                b = k;
            }
        }
        return b;
    }

    ComplexMatrix dense() const
    {
        if (is_separable())
        {
            const ComplexMatrix a = m_factors[0].dense();
            const ComplexMatrix b = m_factors[1].dense();
            ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
            for (Index i = 0; i < a.rows(); ++i)
            {
                for (Index j = 0; j < a.cols(); ++j)
                {
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
                }
            }
            return out;
        }
        const Index n = m_column.size();
        ComplexMatrix t(n, n);
        for (Index j = 0; j < n; ++j)
        {
            for (Index i = 0; i < n; ++i)
            {
                t(i, j) = lag(i - j);
            }
        }
        return t;
    }

private:
    Vector m_column;
    GroupSpec m_group;
    std::string m_tag;
    std::vector<ToeplitzOperator> m_factors;
};

// ---------------------------------------------------------------------------
// Band-limiting kernels
// ---------------------------------------------------------------------------

/// K_B(m) = int_B chi_xi(m) dxi on Z with B = [-W, W].
template <typename Real = double>
std::complex<Real> bandlimit_kernel(const GroupSpec& group, const BandSpec& band, Index lag)
{
    if (band.kind == BandKind::SymmetricBand && group.kind == GroupKind::IntLine)
    {
        BandSpec::check_width(band.width[0]);
        return band_indicator_coefficient<Real>(static_cast<Real>(band.width[0]), lag);
    }
    if (band.kind == BandKind::IndexBlock && group.kind == GroupKind::CyclicN)
    {
        const Index N = group.modulus;
        if (band.modulus != N)
        {
            throw ConfigError("index band modulus does not match the group");
        }
        if (band.count < 1 || band.count > N)
        {
            throw ParameterError("index band needs 1 <= K <= N");
        }
        const Real n      = static_cast<Real>(N);
        const Real kk     = static_cast<Real>(band.count);
        const Index m     = ((lag % N) + N) % N;
        const auto shift  = detail::unit_phase<Real>(static_cast<Real>((band.offset * m) % N) / n);
        if (m == 0)
        {
            return std::complex<Real>(kk / n);
        }
        if (band.count == N)
        {
            return std::complex<Real>(0); // full band: identity kernel
        }
        // (1/N) sum_{k<K} e^{j 2 pi m k / N}
        const Real pi   = std::numbers::pi_v<Real>;
        const auto turn = static_cast<Real>((m * (band.count - 1)) % (2 * N)) / (Real(2) * n);
        const Real num  = std::sin(pi * static_cast<Real>((m * band.count) % (2 * N)) / n);
        const Real den  = n * std::sin(pi * static_cast<Real>(m) / n);
        return shift * detail::unit_phase<Real>(turn) * (num / den);
    }
    throw ConfigError("bandlimit_kernel: band is not compatible with the group "
                      "(use bandlimit_kernel_2d for Z x Z)");
}

/// Product kernel on Z x Z.
template <typename Real = double>
Real bandlimit_kernel_2d(const BandSpec& band, Index lag1, Index lag2)
{
    if (band.kind != BandKind::ProductBand)
    {
        throw ConfigError("bandlimit_kernel_2d requires a product band");
    }
    return band_indicator_coefficient<Real>(static_cast<Real>(band.width[0]), lag1) *
           band_indicator_coefficient<Real>(static_cast<Real>(band.width[1]), lag2);
}

/// N x N prolate matrix B[m, n] = sin(2 pi W (m - n)) / (pi (m - n)).
template <typename Real = double>
ToeplitzOperator<Real> prolate_operator(Index n, Real w)
{
    if (n < 1)
    {
        throw ParameterError("prolate_operator: N must be >= 1");
    }
    BandSpec::check_width(static_cast<double>(w));
    ComplexVector<Real> c(n);
    for (Index k = 0; k < n; ++k)
    {
        c[k] = band_indicator_coefficient<Real>(w, k);
    }
    return {std::move(c), GroupSpec::integers(), Symbol<Real>::band_indicator(w).tag()};
}

/// M x M periodic prolate (PDPSS) operator on Z_N with band {0..K-1}.
template <typename Real = double>
ToeplitzOperator<Real> periodic_prolate_operator(Index n, Index m, Index k)
{
    if (n < 1 || m < 1 || m > n || k < 1 || k > n)
    {
        throw ParameterError("periodic_prolate_operator needs 1 <= M <= N and 1 <= K <= N");
    }
    const GroupSpec g = GroupSpec::cyclic(n);
    const BandSpec b  = BandSpec::index_block(k, n);
    ComplexVector<Real> c(m);
    for (Index i = 0; i < m; ++i)
    {
        c[i] = bandlimit_kernel<Real>(g, b, i);
    }
    return {std::move(c), g,
            "index_block(K=" + std::to_string(k) + ",N=" + std::to_string(n) + ")"};
}

/// Separable operator for 2-D DPSSs on {0..N1-1} x {0..N2-1}, band [-W1,W1]x[-W2,W2].
template <typename Real = double>
ToeplitzOperator<Real> prolate_operator_2d(Index n1, Index n2, Real w1, Real w2)
{
    auto a = prolate_operator<Real>(n1, w1);
    auto b = prolate_operator<Real>(n2, w2);
    std::string tag = "product(" + a.symbol_tag() + "," + b.symbol_tag() + ")";
    return ToeplitzOperator<Real>::separable(std::move(a), std::move(b), std::move(tag));
}

/// Operator from h[-(N-1)..(N-1)] given as a length 2N-1 vector, h[k] at
/// position k + N - 1.
template <typename Real = double>
ToeplitzOperator<Real> toeplitz_from_impulse(const ComplexVector<Real>& h, Index n,
                                             Real tol = Real(1e-12))
{
    if (n < 1 || h.size() != 2 * n - 1)
    {
        throw DimensionError("toeplitz_from_impulse: expected 2N-1 samples");
    }
    ComplexVector<Real> c(n);
    for (Index k = 0; k < n; ++k)
    {
        const auto pos = h[n - 1 + k];
        const auto neg = h[n - 1 - k];
        if (std::abs(neg - std::conj(pos)) > tol)
        {
            throw ValidationError("toeplitz_from_impulse: h[-" + std::to_string(k) +
                                  "] != conj(h[" + std::to_string(k) + "])");
        }
        c[k] = pos;
    }
    return {std::move(c), GroupSpec::integers(), "impulse"};
}

/// Operator from a closed-form symbol; coefficients are exact.
template <typename Real = double>
ToeplitzOperator<Real> toeplitz_from_symbol(const Symbol<Real>& symbol, Index n)
{
    if (n < 1)
    {
        throw ParameterError("toeplitz_from_symbol: N must be >= 1");
    }
    if (!symbol.is_real())
    {
        throw ValidationError("toeplitz_from_symbol: symbol is not real-valued, "
                              "operator would not be Hermitian");
    }
    ComplexVector<Real> c(n);
    for (Index k = 0; k < n; ++k)
    {
        c[k] = symbol.coefficient(k);
    }
    return {std::move(c), GroupSpec::integers(), symbol.tag()};
}

/// Operator from sampled symbol values; h[k] by periodic trapezoid quadrature.
template <typename Real = double>
ToeplitzOperator<Real> toeplitz_from_symbol(const SymbolGrid<Real>& grid, Index n)
{
    if (n < 1)
    {
        throw ParameterError("toeplitz_from_symbol: N must be >= 1");
    }
    if (grid.grid_size() < 8 * n)
    {
        throw ResolutionError("symbol grid of size " + std::to_string(grid.grid_size()) +
                              " is too coarse for N=" + std::to_string(n) +
                              " (need >= 8N)");
    }
    if (!grid.real_flag())
    {
        throw ValidationError("toeplitz_from_symbol: symbol samples are not real");
    }
    const auto coeffs = grid.coefficients();
    ComplexVector<Real> c = coeffs.head(n);
    return {std::move(c), GroupSpec::integers(),
            "grid(G=" + std::to_string(grid.grid_size()) + ")"};
}

/// Time-limited Toeplitz operator with symbol |phi^|^2 (AA* and S*S share it).
template <typename Real = double>
ToeplitzOperator<Real> autocorrelation_operator(const SymbolGrid<Real>& pulse, Index n)
{
    return toeplitz_from_symbol(pulse.modulus_squared(), n);
}

template <typename Real = double>
ToeplitzOperator<Real> autocorrelation_operator(const Symbol<Real>& pulse, Index n)
{
    return toeplitz_from_symbol(pulse.modulus_squared(), n);
}

/// Build the band-limiting operator T_A B_B T_A for a group/window/band triple.
template <typename Real = double>
ToeplitzOperator<Real> time_frequency_limiting_operator(const GroupSpec& group,
                                                        const TimeWindow& window,
                                                        const BandSpec& band)
{
    validate_window(group, window);
    band_measure(group, band); // compatibility check
    switch (group.kind)
    {
    case GroupKind::IntLine:
        return prolate_operator<Real>(window.sizes[0], static_cast<Real>(band.width[0]));
    case GroupKind::CyclicN:
    {
        ComplexVector<Real> c(window.sizes[0]);
        for (Index i = 0; i < c.size(); ++i)
        {
            c[i] = bandlimit_kernel<Real>(group, band, i);
        }
        return {std::move(c), group,
                "index_block(K=" + std::to_string(band.count) + ",N=" +
                    std::to_string(group.modulus) + ",offset=" +
                    std::to_string(band.offset) + ")"};
    }
    case GroupKind::Product2D:
        return prolate_operator_2d<Real>(window.sizes[0], window.sizes[1],
                                         static_cast<Real>(band.width[0]),
                                         static_cast<Real>(band.width[1]));
    }
    throw ConfigError("unknown group kind");
}

} // namespace prolate

#endif // PROLATE_TOEPLITZ_HPP
