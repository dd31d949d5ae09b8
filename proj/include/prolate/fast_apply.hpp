///
/// \file fast_apply.hpp
///
/// Application layer: FFT-based Toeplitz products, truncated-pseudoinverse
/// solves and multitaper spectral estimation with DPSS tapers.
///
#ifndef PROLATE_FAST_APPLY_HPP
#define PROLATE_FAST_APPLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prolate/errors.hpp"
#include "prolate/fft.hpp"
#include "prolate/spectral.hpp"
#include "prolate/toeplitz.hpp"

namespace prolate
{

///
/// ### ToeplitzMatvec
///
/// y = T x in O(n log n): the n x n Toeplitz matrix is embedded in a circulant
/// of size L = next power of two >= 2n - 1 whose spectrum is cached.
///
template <typename Real = double>
class ToeplitzMatvec
{
public:
    using Complex = std::complex<Real>;
    using Vector  = ComplexVector<Real>;

    explicit ToeplitzMatvec(const ToeplitzOperator<Real>& op)
    {
        if (op.is_separable())
        {
            m_parts.emplace_back(op.factors()[0]);
            m_parts.emplace_back(op.factors()[1]);
            m_rows = op.factors()[0].size();
            m_cols = op.factors()[1].size();
            return;
        }
        const Index n = op.size();
        m_rows        = n;
        const Index l = next_pow2(2 * n - 1);
        Vector c      = Vector::Zero(l);
        for (Index k = 0; k < n; ++k)
        {
            c[k] = op.lag(k);
        }
        for (Index k = 1; k < n; ++k)
        {
            c[l - k] = op.lag(-k);
        }
        m_spectrum = fft_forward<Real>(c);
    }

    Index size() const
    {
        return m_parts.empty() ? m_rows : m_rows * m_cols;
    }

    Index embedding_size() const
    {
        return m_parts.empty() ? m_spectrum.size() : 0;
    }

    Vector operator()(const Vector& x) const
    {
        if (x.size() != size())
        {
            throw DimensionError("toeplitz_matvec: vector of length " + std::to_string(x.size()) +
                                 " does not match operator dimension " + std::to_string(size()));
        }
        if (!m_parts.empty())
        {
            return apply_separable(x);
        }
        Vector xp                   = Vector::Zero(m_spectrum.size());
        xp.head(m_rows)             = x;
        const Vector prod           = fft_forward<Real>(xp).cwiseProduct(m_spectrum);
        return fft_inverse<Real>(prod).head(m_rows);
    }

private:
    Vector apply_separable(const Vector& x) const
    {
        // x holds the n1 x n2 window row-major: T x = A1 X A2^T
        const Index n1 = m_rows;
        const Index n2 = m_cols;
        Vector tmp(x.size());
        for (Index i = 0; i < n1; ++i)
        {
            tmp.segment(i * n2, n2) = m_parts[1](x.segment(i * n2, n2));
        }
        Vector out(x.size());
        Vector col(n1);
        for (Index j = 0; j < n2; ++j)
        {
            for (Index i = 0; i < n1; ++i)
            {
                col[i] = tmp[i * n2 + j];
            }
            const Vector r = m_parts[0](col);
            for (Index i = 0; i < n1; ++i)
            {
                out[i * n2 + j] = r[i];
            }
        }
        return out;
    }

    Vector m_spectrum;
    std::vector<ToeplitzMatvec> m_parts;
    Index m_rows = 0;
    Index m_cols = 1;
};

template <typename Real>
ComplexVector<Real> toeplitz_matvec(const ToeplitzOperator<Real>& op, const ComplexVector<Real>& x)
{
    return ToeplitzMatvec<Real>(op)(x);
}

// ---------------------------------------------------------------------------
// Truncated pseudoinverse
// ---------------------------------------------------------------------------

template <typename Real = double>
struct SolveReport
{
    ComplexVector<Real> solution;
    Index rank_used   = 0;
    Real residual     = 0; ///< ||T x - y|| / ||y||
    Real dropped_mass = 0; ///< sum_{l >= K} lambda_l
};

/// ceil(|A| |B|), the default truncation rank.
inline Index default_rank(Index domain_size, double band_measure_value)
{
    return static_cast<Index>(std::ceil(static_cast<double>(domain_size) * band_measure_value - 1e-12));
}

///
/// x = sum_{l<K} lambda_l^{-1} <u_l, y> u_l.
///
/// The residual is ||y - U_K U_K^H y|| / ||y||, which equals ||T x - y|| / ||y||
/// because x lies in the span of the retained eigenvectors.
///
template <typename Real>
SolveReport<Real> truncated_pinv_solve(const EigenDecomposition<Real>& dec,
                                       const ComplexVector<Real>& y, Index k)
{
    if (!dec.has_vectors())
    {
        throw ConfigError("truncated_pinv_solve: decomposition has no eigenvectors");
    }
    if (y.size() != dec.eigenvectors.rows())
    {
        throw DimensionError("truncated_pinv_solve: right-hand side has wrong length");
    }
    if (k < 1 || k > dec.size())
    {
        throw ParameterError("truncated_pinv_solve: rank K=" + std::to_string(k) +
                             " outside [1, " + std::to_string(dec.size()) + "]");
    }
    if (dec.eigenvalues[k - 1] <= Real(1e-12))
    {
        throw RankError("truncated_pinv_solve: lambda_" + std::to_string(k - 1) + " = " +
                        std::to_string(dec.eigenvalues[k - 1]) +
                        " is not invertible; choose a smaller rank");
    }
    const auto u                = dec.eigenvectors.leftCols(k);
    const ComplexVector<Real> c = u.adjoint() * y;
    ComplexVector<Real> scaled  = c;
    for (Index i = 0; i < k; ++i)
    {
        scaled[i] /= dec.eigenvalues[i];
    }
    SolveReport<Real> report;
    report.solution     = u * scaled;
    report.rank_used    = k;
    const Real ny       = y.norm();
    report.residual     = ny > 0 ? (y - u * c).norm() / ny : Real(0);
    report.dropped_mass = dec.trace - dec.eigenvalues.head(k).sum();
    return report;
}

// ---------------------------------------------------------------------------
// Multitaper spectral estimation
// ---------------------------------------------------------------------------

struct MultitaperOptions
{
    bool eigenvalue_weighted = false;
};

template <typename Real = double>
struct MultitaperEstimate
{
    RealVector<Real> frequencies; ///< f_m = m / M on [0, 1)
    RealVector<Real> psd;
    bool taper_warning = false;   ///< K > ceil(2NW): poorly concentrated tapers in use
};

///
/// S(f_m) = (1/K) sum_{k<K} |sum_n x[n] u_k[n] exp(-j 2 pi f_m n)|^2 with the
/// first K DPSS tapers for half-bandwidth W, on a grid of M >= N frequencies.
///
template <typename Real>
MultitaperEstimate<Real> multitaper_psd(const ComplexVector<Real>& signal, Real w, Index k,
                                        Index f_grid, MultitaperOptions opt = {})
{
    const Index n = signal.size();
    if (n < 1)
    {
        throw ParameterError("multitaper_psd: empty signal");
    }
    if (k < 1 || k > n)
    {
        throw ParameterError("multitaper_psd: number of tapers K=" + std::to_string(k) +
                             " must lie in [1, N]");
    }
    if (f_grid < n)
    {
        throw ResolutionError("multitaper_psd: frequency grid must have >= N points");
    }
    const auto tapers = dpss_basis<Real>(n, w, k, DpssMethod::Tridiagonal);

    MultitaperEstimate<Real> est;
    est.taper_warning = static_cast<Real>(k) > std::ceil(Real(2) * static_cast<Real>(n) * w);
    est.frequencies.resize(f_grid);
    for (Index m = 0; m < f_grid; ++m)
    {
        est.frequencies[m] = static_cast<Real>(m) / static_cast<Real>(f_grid);
    }
    est.psd        = RealVector<Real>::Zero(f_grid);
    Real total_w   = 0;
    for (Index t = 0; t < k; ++t)
    {
        ComplexVector<Real> padded = ComplexVector<Real>::Zero(f_grid);
        padded.head(n)             = signal.cwiseProduct(tapers.eigenvectors.col(t));
        const Real weight          = opt.eigenvalue_weighted ? tapers.eigenvalues[t] : Real(1);
        est.psd += weight * fft_forward<Real>(padded).cwiseAbs2();
        total_w += weight;
    }
    est.psd /= total_w;
    return est;
}

} // namespace prolate

#endif // PROLATE_FAST_APPLY_HPP
