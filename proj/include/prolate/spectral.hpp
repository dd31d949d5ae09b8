///
/// \file spectral.hpp
///
/// Spectra of Hermitian Toeplitz operators: full eigendecompositions, DPSS
/// bases, eigenvalue counting, Szego distribution reports and the two fast
/// eigenvalue estimators (symbol sampling and circulant surrogate).
///
#ifndef PROLATE_SPECTRAL_HPP
#define PROLATE_SPECTRAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "prolate/errors.hpp"
#include "prolate/fft.hpp"
#include "prolate/quadrature.hpp"
#include "prolate/symbol.hpp"
#include "prolate/toeplitz.hpp"

namespace prolate
{

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

///
/// Descending eigenvalues with matching orthonormal eigenvectors (columns).
/// May hold only a prefix of the spectrum (see dpss_basis); `trace` is
/// always the trace of the full operator.
///
template <typename Real = double>
struct EigenDecomposition
{
    RealVector<Real> eigenvalues;
    ComplexMatrix<Real> eigenvectors; ///< empty when only values were requested
    std::string source;
    GroupSpec group;
    std::array<Index, 2> shape{0, 1}; ///< window sizes (n, 1) or (n1, n2)
    Real trace = 0;

    Index dimension() const
    {
        return shape[0] * shape[1];
    }

    Index size() const
    {
        return eigenvalues.size();
    }

    bool has_vectors() const
    {
        return eigenvectors.cols() == eigenvalues.size() && eigenvectors.size() > 0;
    }
};

struct EigenOptions
{
    bool compute_vectors = true;
};

/// Rotate each column so its largest-magnitude entry (first one on ties) is
/// real and positive.
template <typename Derived>
void canonicalize_phase(Eigen::MatrixBase<Derived>& vectors)
{
    using Scalar = typename Derived::Scalar;
    using Real   = typename Eigen::NumTraits<Scalar>::Real;
    for (Index j = 0; j < vectors.cols(); ++j)
    {
        auto col        = vectors.col(j);
        const Real peak = col.cwiseAbs().maxCoeff();
        if (peak == Real(0))
        {
            continue;
        }
        const Real cutoff = peak * (Real(1) - Real(1e-9));
        Index pivot       = 0;
        while (std::abs(col[pivot]) < cutoff)
        {
            ++pivot;
        }
        const Scalar p = col[pivot];
        col *= Scalar(std::conj(p) / std::abs(p));
        col[pivot] = Scalar(std::abs(col[pivot]));
    }
}

namespace detail
{

template <typename Real, typename Solver>
void check_solver(const Solver& es, Index n)
{
    if (es.info() != Eigen::Success)
    {
        throw NumericError("Hermitian eigensolver did not converge for n=" + std::to_string(n) +
                           " (QR iteration limit of 30n sweeps exceeded, info=" +
                           std::to_string(static_cast<int>(es.info())) + ")");
    }
}

template <typename Real>
EigenDecomposition<Real> eig_dense_1d(const ToeplitzOperator<Real>& op, const EigenOptions& opt)
{
    const Index n = op.size();
    EigenDecomposition<Real> dec;
    dec.source = op.symbol_tag();
    dec.group  = op.group();
    dec.shape  = {n, 1};
    dec.trace  = op.trace();
    const int mode = opt.compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;

    if (op.is_real())
    {
        using Mat                = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
        const Mat a              = op.dense().real();
        Eigen::SelfAdjointEigenSolver<Mat> es(a, mode);
        check_solver<Real>(es, n);
        dec.eigenvalues = es.eigenvalues().reverse();
        if (opt.compute_vectors)
        {
            dec.eigenvectors = es.eigenvectors().rowwise().reverse().template cast<std::complex<Real>>();
        }
    }
    else
    {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(op.dense(), mode);
        check_solver<Real>(es, n);
        dec.eigenvalues = es.eigenvalues().reverse();
        if (opt.compute_vectors)
        {
            dec.eigenvectors = es.eigenvectors().rowwise().reverse();
        }
    }
    if (opt.compute_vectors)
    {
        canonicalize_phase(dec.eigenvectors);
    }
    return dec;
}

} // namespace detail

///
/// Full eigendecomposition, eigenvalues descending. Separable operators are
/// decomposed factor-wise: eigenvalues are products of factor eigenvalues and
/// eigenvectors are Kronecker products.
///
template <typename Real = double>
EigenDecomposition<Real> eig_hermitian(const ToeplitzOperator<Real>& op, EigenOptions opt = {})
{
    if (!op.is_separable())
    {
        return detail::eig_dense_1d(op, opt);
    }
    const auto a   = detail::eig_dense_1d(op.factors()[0], opt);
    const auto b   = detail::eig_dense_1d(op.factors()[1], opt);
    const Index n1 = a.size();
    const Index n2 = b.size();

    std::vector<std::pair<Index, Index>> order;
    order.reserve(static_cast<std::size_t>(n1 * n2));
    for (Index i = 0; i < n1; ++i)
    {
        for (Index j = 0; j < n2; ++j)
        {
            order.emplace_back(i, j);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
        return a.eigenvalues[x.first] * b.eigenvalues[x.second] >
               b.eigenvalues[y.second] * a.eigenvalues[y.first];
    });

    EigenDecomposition<Real> dec;
    dec.source = op.symbol_tag();
    dec.group  = op.group();
    dec.shape  = {n1, n2};
    dec.trace  = op.trace();
    dec.eigenvalues.resize(n1 * n2);
    if (opt.compute_vectors)
    {
        dec.eigenvectors.resize(n1 * n2, n1 * n2);
    }
    for (Index k = 0; k < n1 * n2; ++k)
    {
        const auto [i, j]  = order[static_cast<std::size_t>(k)];
        dec.eigenvalues[k] = a.eigenvalues[i] * b.eigenvalues[j];
        if (opt.compute_vectors)
        {
            for (Index p = 0; p < n1; ++p)
            {
                dec.eigenvectors.col(k).segment(p * n2, n2) =
                    a.eigenvectors(p, i) * b.eigenvectors.col(j);
            }
        }
    }
    if (opt.compute_vectors)
    {
        canonicalize_phase(dec.eigenvectors);
    }
    return dec;
}

enum class DpssMethod
{
    Dense,       ///< dense eigensolver on the prolate matrix
    Tridiagonal, ///< eigenvectors of the commuting symmetric tridiagonal matrix
};

///
/// First `count` DPSS eigenpairs of the N x N prolate matrix with band [-W, W].
///
/// The tridiagonal route diagonalizes the classical commuting matrix with
/// diagonal ((N-1-2n)/2)^2 cos(2 pi W) and off-diagonal n(N-n)/2; its
/// eigenvectors are well separated even where the prolate eigenvalues
/// cluster at 1 or 0. Eigenvalues are then the Rayleigh quotients u^T B u,
/// or the in-band energy of u when that is below 1e-3.
///
template <typename Real = double>
EigenDecomposition<Real> dpss_basis(Index n, Real w, Index count,
                                    DpssMethod method = DpssMethod::Dense)
{
    if (count < 0 || count > n)
    {
        throw ParameterError("dpss_basis: count must lie in [0, N]");
    }
    const auto op = prolate_operator<Real>(n, w);
    EigenDecomposition<Real> dec;
    if (method == DpssMethod::Dense)
    {
        dec              = eig_hermitian(op);
        dec.eigenvalues  = dec.eigenvalues.head(count).eval();
        dec.eigenvectors = dec.eigenvectors.leftCols(count).eval();
        return dec;
    }

    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    RealVector<Real> diag(n);
    RealVector<Real> sub(std::max<Index>(n - 1, 0));
    const Real c = std::cos(Real(2) * std::numbers::pi_v<Real> * w);
    for (Index i = 0; i < n; ++i)
    {
        const Real t = (static_cast<Real>(n - 1) - Real(2) * static_cast<Real>(i)) / Real(2);
        diag[i]      = t * t * c;
    }
    for (Index i = 1; i < n; ++i)
    {
        sub[i - 1] = static_cast<Real>(i) * static_cast<Real>(n - i) / Real(2);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    detail::check_solver<Real>(es, n);

    Mat vecs        = es.eigenvectors().rowwise().reverse().leftCols(count);
    const Mat dense = op.dense().real();
    const Mat bv    = dense * vecs;
    dec.eigenvalues = (vecs.array() * bv.array()).colwise().sum().transpose();

    // u^T B u cancels down to absolute rounding error. Small eigenvalues are
    // recomputed as the in-band energy int_{-W}^{W} |U(f)|^2 df, which keeps
    // relative accuracy because U(f) is squared after the cancellation.
    const Real small = Real(1e-3);
    if ((dec.eigenvalues.array() < small).any())
    {
        const Index panels = static_cast<Index>(std::ceil(Real(4) * w * static_cast<Real>(n))) + 1;
        const auto rule    = composite_gauss_legendre<Real>(-w, w, panels, 8);
        Mat cosines(rule.size(), n);
        Mat sines(rule.size(), n);
        for (Index i = 0; i < rule.size(); ++i)
        {
            for (Index t = 0; t < n; ++t)
            {
                const Real arg = Real(2) * std::numbers::pi_v<Real> * rule.nodes[i] * static_cast<Real>(t);
                cosines(i, t)  = std::cos(arg);
                sines(i, t)    = std::sin(arg);
            }
        }
        for (Index l = 0; l < count; ++l)
        {
            if (dec.eigenvalues[l] < small)
            {
                const RealVector<Real> re = cosines * vecs.col(l);
                const RealVector<Real> im = sines * vecs.col(l);
                dec.eigenvalues[l] =
                    (rule.weights.array() * (re.array().square() + im.array().square())).sum();
            }
        }
    }
    dec.eigenvectors = vecs.template cast<std::complex<Real>>();
    canonicalize_phase(dec.eigenvectors);
    dec.source = op.symbol_tag();
    dec.group  = op.group();
    dec.shape  = {n, 1};
    dec.trace  = op.trace();
    return dec;
}

/// #{l : a < lambda_l < b}, or a <= lambda_l <= b when `closed`.
template <typename Real>
Index eig_count(const EigenDecomposition<Real>& dec, Real a, Real b, bool closed = false)
{
    Index count = 0;
    for (Index i = 0; i < dec.eigenvalues.size(); ++i)
    {
        const Real l = dec.eigenvalues[i];
        count += closed ? (l >= a && l <= b) : (l > a && l < b);
    }
    return count;
}

/// Nonasymptotic bound on the DPSS transition region:
///   #{l : eps < lambda_l < 1 - eps} <= (8/pi^2 log(8N) + 12) log(15/eps).
inline double transition_bound_dpss(Index n, double eps)
{
    if (n < 2)
    {
        throw ParameterError("transition_bound_dpss: N must be >= 2");
    }
    if (!(eps > 0.0 && eps < 0.5))
    {
        throw ParameterError("transition_bound_dpss: eps must lie in (0, 1/2)");
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return (8.0 / pi2 * std::log(8.0 * static_cast<double>(n)) + 12.0) * std::log(15.0 / eps);
}

// ---------------------------------------------------------------------------
// Szego distribution reports
// ---------------------------------------------------------------------------

/// Test function for the distribution theorem.
template <typename Real = double>
struct TestFunction
{
    std::string name;
    std::function<Real(Real)> fn;
    /// Values must satisfy x > lower (strict) to be in the domain.
    Real lower = -std::numeric_limits<Real>::infinity();
};

/// Named test functions: "x", "x^2", "x^3", "exp", "log".
template <typename Real = double>
TestFunction<Real> test_function(const std::string& name)
{
    if (name == "x")
    {
        return {name, [](Real x) { return x; }};
    }
    if (name == "x^2" || name == "x2")
    {
        return {"x^2", [](Real x) { return x * x; }};
    }
    if (name == "x^3" || name == "x3")
    {
        return {"x^3", [](Real x) { return x * x * x; }};
    }
    if (name == "exp")
    {
        return {name, [](Real x) { return std::exp(x); }};
    }
    if (name == "log")
    {
        return {name, [](Real x) { return std::log(x); }, Real(0)};
    }
    throw ParameterError("unknown test function '" + name + "'");
}

template <typename Real = double>
struct SzegoRow
{
    std::string theta;
    Real matrix_mean     = 0; ///< (1/n) sum theta(lambda_l)
    Real symbol_integral = 0; ///< int_0^1 theta(h^(f)) df
    Real abs_gap         = 0;
};

template <typename Real = double>
struct IntervalCount
{
    Real a = 0;
    Real b = 0;
    bool closed_right = false; ///< [a, b] instead of [a, b)
    Index count = 0;
};

template <typename Real = double>
struct DistributionReport
{
    std::vector<IntervalCount<Real>> counts;
    std::vector<SzegoRow<Real>> szego_rows;
    Real cdf_distance = 0;
    std::map<std::string, Real> estimator_errors;
};

namespace detail
{

/// Values of a real symbol grid that carry positive mass (flat levels).
template <typename Real>
bool is_atom(const std::vector<Real>& sorted, Real x)
{
    const Real tol   = Real(1e-12) * std::max(Real(1), std::abs(x));
    const auto lo    = std::lower_bound(sorted.begin(), sorted.end(), x - tol);
    const auto hi    = std::upper_bound(sorted.begin(), sorted.end(), x + tol);
    const auto mult  = static_cast<std::size_t>(hi - lo);
    return mult > 2 && mult * 1000 > sorted.size();
}

} // namespace detail

///
/// Sup-distance between the empirical eigenvalue CDF and the distribution
/// function of a real symbol (measured on its grid), evaluated at every jump
/// of either step function except at flat levels of the symbol.
///
template <typename Real>
Real cdf_distance(const RealVector<Real>& eigenvalues, const SymbolGrid<Real>& grid)
{
    if (!grid.real_flag())
    {
        throw DomainError("cdf_distance: symbol must be real-valued");
    }
    std::vector<Real> lam(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::vector<Real> sym(static_cast<std::size_t>(grid.grid_size()));
    for (Index m = 0; m < grid.grid_size(); ++m)
    {
        sym[static_cast<std::size_t>(m)] = grid.samples()[m].real();
    }
    std::sort(lam.begin(), lam.end());
    std::sort(sym.begin(), sym.end());

    const Real nl = static_cast<Real>(lam.size());
    const Real ns = static_cast<Real>(sym.size());
    Real best     = 0;
    auto probe    = [&](Real x) {
        if (detail::is_atom(sym, x))
        {
            return;
        }
        const auto l_le = std::upper_bound(lam.begin(), lam.end(), x) - lam.begin();
        const auto l_lt = std::lower_bound(lam.begin(), lam.end(), x) - lam.begin();
        const auto s_le = std::upper_bound(sym.begin(), sym.end(), x) - sym.begin();
        const auto s_lt = std::lower_bound(sym.begin(), sym.end(), x) - sym.begin();
        best = std::max(best, std::abs(static_cast<Real>(l_le) / nl - static_cast<Real>(s_le) / ns));
        best = std::max(best, std::abs(static_cast<Real>(l_lt) / nl - static_cast<Real>(s_lt) / ns));
    };
    for (Real x : lam)
    {
        probe(x);
    }
    for (Real x : sym)
    {
        probe(x);
    }
    return best;
}

///
/// Compare matrix means (1/n) sum theta(lambda_l) with symbol integrals
/// int_0^1 theta(h^(f)) df for each test function, count eigenvalues in
/// `bins` equal intervals partitioning [min lambda, max lambda], and report
/// the CDF distance.
///
template <typename Real>
DistributionReport<Real> szego_report(const EigenDecomposition<Real>& dec,
                                      const SymbolGrid<Real>& grid,
                                      const std::vector<TestFunction<Real>>& thetas,
                                      Index bins = 10)
{
    if (!grid.real_flag())
    {
        throw DomainError("szego_report: symbol must be real-valued");
    }
    const auto& lam = dec.eigenvalues;
    const Index n   = lam.size();
    if (n < 1)
    {
        throw ParameterError("szego_report: empty decomposition");
    }
    DistributionReport<Real> report;
    for (const auto& theta : thetas)
    {
        SzegoRow<Real> row;
        row.theta = theta.name;
        Real acc  = 0;
        for (Index i = 0; i < n; ++i)
        {
            if (!(lam[i] > theta.lower))
            {
                throw DomainError("test function '" + theta.name +
                                  "' is undefined at eigenvalue lambda_" + std::to_string(i) +
                                  " = " + std::to_string(lam[i]));
            }
            acc += theta.fn(lam[i]);
        }
        row.matrix_mean = acc / static_cast<Real>(n);
        Real sacc       = 0;
        for (Index m = 0; m < grid.grid_size(); ++m)
        {
            const Real s = grid.samples()[m].real();
            if (!(s > theta.lower))
            {
                throw DomainError("test function '" + theta.name +
                                  "' is undefined at symbol value " + std::to_string(s) +
                                  " (f=" + std::to_string(grid.frequency(m)) + ")");
            }
            sacc += theta.fn(s);
        }
        row.symbol_integral = sacc / static_cast<Real>(grid.grid_size());
        row.abs_gap         = std::abs(row.matrix_mean - row.symbol_integral);
        report.szego_rows.push_back(std::move(row));
    }

    const Real lo = lam.minCoeff();
    const Real hi = lam.maxCoeff();
    bins          = std::max<Index>(bins, 1);
    for (Index b = 0; b < bins; ++b)
    {
        IntervalCount<Real> ic;
        ic.a            = lo + (hi - lo) * static_cast<Real>(b) / static_cast<Real>(bins);
        ic.b            = b + 1 == bins ? hi : lo + (hi - lo) * static_cast<Real>(b + 1) / static_cast<Real>(bins);
        ic.closed_right = (b + 1 == bins);
        for (Index i = 0; i < n; ++i)
        {
            const Real l = lam[i];
            ic.count += (l >= ic.a) && (ic.closed_right ? l <= ic.b : l < ic.b);
        }
        report.counts.push_back(ic);
    }
    if (hi == lo)
    {
        // degenerate spectrum: every bin has width zero, keep a single bin
        report.counts.resize(1);
        report.counts[0].count = n;
    }
    report.cdf_distance = cdf_distance(lam, grid);
    return report;
}

// ---------------------------------------------------------------------------
// Eigenvalue estimators
// ---------------------------------------------------------------------------

namespace detail
{

template <typename Real>
RealVector<Real> sorted_descending(RealVector<Real> v)
{
    std::sort(v.data(), v.data() + v.size(), std::greater<Real>());
    return v;
}

} // namespace detail

/// Symbol samples h^(l/n), l = 0..n-1, sorted descending. Trigonometric
/// symbols are evaluated exactly through the DFT of their coefficients
/// periodized modulo n.
template <typename Real>
RealVector<Real> estimate_eigs_symbol_sampling(const Symbol<Real>& symbol, Index n)
{
    if (n < 1)
    {
        throw ParameterError("estimate_eigs_symbol_sampling: n must be >= 1");
    }
    if (!symbol.is_real())
    {
        throw DomainError("estimate_eigs_symbol_sampling: symbol must be real-valued");
    }
    RealVector<Real> out(n);
    if (symbol.kind() == Symbol<Real>::Kind::Trigonometric)
    {
        ComplexVector<Real> p = ComplexVector<Real>::Zero(n);
        for (const auto& [k, c] : symbol.coefficients())
        {
            p[((k % n) + n) % n] += c;
        }
        out = fft_forward<Real>(p).real();
    }
    else
    {
        for (Index l = 0; l < n; ++l)
        {
            out[l] = symbol.value(static_cast<Real>(l) / static_cast<Real>(n)).real();
        }
    }
    return detail::sorted_descending(std::move(out));
}

/// Grid variant; the grid must contain the points l/n (G divisible by n).
template <typename Real>
RealVector<Real> estimate_eigs_symbol_sampling(const SymbolGrid<Real>& grid, Index n)
{
    if (n < 1 || grid.grid_size() % n != 0)
    {
        throw ResolutionError("symbol grid of size " + std::to_string(grid.grid_size()) +
                              " does not contain the frequencies l/" + std::to_string(n));
    }
    if (!grid.real_flag())
    {
        throw DomainError("estimate_eigs_symbol_sampling: symbol must be real-valued");
    }
    const Index stride = grid.grid_size() / n;
    RealVector<Real> out(n);
    for (Index l = 0; l < n; ++l)
    {
        out[l] = grid.samples()[l * stride].real();
    }
    return detail::sorted_descending(std::move(out));
}

template <typename Real = double>
struct CirculantEstimate
{
    RealVector<Real> values; ///< descending
    bool wrap_warning = false; ///< bandwidth >= n/2, wrapped lags overlap
};

///
/// Eigenvalues of the wrapped circulant c[0] = h[0], c[k] = h[k] + h[k - n],
/// computed by an FFT of c.
///
template <typename Real>
CirculantEstimate<Real> estimate_eigs_circulant(const ToeplitzOperator<Real>& op)
{
    if (op.is_separable())
    {
        throw ConfigError("estimate_eigs_circulant: one-dimensional operators only");
    }
    const Index n = op.size();
    ComplexVector<Real> c(n);
    c[0] = op.lag(0);
    for (Index k = 1; k < n; ++k)
    {
        c[k] = op.lag(k) + op.lag(k - n);
    }
    CirculantEstimate<Real> est;
    est.values       = detail::sorted_descending<Real>(fft_forward<Real>(c).real());
    est.wrap_warning = 2 * op.bandwidth() >= n && n > 1;
    return est;
}

template <typename Real>
Real max_abs_difference(const RealVector<Real>& a, const RealVector<Real>& b)
{
    if (a.size() != b.size())
    {
        throw DimensionError("max_abs_difference: length mismatch");
    }
    return a.size() == 0 ? Real(0) : (a - b).cwiseAbs().maxCoeff();
}

/// Fill report.estimator_errors with max_l |lambda_l - estimate_l| for both estimators.
template <typename Real>
void attach_estimator_errors(DistributionReport<Real>& report,
                             const EigenDecomposition<Real>& dec,
                             const ToeplitzOperator<Real>& op,
                             const Symbol<Real>& symbol)
{
    report.estimator_errors["symbol_sampling"] = max_abs_difference(
        dec.eigenvalues, estimate_eigs_symbol_sampling(symbol, op.size()));
    report.estimator_errors["circulant"] =
        max_abs_difference(dec.eigenvalues, estimate_eigs_circulant(op).values);
}

} // namespace prolate

#endif // PROLATE_SPECTRAL_HPP
