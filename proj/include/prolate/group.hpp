///
/// \file group.hpp
///
/// Discrete locally compact abelian groups supported by the library, together
/// with their dual groups, characters and Haar measure conventions.
///
/// The Haar pairing is fixed: counting measure on the (discrete) group and the
/// normalized measure on the dual (Lebesgue on the circle, counting divided by
/// N on the dual of Z_N). With this pairing Parseval is exact and the trace of
/// a time-frequency limiting operator equals |A| |B|.
///
#ifndef PROLATE_GROUP_HPP
#define PROLATE_GROUP_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "prolate/errors.hpp"

namespace prolate
{

using Index = Eigen::Index;

enum class GroupKind
{
    IntLine,   ///< Z, dual is the unit circle [-1/2, 1/2)
    CyclicN,   ///< Z_N, dual is Z_N
    Product2D, ///< Z x Z, dual is the torus
};

struct GroupSpec
{
    GroupKind kind = GroupKind::IntLine;
    Index modulus  = 0; ///< only meaningful for CyclicN

    static GroupSpec integers()
    {
        return {GroupKind::IntLine, 0};
    }

    static GroupSpec cyclic(Index n)
    {
        if (n < 1)
        {
            throw ParameterError("cyclic group modulus must be >= 1, got " +
                                 std::to_string(n));
        }
        return {GroupKind::CyclicN, n};
    }

    static GroupSpec lattice2d()
    {
        return {GroupKind::Product2D, 0};
    }

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

enum class WindowKind
{
    IndexBlock, ///< {0, ..., N-1}
    Block2D,    ///< {0, ..., N1-1} x {0, ..., N2-1}
};

struct TimeWindow
{
    WindowKind kind = WindowKind::IndexBlock;
    std::array<Index, 2> sizes{1, 1};

    static TimeWindow block(Index n)
    {
        if (n < 1)
        {
            throw ParameterError("window length must be >= 1");
        }
        return {WindowKind::IndexBlock, {n, 1}};
    }

    static TimeWindow block2d(Index n1, Index n2)
    {
        if (n1 < 1 || n2 < 1)
        {
            throw ParameterError("window sizes must be >= 1");
        }
        return {WindowKind::Block2D, {n1, n2}};
    }

    /// Number of group elements in the window (|A| under counting measure).
    Index size() const
    {
        return kind == WindowKind::IndexBlock ? sizes[0] : sizes[0] * sizes[1];
    }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

enum class BandKind
{
    SymmetricBand, ///< [-W, W] on the circle
    IndexBlock,    ///< {offset, ..., offset + K - 1} (mod N) on Z_N
    ProductBand,   ///< [-W1, W1] x [-W2, W2] on the torus
};

struct BandSpec
{
    BandKind kind = BandKind::SymmetricBand;
    std::array<double, 2> width{0.0, 0.0}; ///< W (or W1, W2)
    Index count   = 0;                     ///< K for IndexBlock
    Index offset  = 0;                     ///< first index of an IndexBlock
    Index modulus = 0;                     ///< N the IndexBlock lives in
    double measure = 0.0;                  ///< Haar measure of the set

    static BandSpec symmetric(double w)
    {
        check_width(w);
        BandSpec b;
        b.kind    = BandKind::SymmetricBand;
        b.width   = {w, 0.0};
        b.measure = 2.0 * w;
        return b;
    }

    static BandSpec index_block(Index k, Index n, Index offset = 0)
    {
        if (n < 1 || k < 1 || k > n)
        {
            throw ParameterError("index band needs 1 <= K <= N, got K=" +
                                 std::to_string(k) + ", N=" + std::to_string(n));
        }
        BandSpec b;
        b.kind    = BandKind::IndexBlock;
        b.count   = k;
        b.offset  = ((offset % n) + n) % n;
        b.modulus = n;
        b.measure = static_cast<double>(k) / static_cast<double>(n);
        return b;
    }

    static BandSpec product(double w1, double w2)
    {
        check_width(w1);
        check_width(w2);
        BandSpec b;
        b.kind    = BandKind::ProductBand;
        b.width   = {w1, w2};
        b.measure = 4.0 * w1 * w2;
        return b;
    }

    static void check_width(double w)
    {
        if (!(w > 0.0 && w <= 0.5))
        {
            throw ParameterError("band half-width W must lie in (0, 1/2], got " +
                                 std::to_string(w));
        }
    }

    friend bool operator==(const BandSpec&, const BandSpec&) = default;
};

/// Map a circle point to its canonical representative in [-1/2, 1/2).
template <typename Real>
Real canonical_frequency(Real f)
{
    Real r = f - std::floor(f + Real(0.5));
    return r >= Real(0.5) ? r - Real(1) : r;
}

namespace detail
{

template <typename Real>
std::complex<Real> unit_phase(Real turns)
{
    // reduce first so large arguments keep full accuracy
    const Real t = turns - std::round(turns);
    const Real a = Real(2) * std::numbers::pi_v<Real> * t;
    return {std::cos(a), std::sin(a)};
}

inline void require_kind(const GroupSpec& g, GroupKind k, const char* what)
{
    if (g.kind != k)
    {
        throw DomainError(std::string("character_eval: ") + what +
                          " point does not belong to this group");
    }
}

} // namespace detail

/// chi_f(n) = exp(j 2 pi f n) on Z.
template <typename Real = double>
std::complex<Real> character_eval(const GroupSpec& group, Real f, Index n)
{
    detail::require_kind(group, GroupKind::IntLine, "circle");
    if (!std::isfinite(f))
    {
        throw DomainError("character_eval: dual point must be finite");
    }
    // f n mod 1 computed on the canonical frequency to limit cancellation
    const Real fc = canonical_frequency(f);
    return detail::unit_phase<Real>(fc * static_cast<Real>(n));
}

/// chi_k(n) = exp(j 2 pi k n / N) on Z_N.
template <typename Real = double>
std::complex<Real> character_eval(const GroupSpec& group, Index k, Index n)
{
    detail::require_kind(group, GroupKind::CyclicN, "Z_N");
    const Index N = group.modulus;
    if (k < 0 || k >= N || n < 0 || n >= N)
    {
        throw DomainError("character_eval: Z_N elements must lie in [0, N)");
    }
    const Index r = (k * n) % N;
    return detail::unit_phase<Real>(static_cast<Real>(r) / static_cast<Real>(N));
}

/// chi_(f1,f2)(n1,n2) = exp(j 2 pi (f1 n1 + f2 n2)) on Z x Z.
template <typename Real = double>
std::complex<Real> character_eval(const GroupSpec& group,
                                  const std::array<Real, 2>& f,
                                  const std::array<Index, 2>& n)
{
    detail::require_kind(group, GroupKind::Product2D, "torus");
    if (!std::isfinite(f[0]) || !std::isfinite(f[1]))
    {
        throw DomainError("character_eval: dual point must be finite");
    }
    const Real t = canonical_frequency(f[0]) * static_cast<Real>(n[0]) +
                   canonical_frequency(f[1]) * static_cast<Real>(n[1]);
    return detail::unit_phase<Real>(t);
}

/// Haar measure of the band under the dual measure fixed by the group.
inline double band_measure(const GroupSpec& group, const BandSpec& band)
{
    switch (band.kind)
    {
    case BandKind::SymmetricBand:
        if (group.kind != GroupKind::IntLine)
        {
            throw ConfigError("symmetric band requires the group Z");
        }
        return 2.0 * band.width[0];
    case BandKind::IndexBlock:
        if (group.kind != GroupKind::CyclicN || group.modulus != band.modulus)
        {
            throw ConfigError("index band requires Z_N with matching modulus");
        }
        return static_cast<double>(band.count) /
               static_cast<double>(group.modulus);
    case BandKind::ProductBand:
        if (group.kind != GroupKind::Product2D)
        {
            throw ConfigError("product band requires the group Z x Z");
        }
        return 4.0 * band.width[0] * band.width[1];
    }
    throw ConfigError("unknown band kind");
}

/// Check that a window can live on the group.
inline void validate_window(const GroupSpec& group, const TimeWindow& window)
{
    const bool two_d = window.kind == WindowKind::Block2D;
    if (two_d != (group.kind == GroupKind::Product2D))
    {
        throw ConfigError("window dimensionality does not match the group");
    }
    if (group.kind == GroupKind::CyclicN && window.sizes[0] > group.modulus)
    {
        throw ConfigError("window length M=" + std::to_string(window.sizes[0]) +
                          " exceeds the modulus N=" +
                          std::to_string(group.modulus));
    }
}

inline std::string to_string(GroupKind k)
{
    switch (k)
    {
    case GroupKind::IntLine:
        return "Z";
    case GroupKind::CyclicN:
        return "ZN";
    case GroupKind::Product2D:
        return "Z2";
    }
    return "?";
}

} // namespace prolate

#endif // PROLATE_GROUP_HPP
