///
/// \file symbol.hpp
///
/// Symbols of Toeplitz operators on Z: the DTFT
///
///   h^(f) = sum_n h[n] exp(-j 2 pi f n),   f in [0, 1),
///
/// either in closed form (trigonometric polynomial, band indicator) or as
/// uniform samples on [0, 1).
///
#ifndef PROLATE_SYMBOL_HPP
#define PROLATE_SYMBOL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "prolate/errors.hpp"
#include "prolate/fft.hpp"
#include "prolate/group.hpp"

namespace prolate
{

/// Fourier coefficient of the indicator of [-W, W]: sin(2 pi W k) / (pi k),
/// with the k = 0 value 2W set exactly.
template <typename Real>
Real band_indicator_coefficient(Real w, Index k)
{
    if (k == 0)
    {
        return Real(2) * w;
    }
    const Real pk = std::numbers::pi_v<Real> * static_cast<Real>(k);
    // sin(2 pi W k) with the argument reduced modulo one turn
    const Real turns = w * static_cast<Real>(k);
    const Real red   = turns - std::round(turns);
    return std::sin(Real(2) * std::numbers::pi_v<Real> * red) / pk;
}

///
/// Closed-form symbol.
///
template <typename Real = double>
class Symbol
{
public:
    using Complex = std::complex<Real>;

    enum class Kind
    {
        Trigonometric, ///< finitely many nonzero coefficients
        BandIndicator, ///< 1 on [-W, W], 0 elsewhere
    };

    static Symbol constant(Real c)
    {
        return trigonometric({{0, Complex(c)}});
    }

    /// h^(f) = sum_k coeffs[k] exp(-j 2 pi f k).
    static Symbol trigonometric(std::map<Index, Complex> coeffs)
    {
        Symbol s;
        s.m_kind = Kind::Trigonometric;
        for (auto it = coeffs.begin(); it != coeffs.end();)
        {
            it = it->second == Complex(0) ? coeffs.erase(it) : std::next(it);
        }
        s.m_coeffs = std::move(coeffs);
        return s;
    }

    /// a + b cos(2 pi f)
    static Symbol cosine(Real a, Real b)
    {
        return trigonometric({{-1, Complex(b / 2)}, {0, Complex(a)}, {1, Complex(b / 2)}});
    }

    static Symbol band_indicator(Real w)
    {
        BandSpec::check_width(static_cast<double>(w));
        Symbol s;
        s.m_kind  = Kind::BandIndicator;
        s.m_width = w;
        return s;
    }

    Kind kind() const
    {
        return m_kind;
    }

    Real width() const
    {
        return m_width;
    }

    const std::map<Index, Complex>& coefficients() const
    {
        return m_coeffs;
    }

    /// Largest |k| with a nonzero coefficient; -1 for infinite support.
    Index bandwidth() const
    {
        if (m_kind != Kind::Trigonometric)
        {
            return -1;
        }
        Index b = 0;
        for (const auto& [k, c] : m_coeffs)
        {
            b = std::max(b, k < 0 ? -k : k);
        }
        return b;
    }

    /// Exact Fourier coefficient h[k] = int_0^1 h^(f) exp(j 2 pi f k) df.
    Complex coefficient(Index k) const
    {
        if (m_kind == Kind::BandIndicator)
        {
            return Complex(band_indicator_coefficient(m_width, k));
        }
        auto it = m_coeffs.find(k);
        return it == m_coeffs.end() ? Complex(0) : it->second;
    }

    Complex value(Real f) const
    {
        if (m_kind == Kind::BandIndicator)
        {
            return Complex(std::abs(canonical_frequency(f)) <= m_width ? 1 : 0);
        }
        Complex acc(0);
        for (const auto& [k, c] : m_coeffs)
        {
            acc += c * detail::unit_phase<Real>(-f * static_cast<Real>(k));
        }
        return acc;
    }

    bool is_real(Real tol = Real(1e-12)) const
    {
        for (const auto& [k, c] : m_coeffs)
        {
            if (std::abs(c - std::conj(coefficient(-k))) > tol)
            {
                return false;
            }
        }
        return true;
    }

    /// |h^|^2 in closed form: the autocorrelation of the coefficient sequence.
    Symbol modulus_squared() const
    {
        if (m_kind == Kind::BandIndicator)
        {
            return *this;
        }
        std::map<Index, Complex> out;
        for (const auto& [k1, c1] : m_coeffs)
        {
            for (const auto& [k2, c2] : m_coeffs)
            {
                out[k1 - k2] += c1 * std::conj(c2);
            }
        }
        return trigonometric(std::move(out));
    }

    std::string tag() const
    {
        std::ostringstream os;
        os.precision(17);
        if (m_kind == Kind::BandIndicator)
        {
            os << "indicator(W=" << m_width << ")";
            return os.str();
        }
        os << "trig(";
        bool first = true;
        for (const auto& [k, c] : m_coeffs)
        {
            os << (first ? "" : ",") << k << ":" << c.real();
            if (c.imag() != 0)
            {
                os << (c.imag() > 0 ? "+" : "") << c.imag() << "j";
            }
            first = false;
        }
        os << ")";
        return os.str();
    }

private:
    Kind m_kind = Kind::Trigonometric;
    std::map<Index, Complex> m_coeffs;
    Real m_width = 0;
};

///
/// Symbol values sampled at f_m = m / G, m = 0..G-1.
///
template <typename Real = double>
class SymbolGrid
{
public:
    using Complex = std::complex<Real>;
    using Samples = ComplexVector<Real>;

    SymbolGrid() = default;

    explicit SymbolGrid(Samples samples) : m_samples(std::move(samples))
    {
        if (m_samples.size() < 1)
        {
            throw ParameterError("symbol grid must contain at least one sample");
        }
        m_real = (m_samples.imag().cwiseAbs().maxCoeff() <= Real(1e-12));
        if (m_real)
        {
            m_samples.imag().setZero();
        }
    }

    /// Sample a closed-form Symbol or any callable f -> h^(f) on a uniform grid of size G.
    template <typename Fn>
    static SymbolGrid sample(Fn&& fn, Index grid_size)
    {
        if (grid_size < 1)
        {
            throw ParameterError("grid size must be positive");
        }
        Samples s(grid_size);
        for (Index m = 0; m < grid_size; ++m)
        {
            const Real f = static_cast<Real>(m) / static_cast<Real>(grid_size);
            if constexpr (requires { fn.value(f); })
            {
                s[m] = Complex(fn.value(f));
            }
            else
            {
                s[m] = Complex(fn(f));
            }
        }
        return SymbolGrid(std::move(s));
    }

    Index grid_size() const
    {
        return m_samples.size();
    }

    bool real_flag() const
    {
        return m_real;
    }

    const Samples& samples() const
    {
        return m_samples;
    }

    Real frequency(Index m) const
    {
        return static_cast<Real>(m) / static_cast<Real>(grid_size());
    }

    /// Pointwise |h^|^2.
    SymbolGrid modulus_squared() const
    {
        Samples s = m_samples.cwiseAbs2().template cast<Complex>();
        return SymbolGrid(std::move(s));
    }

    /// Trapezoid (periodic) quadrature of h[k] for all k, returned as a
    /// length-G vector indexed modulo G.
    Samples coefficients() const
    {
        return fft_inverse<Real>(m_samples);
    }

private:
    Samples m_samples;
    bool m_real = true;
};

} // namespace prolate

#endif // PROLATE_SYMBOL_HPP
