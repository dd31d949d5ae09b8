///
/// \file fft.hpp
///
/// Thin wrapper over Eigen's FFT module with the sign conventions used
/// throughout the library:
///
///   forward:  X[m] = sum_n x[n] exp(-j 2 pi m n / L)
///   inverse:  x[n] = (1/L) sum_m X[m] exp(+j 2 pi m n / L)
///
#ifndef PROLATE_FFT_HPP
#define PROLATE_FFT_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace prolate
{

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
ComplexVector<Real> fft_forward(const ComplexVector<Real>& x)
{
    if (x.size() <= 1)
    {
        return x; // kissfft does not handle length 1
    }
    Eigen::FFT<Real> fft;
    std::vector<std::complex<Real>> in(x.data(), x.data() + x.size());
    std::vector<std::complex<Real>> out;
    fft.fwd(out, in);
    return Eigen::Map<ComplexVector<Real>>(out.data(), static_cast<Eigen::Index>(out.size()));
}

template <typename Real>
ComplexVector<Real> fft_inverse(const ComplexVector<Real>& x)
{
    if (x.size() <= 1)
    {
        return x;
    }
    Eigen::FFT<Real> fft; // inverse is scaled by 1/L by default
    std::vector<std::complex<Real>> in(x.data(), x.data() + x.size());
    std::vector<std::complex<Real>> out;
    fft.inv(out, in);
    return Eigen::Map<ComplexVector<Real>>(out.data(), static_cast<Eigen::Index>(out.size()));
}

/// Smallest power of two >= n.
inline Eigen::Index next_pow2(Eigen::Index n)
{
    Eigen::Index p = 1;
    while (p < n)
    {
        p <<= 1;
    }
    return p;
}

} // namespace prolate

#endif // PROLATE_FFT_HPP
