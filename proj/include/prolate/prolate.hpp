///
/// \file prolate.hpp
///
/// Umbrella header for the numerical core.
///
#ifndef PROLATE_PROLATE_HPP
#define PROLATE_PROLATE_HPP

#include "prolate/approx.hpp"
#include "prolate/errors.hpp"
#include "prolate/fast_apply.hpp"
#include "prolate/fft.hpp"
#include "prolate/group.hpp"
#include "prolate/quadrature.hpp"
#include "prolate/spectral.hpp"
#include "prolate/symbol.hpp"
#include "prolate/toeplitz.hpp"

#endif // PROLATE_PROLATE_HPP
