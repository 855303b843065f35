#ifndef MATREL_SPECIAL_HPP
#define MATREL_SPECIAL_HPP

/**
 * @file special.hpp
 * @brief Error-function family used throughout the channel and regime
 *        calculations: erf, erfc, the inverse of erfc, and the imaginary
 *        part of the Faddeeva function w(z) needed by the closed-form
 *        channel response series.
 */

#include <complex>

namespace matrel {

double erf(double x);
double erfc(double x);

/**
 * @brief Functional inverse of erfc on (0, 2).
 *
 * Initial rational approximation of the normal quantile refined by Newton
 * iterations on erfc; round-trips to ~1e-13 relative over the full domain.
 *
 * Throws std::invalid_argument for y <= 0 or y >= 2.
 */
double erfc_inv(double y);

/**
 * @brief Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im(z) >= 0.
 *
 * Weideman's rational approximation (N = 48 terms), accurate to ~1e-12
 * on the closed upper half-plane. On the real axis Re w(x) = exp(-x^2)
 * and Im w(x) = 2 F(x)/sqrt(pi) with F the Dawson integral.
 */
std::complex<double> faddeeva(std::complex<double> z);

/// Im w(re + i*im) for im >= 0; the building block of the response series.
double faddeeva_im(double re, double im);

} // namespace matrel

#endif
