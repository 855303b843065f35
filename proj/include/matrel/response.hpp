#ifndef MATREL_RESPONSE_HPP
#define MATREL_RESPONSE_HPP

/**
 * @file response.hpp
 * @brief End-to-end channel responses: expected absorbed count N(t) at the
 *        receiver for a given release profile.
 */

#include <functional>

#include "matrel/types.hpp"

namespace matrel {

/**
 * @brief N(t) = integral_0^t p_s(t - xi) Mbar(xi) dxi per grid point, where
 *        Mbar is the step-extended release (fraction * M_inf, held at M_inf
 *        beyond the end of release).
 *
 * The release curve must either end at fraction ~1 or span the response
 * grid; otherwise the extension would be a guess and std::invalid_argument
 * is thrown. Evaluated by adaptive quadrature; accuracy failures propagate.
 */
ResponseCurve response_convolution(const ReleaseCurve& release, const MatrixParams& m,
                                   const ChannelParams& c, const TimeGrid& grid);

/// Same convolution with the release fraction given as a callable (exact
/// model evaluation instead of interpolation).
ResponseCurve response_convolution(const std::function<double(double)>& fraction,
                                   const MatrixParams& m, const ChannelParams& c,
                                   const TimeGrid& grid);

/// Single-point version of the callable convolution [count].
double response_convolution_at(double t, const std::function<double(double)>& fraction,
                               const MatrixParams& m, const ChannelParams& c);

/**
 * @brief Closed-form N(t) for instantaneous release from the uniformly loaded
 *        sphere (A/C_s = 1, equivalently a transparent spherical TX).
 *
 * The series terms pair exp(gamma_n t) with erfc of arguments that are
 * complex for gamma_n < 0; they are evaluated exactly as
 * e^{-beta/t} Im w(sqrt(|gamma_n| t) + i sqrt(beta/t)) with w the Faddeeva
 * function, which is overflow-free for every n and t.
 */
double response_instantaneous(double t, const MatrixParams& m, const ChannelParams& c,
                              int n_terms = 300);

ResponseCurve response_instantaneous_curve(const MatrixParams& m, const ChannelParams& c,
                                           const TimeGrid& grid, int n_terms = 300);

/**
 * @brief Fills the rate column with dN/dt by central differences on the grid
 *        (one-sided at the ends). Requires >= 3 grid points.
 */
ResponseCurve absorption_rate(const ResponseCurve& curve);

} // namespace matrel

#endif
