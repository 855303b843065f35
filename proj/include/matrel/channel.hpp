#ifndef MATREL_CHANNEL_HPP
#define MATREL_CHANNEL_HPP

/**
 * @file channel.hpp
 * @brief Diffusive channel between a spherical-surface (or point) release and
 *        a fully absorbing spherical receiver in unbounded 3D space.
 *
 * All quantities are per released molecule: the hitting rate p_s(t) [1/s]
 * integrates to the asymptotic hitting fraction r_RX/d.
 */

#include "matrel/types.hpp"

namespace matrel {

/// Time-scale constants of the surface-release hitting rate.
struct SurfaceChannelConstants {
    double beta1;  ///< (d - a - r_RX)^2 / (4 D_c) [s]
    double beta2;  ///< (d + a - r_RX)^2 / (4 D_c) [s]
    double rho;    ///< surface density normalizer 1/(4 pi a^2) [1/m^2]

    /// Throws std::invalid_argument when d <= a + r_RX (overlapping bodies).
    static SurfaceChannelConstants from(const MatrixParams& m, const ChannelParams& c);
};

/**
 * @brief First-hit rate at the receiver for molecules released from the
 *        carrier surface at t = 0:
 *        p_s(t) = (2 rho a r_RX / d) sqrt(pi D_c / t)
 *                 [exp(-beta1/t) - exp(-beta2/t)].
 *
 * p_s(0) is defined as the limit value 0.
 */
double hitting_rate_surface(double t, const MatrixParams& m, const ChannelParams& c);

/// Closed-form N_s(t) = integral of p_s over [0, t]; N_s(inf) = r_RX/d.
double absorbed_fraction_surface(double t, const MatrixParams& m, const ChannelParams& c);

/// Point-release absorbed fraction N_p(t) = (r_RX/d) erfc((d - r_RX)/sqrt(4 D_c t)).
double absorbed_fraction_point(double t, const ChannelParams& c);

/// p_s as a function object with the geometry validated and the constants
/// precomputed once; quadrature kernels evaluate this thousands of times.
class HittingRateFn {
public:
    HittingRateFn(const MatrixParams& m, const ChannelParams& c);

    double operator()(double t) const;

    double beta1() const { return k_.beta1; }
    double beta2() const { return k_.beta2; }

private:
    SurfaceChannelConstants k_;
    double prefactor_;  ///< (2 rho a r_RX / d) sqrt(pi D_c)
};

} // namespace matrel

#endif
