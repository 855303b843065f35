#ifndef MATREL_REGIMES_HPP
#define MATREL_REGIMES_HPP

/**
 * @file regimes.hpp
 * @brief Release-vs-channel regime criterion tau = t_rel / t_abs, the
 *        limiting-regime closed-form responses, their error upper bounds,
 *        and the NRMSE / %-deviation metrics.
 */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matrel/types.hpp"

namespace matrel {

enum class Regime { channel_dominated, intermediate, release_dominated };

std::string to_string(Regime r);

/// Classification thresholds on tau. The asymptotic statements are tau << 1
/// and tau >> 1; two decades from 1 keeps the approximation NRMSE below ~1e-2.
struct RegimeThresholds {
    double tau_low = 1e-2;
    double tau_high = 1e2;
};

struct RegimeReport {
    double t_rel;         ///< release duration [s] (0 for loading_ratio <= 1)
    double t_abs;         ///< sigma-quantile absorption duration [s]
    double t_peak_point;  ///< peak time of the point-TX hitting rate [s]
    double tau;           ///< t_rel / t_abs (0 for loading_ratio <= 1)
    double sigma;
    Regime classification;
    RegimeThresholds thresholds;

    double t_max() const { return t_rel + t_abs; }
};

/// t_abs(sigma) = (d - r_RX)^2 / (4 D_c) / erfc_inv(sigma)^2; defined through
/// the point-TX response, N_p(t_abs) = sigma * r_RX/d exactly.
double absorption_time(double sigma, const ChannelParams& c);

/// Peak time of the point-TX hitting rate, (d - r_RX)^2 / (6 D_c).
double point_peak_time(const ChannelParams& c);

/// tau = (2 a^2 / (3 (d - r_RX)^2)) (D_c/D_m) (A/C_s - 1/2) erfc_inv(sigma)^2
/// for loading_ratio > 1, else 0 (instantaneous release).
RegimeReport regime_ratio(const MatrixParams& m, const ChannelParams& c,
                          double sigma = 0.99, RegimeThresholds thresholds = {});

/// Channel-dominated approximation: N~(t) = M_inf * N_s(t).
ResponseCurve approx_channel_dominated(const MatrixParams& m, const ChannelParams& c,
                                       const TimeGrid& grid);

/// Release-dominated approximation: N~(t) = Mbar(t) * r_RX / d, on the
/// release curve's grid. total_molecules scales the dimensionless release
/// fraction into counts.
ResponseCurve approx_release_dominated(const ReleaseCurve& release, const ChannelParams& c,
                                       double total_molecules);

/// Appendix-A bound M_inf * p_s(t) * t_rel on the channel-dominated
/// approximation error [count].
double error_bound_channel_dominated(double t, const MatrixParams& m, const ChannelParams& c);

/// Appendix-B bound (r_RX/d) * m(t) * t_abs with m(t) = dMbar/dt [count];
/// release_rate is the caller-supplied m(t) value [count/s].
double error_bound_release_dominated(double t, double release_rate,
                                     const ChannelParams& c, double t_abs);

/**
 * @brief Actual approximation errors, evaluated in forms that stay
 *        well-conditioned where the error is tiny relative to N(t):
 *
 *  channel-dominated: M_inf * int_{max(0, t - t_rel)}^{t} p_s(u) (1 - frac(t-u)) du
 *  release-dominated: M_inf * [ frac(t)(r/d - N_s(t))
 *                               + int_0^t p_s(u)(frac(t) - frac(t-u)) du ]
 *
 * `fraction` is the model release fraction (step-extended) and t_rel its
 * release duration. Both errors are >= 0 [count].
 */
double approx_error_channel_dominated(double t, const std::function<double(double)>& fraction,
                                      double t_rel, const MatrixParams& m,
                                      const ChannelParams& c);
double approx_error_release_dominated(double t, const std::function<double(double)>& fraction,
                                      const MatrixParams& m, const ChannelParams& c);

/**
 * @brief NRMSE = (1/n_infinity) sqrt( int (approx - actual)^2 dt / time_scale )
 *        by the trapezoid rule over the common grid.
 *
 * n_infinity is the asymptotic absorbed count M_inf * r_RX/d. time_scale
 * makes the time measure explicit: 1 s integrates raw time; t_max
 * normalizes the axis the way the deviation figures do. Grid mismatch
 * throws std::invalid_argument.
 */
double nrmse(const ResponseCurve& approx, const ResponseCurve& actual,
             double n_infinity, double time_scale = 1.0);

/// Same metric on raw sampled error values.
double nrmse_curve(const std::vector<double>& error, const TimeGrid& grid,
                   double n_infinity, double time_scale = 1.0);

/// Pointwise deviation (approx - actual)/actual * 100%; points with
/// actual == 0 are reported as missing rather than infinite.
std::vector<std::optional<double>> percent_deviation(const ResponseCurve& approx,
                                                     const ResponseCurve& actual);

} // namespace matrel

#endif
