#ifndef MATREL_TYPES_HPP
#define MATREL_TYPES_HPP

/**
 * @file types.hpp
 * @brief Shared domain types for matrix-carrier release and channel response
 *        calculations. All quantities are SI (m, s, molecule counts); drug
 *        loading enters only through the dimensionless ratio A/C_s.
 */

#include <cstddef>
#include <vector>

namespace matrel {

/// Spherical homogeneous matrix carrier: geometry and release physics.
struct MatrixParams {
    double radius;           ///< core radius a [m]
    double diffusion;        ///< diffusion coefficient inside the matrix D_m [m²/s]
    double loading_ratio;    ///< initial loading over solubility A/C_s [-]
    double total_molecules;  ///< loaded molecule count M_inf [count]

    /// Throws std::invalid_argument on violated invariants
    /// (a > 0, D_m > 0, loading_ratio > 0, M_inf >= 1).
    /// Ratios below 1 are legal: they select the instantaneous-release model.
    void validate() const;

    /// Same as validate() but additionally requires loading_ratio >= 1,
    /// the domain of the gradual (moving-front) release models.
    void validate_gradual() const;
};

/// Free-medium diffusion channel between the carrier and an absorbing
/// spherical receiver.
struct ChannelParams {
    double diffusion;        ///< diffusion coefficient in the release medium D_c [m²/s]
    double distance;         ///< centre-to-centre TX-RX distance d [m]
    double receiver_radius;  ///< absorbing receiver radius r_RX [m]

    /// Throws std::invalid_argument unless D_c > 0 and d > r_RX.
    void validate() const;

    /// Non-overlapping bodies: d > a + r_RX. Throws std::invalid_argument.
    void validate_with(const MatrixParams& m) const;

    /// Asymptotic hitting fraction r_RX / d.
    double hitting_fraction() const { return receiver_radius / distance; }
};

enum class GridSpacing { linear, logarithmic };

/// Strictly increasing sequence of sample times [s].
struct TimeGrid {
    std::vector<double> points;
    GridSpacing spacing = GridSpacing::linear;

    static TimeGrid make_linear(double t_begin, double t_end, std::size_t n);
    /// Logarithmic grid; t_begin must be > 0.
    static TimeGrid make_logarithmic(double t_begin, double t_end, std::size_t n);

    std::size_t size() const { return points.size(); }
    double front() const { return points.front(); }
    double back() const { return points.back(); }

    /// points[0] >= 0, strictly increasing, length >= 2.
    void validate() const;

    bool same_as(const TimeGrid& other, double rel_tol = 1e-12) const;
};

/// Released fraction M(t)/M_inf over a time grid, optionally with the
/// normalized front position R(t)/a.
struct ReleaseCurve {
    TimeGrid grid;
    std::vector<double> fraction;  ///< in [0,1], non-decreasing
    std::vector<double> front;     ///< R/a in [0,1], non-increasing; empty if not tracked

    bool has_front() const { return !front.empty(); }
    void validate() const;

    /// Released fraction at arbitrary time: linear interpolation on the grid,
    /// 0 before the first point, held at the last value beyond the grid.
    double fraction_at(double t) const;
};

/// Expected absorbed count N(t) at the receiver, optionally with the
/// absorption rate dN/dt.
struct ResponseCurve {
    TimeGrid grid;
    std::vector<double> absorbed;  ///< [count], >= 0, non-decreasing
    std::vector<double> rate;      ///< [count/s]; empty until absorption_rate() fills it

    bool has_rate() const { return !rate.empty(); }

    /// Checks non-negativity, monotonicity, and the asymptotic bound
    /// N(t) <= M_inf * r_RX/d (with a small relative slack for quadrature noise).
    void validate(double asymptotic_bound) const;
};

} // namespace matrel

#endif
