#ifndef MATREL_RELEASE_HPP
#define MATREL_RELEASE_HPP

/**
 * @file release.hpp
 * @brief Molecule release from a spherical homogeneous matrix carrier.
 *
 * Five descriptions of the same moving-boundary process:
 *  - the double-integration heat-balance solution (Lee), parameterized by the
 *    normalized front depth delta = 1 - R/a,
 *  - its large-A/C_s closed form in time (Frenning, cubic-root/arccos form),
 *  - the further-simplified micelle variant (arcsin form, C_s/A -> 0),
 *  - the series solution for instantaneous release (A/C_s <= 1),
 *  - a finite-difference oracle for the governing Stefan problem.
 *
 * Fractions are M(t)/M_inf in [0,1]; fronts are R(t)/a in [0,1].
 */

#include <optional>
#include <string>

#include "matrel/types.hpp"

namespace matrel {

/// Coefficients of the heat-balance release polynomial at a given front depth.
/// a1 = 1, a2 = -a3 - 1, a3 = lambda - sqrt(lambda^2 - 1),
/// lambda = 1 + (A/C_s - 1)(1 - delta).
struct LeeCoefficients {
    double a1, a2, a3, lambda;

    static LeeCoefficients at(double delta, double loading_ratio);
};

/// Released fraction as a function of front depth delta in [0,1].
/// Exact endpoint: M(1)/M_inf = 1 - 1/(4 A/C_s).
double lee_fraction(double delta, double loading_ratio);

/// Normalized time D_m t / a^2 at which the front reaches depth delta.
double lee_normalized_time(double delta, double loading_ratio);

/// Time [s] at which the front reaches depth delta.
double lee_time_of_front(double delta, const MatrixParams& m);

/// Total release duration t_rel = (a^2/D_m)(A/(6 C_s) - 1/12) [s].
double release_time(const MatrixParams& m);

/**
 * @brief Released-fraction curve by inverting the front-depth time map.
 *
 * delta(t) is found by bisection per grid point; times at or beyond t_rel
 * clamp to fraction 1 (step-extended release).
 *
 * The time map is not globally monotone: the a3 coefficient has a
 * square-root cusp at delta = 1 that bends t(delta) slightly above t_rel in
 * a terminal window of width ~0.4/(A/C_s - 1). Inversion remains
 * single-valued for t < t_rel because the overshoot stays above t_rel;
 * construction verifies this on a 1000-point grid and raises accuracy_error
 * otherwise.
 *
 * The returned curve carries the front column R/a = 1 - delta.
 */
ReleaseCurve lee_release_curve(const MatrixParams& m, const TimeGrid& grid);

/// End of the Frenning/micelle formulas' time domain,
/// t_edge = (A/C_s) a^2 / (6 D_m); the front hits the centre just before it.
double frenning_time_edge(const MatrixParams& m);

/// Closed-form front position R/a at time t (arccos form), clamped to [0,1].
/// Requires loading_ratio >= 10; the exact endpoint evaluates to -C_s/(3A)
/// and relies on the clamp. Arguments outside the arccos domain beyond a
/// 1e-12 slack throw std::invalid_argument.
double frenning_front(double t, const MatrixParams& m);

/// Released fraction 1 - (R/a)^3 + (C_s/2A)[2(R/a)^3 - (R/a)^2 - R/a],
/// clamped to [0,1].
double frenning_fraction(double t, const MatrixParams& m);

ReleaseCurve frenning_release_curve(const MatrixParams& m, const TimeGrid& grid);

/// Micelle-regime front position R/a = 1/2 + sin(arcsin(1 - 12 C_s D_m t/(A a^2))/3).
/// Reaches 0 exactly at t_edge. Requires loading_ratio >= 10.
double micelle_front(double t, const MatrixParams& m);

/// Micelle-regime released fraction 1 - (R/a)^3.
double micelle_fraction(double t, const MatrixParams& m);

ReleaseCurve micelle_release_curve(const MatrixParams& m, const TimeGrid& grid);

/**
 * @brief Series released fraction for instantaneous dissolution (A/C_s <= 1):
 *        1 - (6/pi^2) sum exp(gamma_n t)/n^2, gamma_n = -D_m n^2 pi^2 / a^2.
 *
 * t = 0 returns exactly 0 (the truncated sum would leave a ~1/n_terms
 * residual there).
 */
double instantaneous_fraction(double t, const MatrixParams& m, int n_terms = 300);

ReleaseCurve instantaneous_release_curve(const MatrixParams& m, const TimeGrid& grid,
                                         int n_terms = 300);

/// Advisory accuracy note for the approximate models (nullopt when the
/// parameters are comfortably inside the model's validated range).
/// The library never prints; the CLI surfaces these.
std::optional<std::string> lee_validity_note(double loading_ratio);
std::optional<std::string> frenning_validity_note(double loading_ratio);
std::optional<std::string> micelle_validity_note(double loading_ratio);

/// Finite-difference oracle configuration.
struct FdmConfig {
    int n_space = 100;        ///< spatial grid points, >= 100
    double dt = 0.0;          ///< max time step [s]; 0 selects 0.25 (a/n)^2 / D_m
    double front_tol = 1e-3;  ///< stop the moving-front phase at R/a < front_tol

    /// dt must satisfy dt <= 0.25 (a/n_space)^2 / D_m; throws otherwise.
    /// Returns a copy with dt filled in when it was 0.
    FdmConfig resolved_for(const MatrixParams& m) const;
};

/**
 * @brief Numerical solution of the moving-boundary release problem.
 *
 * Solves dC/dt = x^-2 d/dx (x^2 D_m dC/dx) on [R(t), a] with C(a) = 0,
 * C(R) = C_s and the front condition D_m dC/dx|_R = (A - C_s) dR/dt, via
 * u = x C on a front-fixed grid (backward-Euler in time, explicit front
 * update). After the front reaches front_tol the remaining solution is
 * drained on a fixed grid. Front positions are emitted in the curve's front
 * column (0 once the front has vanished) for consumption by the particle
 * simulation.
 *
 * Throws accuracy_error if the front stalls beyond the step budget.
 */
ReleaseCurve fdm_release_oracle(const MatrixParams& m, const FdmConfig& cfg = {});

} // namespace matrel

#endif
