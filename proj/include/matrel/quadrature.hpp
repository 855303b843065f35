#ifndef MATREL_QUADRATURE_HPP
#define MATREL_QUADRATURE_HPP

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod 7/15 quadrature with global error control.
 *
 * Integrands of the form t^(-1/2) exp(-c/t) (hitting-rate kernels) are the
 * design target: they are smooth in the interior with an essential-singularity
 * flat spot at t = 0, which global worst-interval refinement resolves without
 * special casing. Callers define f(0) as its limit value.
 */

#include <functional>
#include <span>

namespace matrel {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;        ///< acceptance floor for near-zero integrals
    int max_intervals = 4000;    ///< subdivision budget before accuracy_error
};

/**
 * @brief Integrate f over [lo, hi] adaptively.
 *
 * Result carries an estimated error <= max(rel_tol*|I|, abs_tol).
 * Throws matrel::accuracy_error (carrying the best estimate) when the
 * subdivision budget is exhausted first, and std::invalid_argument if lo > hi.
 *
 * @param seeds optional interior breakpoints used as the initial partition,
 *        useful when the caller knows where a spike lives.
 */
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opt = {},
                 std::span<const double> seeds = {});

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol);

/**
 * @brief Integrate f over [lo, inf) via the substitution t = lo + u/(1-u),
 *        which maps the half-line onto [0, 1).
 */
double integrate_to_inf(const std::function<double(double)>& f, double lo,
                        const QuadratureOptions& opt = {});

} // namespace matrel

#endif
