#ifndef MATREL_ROOTS_HPP
#define MATREL_ROOTS_HPP

#include <functional>

namespace matrel {

/**
 * @brief Bracketed bisection for a monotone function with f(lo)*f(hi) <= 0.
 *
 * Deterministic; stops when the bracket width falls below
 * tol * max(1, |midpoint|). Throws std::invalid_argument when the bracket
 * carries no sign change.
 */
double find_root_monotone(const std::function<double(double)>& f,
                          double lo, double hi, double tol = 1e-14);

} // namespace matrel

#endif
