#include "matrel/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace matrel {

double find_root_monotone(const std::function<double(double)>& f,
                          double lo, double hi, double tol)
{
    if (!(lo <= hi))
        throw std::invalid_argument("find_root_monotone: lo > hi");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("find_root_monotone: no sign change on bracket");

    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi)
            return mid;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace matrel
