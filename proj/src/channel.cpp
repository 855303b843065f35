#include "matrel/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "matrel/special.hpp"

namespace matrel {

SurfaceChannelConstants SurfaceChannelConstants::from(const MatrixParams& m,
                                                      const ChannelParams& c)
{
    c.validate_with(m);
    const double a = m.radius, d = c.distance, r = c.receiver_radius;
    SurfaceChannelConstants k;
    k.beta1 = (d - a - r) * (d - a - r) / (4.0 * c.diffusion);
    k.beta2 = (d + a - r) * (d + a - r) / (4.0 * c.diffusion);
    k.rho = 1.0 / (4.0 * M_PI * a * a);
    return k;
}

double hitting_rate_surface(double t, const MatrixParams& m, const ChannelParams& c)
{
    const SurfaceChannelConstants k = SurfaceChannelConstants::from(m, c);
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (t == 0.0)
        return 0.0;  // limit value; exp(-beta/t) wins against 1/sqrt(t)
    const double pref = 2.0 * k.rho * m.radius * c.receiver_radius / c.distance;
    return pref * std::sqrt(M_PI * c.diffusion / t)
           * (std::exp(-k.beta1 / t) - std::exp(-k.beta2 / t));
}

double absorbed_fraction_surface(double t, const MatrixParams& m, const ChannelParams& c)
{
    const SurfaceChannelConstants k = SurfaceChannelConstants::from(m, c);
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (t == 0.0)
        return 0.0;
    const double sb1 = std::sqrt(k.beta1), sb2 = std::sqrt(k.beta2);
    const double pref = 4.0 * k.rho * m.radius * c.receiver_radius / c.distance
                        * std::sqrt(M_PI * c.diffusion);
    const double sqrt_pi = std::sqrt(M_PI);
    const double v = std::sqrt(t) * (std::exp(-k.beta1 / t) - std::exp(-k.beta2 / t))
                     - sqrt_pi * (sb2 * erf(std::sqrt(k.beta2 / t)) - sb1 * erf(std::sqrt(k.beta1 / t)))
                     + sqrt_pi * (sb2 - sb1);
    return pref * v;
}

double absorbed_fraction_point(double t, const ChannelParams& c)
{
    c.validate();
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (t == 0.0)
        return 0.0;
    const double arg = (c.distance - c.receiver_radius) / std::sqrt(4.0 * c.diffusion * t);
    return c.hitting_fraction() * erfc(arg);
}

HittingRateFn::HittingRateFn(const MatrixParams& m, const ChannelParams& c)
    : k_(SurfaceChannelConstants::from(m, c))
{
    prefactor_ = 2.0 * k_.rho * m.radius * c.receiver_radius / c.distance
                 * std::sqrt(M_PI * c.diffusion);
}

double HittingRateFn::operator()(double t) const
{
    if (t <= 0.0)
        return 0.0;
    return prefactor_ / std::sqrt(t) * (std::exp(-k_.beta1 / t) - std::exp(-k_.beta2 / t));
}

} // namespace matrel
