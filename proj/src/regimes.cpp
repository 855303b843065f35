#include "matrel/regimes.hpp"

#include <cmath>
#include <stdexcept>

#include "matrel/channel.hpp"
#include "matrel/quadrature.hpp"
#include "matrel/release.hpp"
#include "matrel/special.hpp"

namespace matrel {

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::channel_dominated: return "channel-dominated";
    case Regime::intermediate: return "intermediate";
    case Regime::release_dominated: return "release-dominated";
    }
    return "?";
}

double absorption_time(double sigma, const ChannelParams& c)
{
    c.validate();
    if (!(sigma > 0.0) || !(sigma < 1.0))
        throw std::invalid_argument("sigma: must lie in (0, 1)");
    const double gap = c.distance - c.receiver_radius;
    const double q = erfc_inv(sigma);
    return gap * gap / (4.0 * c.diffusion) / (q * q);
}

double point_peak_time(const ChannelParams& c)
{
    c.validate();
    const double gap = c.distance - c.receiver_radius;
    return gap * gap / (6.0 * c.diffusion);
}

RegimeReport regime_ratio(const MatrixParams& m, const ChannelParams& c,
                          double sigma, RegimeThresholds thresholds)
{
    m.validate();
    RegimeReport rep;
    rep.sigma = sigma;
    rep.thresholds = thresholds;
    rep.t_abs = absorption_time(sigma, c);
    rep.t_peak_point = point_peak_time(c);

    if (m.loading_ratio <= 1.0) {
        // instantaneous release: t_rel = 0, tau = 0
        rep.t_rel = 0.0;
        rep.tau = 0.0;
        rep.classification = Regime::channel_dominated;
        return rep;
    }

    rep.t_rel = release_time(m);
    const double gap = c.distance - c.receiver_radius;
    const double q = erfc_inv(sigma);
    rep.tau = 2.0 * m.radius * m.radius / (3.0 * gap * gap)
              * (c.diffusion / m.diffusion) * (m.loading_ratio - 0.5) * q * q;

    if (rep.tau <= thresholds.tau_low)
        rep.classification = Regime::channel_dominated;
    else if (rep.tau >= thresholds.tau_high)
        rep.classification = Regime::release_dominated;
    else
        rep.classification = Regime::intermediate;
    return rep;
}

ResponseCurve approx_channel_dominated(const MatrixParams& m, const ChannelParams& c,
                                       const TimeGrid& grid)
{
    grid.validate();
    ResponseCurve out;
    out.grid = grid;
    out.absorbed.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.absorbed[i] = m.total_molecules * absorbed_fraction_surface(grid.points[i], m, c);
    out.validate(m.total_molecules * c.hitting_fraction());
    return out;
}

ResponseCurve approx_release_dominated(const ReleaseCurve& release, const ChannelParams& c,
                                       double total_molecules)
{
    release.validate();
    c.validate();
    if (!(total_molecules >= 1.0))
        throw std::invalid_argument("total_molecules: must be >= 1");
    ResponseCurve out;
    out.grid = release.grid;
    out.absorbed.resize(release.grid.size());
    for (std::size_t i = 0; i < release.grid.size(); ++i)
        out.absorbed[i] = total_molecules * release.fraction[i] * c.hitting_fraction();
    out.validate(total_molecules * c.hitting_fraction());
    return out;
}

double error_bound_channel_dominated(double t, const MatrixParams& m, const ChannelParams& c)
{
    if (!(t > 0.0))
        throw std::invalid_argument("t: time must be > 0");
    return m.total_molecules * hitting_rate_surface(t, m, c) * release_time(m);
}

double error_bound_release_dominated(double t, double release_rate,
                                     const ChannelParams& c, double t_abs)
{
    c.validate();
    if (!(t > 0.0))
        throw std::invalid_argument("t: time must be > 0");
    if (!(release_rate >= 0.0))
        throw std::invalid_argument("release_rate: must be >= 0");
    return c.hitting_fraction() * release_rate * t_abs;
}

double approx_error_channel_dominated(double t, const std::function<double(double)>& fraction,
                                      double t_rel, const MatrixParams& m,
                                      const ChannelParams& c)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (t == 0.0)
        return 0.0;
    // M_inf * int p_s(u) (1 - frac(t-u)) du; the weight vanishes for
    // t - u >= t_rel, so only the last t_rel of the kernel contributes.
    const HittingRateFn p_s(m, c);
    const double lo = std::max(0.0, t - t_rel);
    QuadratureOptions opt;
    opt.rel_tol = 1e-7;
    opt.abs_tol = 1e-9 * c.hitting_fraction();
    std::vector<double> seeds;
    for (double s = p_s.beta1() / 8.0; s < t; s *= 8.0)
        seeds.push_back(s);
    auto integrand = [&](double u) { return p_s(u) * (1.0 - fraction(t - u)); };
    return m.total_molecules * integrate(integrand, lo, t, opt, seeds);
}

double approx_error_release_dominated(double t, const std::function<double(double)>& fraction,
                                      const MatrixParams& m, const ChannelParams& c)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (t == 0.0)
        return 0.0;
    const HittingRateFn p_s(m, c);
    const double frac_t = fraction(t);
    const double term1 = frac_t * (c.hitting_fraction() - absorbed_fraction_surface(t, m, c));
    QuadratureOptions opt;
    opt.rel_tol = 1e-7;
    opt.abs_tol = 1e-9 * c.hitting_fraction();
    std::vector<double> seeds;
    for (double s = p_s.beta1() / 8.0; s < t; s *= 8.0)
        seeds.push_back(s);
    auto integrand = [&](double u) { return p_s(u) * (frac_t - fraction(t - u)); };
    const double term2 = integrate(integrand, 0.0, t, opt, seeds);
    return m.total_molecules * (term1 + term2);
}

double nrmse_curve(const std::vector<double>& error, const TimeGrid& grid,
                   double n_infinity, double time_scale)
{
    grid.validate();
    if (error.size() != grid.size())
        throw std::invalid_argument("nrmse: error/grid size mismatch");
    if (!(n_infinity > 0.0) || !(time_scale > 0.0))
        throw std::invalid_argument("nrmse: n_infinity and time_scale must be > 0");
    double acc = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid.points[i] - grid.points[i - 1];
        acc += 0.5 * (error[i] * error[i] + error[i - 1] * error[i - 1]) * dt;
    }
    return std::sqrt(acc / time_scale) / n_infinity;
}

double nrmse(const ResponseCurve& approx, const ResponseCurve& actual,
             double n_infinity, double time_scale)
{
    if (!approx.grid.same_as(actual.grid))
        throw std::invalid_argument("nrmse: curves must share a grid");
    std::vector<double> err(approx.absorbed.size());
    for (std::size_t i = 0; i < err.size(); ++i)
        err[i] = approx.absorbed[i] - actual.absorbed[i];
    return nrmse_curve(err, approx.grid, n_infinity, time_scale);
}

std::vector<std::optional<double>> percent_deviation(const ResponseCurve& approx,
                                                     const ResponseCurve& actual)
{
    if (!approx.grid.same_as(actual.grid))
        throw std::invalid_argument("percent_deviation: curves must share a grid");
    std::vector<std::optional<double>> out(actual.absorbed.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double n = actual.absorbed[i];
        if (n > 0.0)
            out[i] = (approx.absorbed[i] - n) / n * 100.0;
        // N = 0: deviation undefined; reported missing, not infinite
    }
    return out;
}

} // namespace matrel
