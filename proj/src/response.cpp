#include "matrel/response.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "matrel/channel.hpp"
#include "matrel/quadrature.hpp"
#include "matrel/special.hpp"

namespace matrel {

namespace {

// Per-point convolution int_0^t p_s(u) frac(t-u) du, evaluated in the
// substituted variable u = v^2: the kernel's u^{-1/2} factor cancels and the
// integrand stays bounded even for touching geometry (beta1 = 0, where the
// raw kernel diverges at u -> 0). Seeds bracket the kernel spike at
// u ~ beta1..beta2.
double convolve_at(double t, const HittingRateFn& p_s,
                   const std::function<double(double)>& fraction,
                   const QuadratureOptions& opt)
{
    if (t <= 0.0)
        return 0.0;
    auto integrand = [&](double v) {
        const double u = v * v;
        return 2.0 * v * p_s(u) * fraction(t - u);
    };
    std::vector<double> seeds;
    const double v_low = std::sqrt(std::max(p_s.beta1(), p_s.beta2() * 1e-4) / 8.0);
    const double v_end = std::sqrt(t);
    for (double s = v_low; s < v_end; s *= 2.0)
        seeds.push_back(s);
    return integrate(integrand, 0.0, v_end, opt, seeds);
}

ResponseCurve convolve(const std::function<double(double)>& fraction, const MatrixParams& m,
                       const ChannelParams& c, const TimeGrid& grid)
{
    grid.validate();
    const HittingRateFn p_s(m, c);
    const double n_inf = m.total_molecules * c.hitting_fraction();

    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-6 * c.hitting_fraction();  // per molecule, 1e-6 of r_RX/d

    ResponseCurve out;
    out.grid = grid;
    out.absorbed.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.absorbed[i] = m.total_molecules * convolve_at(grid.points[i], p_s, fraction, opt);
    // quadrature noise can leave ~abs_tol non-monotonicity; flatten
    for (std::size_t i = 1; i < grid.size(); ++i)
        out.absorbed[i] = std::max(out.absorbed[i], out.absorbed[i - 1]);
    out.validate(n_inf);
    return out;
}

} // namespace

ResponseCurve response_convolution(const ReleaseCurve& release, const MatrixParams& m,
                                   const ChannelParams& c, const TimeGrid& grid)
{
    release.validate();
    if (release.fraction.back() < 0.999 && release.grid.back() < grid.back())
        throw std::invalid_argument(
            "response_convolution: release curve neither complete (fraction ~1) "
            "nor covering the response grid; step extension would be a guess");
    return convolve([&release](double t) { return release.fraction_at(t); }, m, c, grid);
}

ResponseCurve response_convolution(const std::function<double(double)>& fraction,
                                   const MatrixParams& m, const ChannelParams& c,
                                   const TimeGrid& grid)
{
    return convolve(fraction, m, c, grid);
}

double response_convolution_at(double t, const std::function<double(double)>& fraction,
                               const MatrixParams& m, const ChannelParams& c)
{
    const HittingRateFn p_s(m, c);
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-6 * c.hitting_fraction();
    return m.total_molecules * convolve_at(t, p_s, fraction, opt);
}

double response_instantaneous(double t, const MatrixParams& m, const ChannelParams& c,
                              int n_terms)
{
    const SurfaceChannelConstants k = SurfaceChannelConstants::from(m, c);
    if (!(t >= 0.0))
        throw std::invalid_argument("t: time must be >= 0");
    if (n_terms < 1)
        throw std::invalid_argument("n_terms: must be >= 1");
    if (t == 0.0)
        return 0.0;

    const double M = m.total_molecules;
    const double base = M * absorbed_fraction_surface(t, m, c);

    // Series term n: the convolution of p_s with exp(gamma_n t) is, exactly,
    //   kappa sqrt(pi/|gamma_n|) e^{-beta/t} Im w( sqrt(|gamma_n| t) + i sqrt(beta/t) )
    // per beta in {beta1, beta2}; w is the Faddeeva function. This is the
    // real-valued analytic continuation of the erfc closed form and is
    // overflow-free for every n and t.
    const double kappa = 2.0 * k.rho * m.radius * c.receiver_radius / c.distance
                         * std::sqrt(M_PI * c.diffusion);
    const double gamma1 = m.diffusion * M_PI * M_PI / (m.radius * m.radius);
    const double x1 = std::sqrt(k.beta1 / t);
    const double x2 = std::sqrt(k.beta2 / t);
    const double e1 = std::exp(-k.beta1 / t);
    const double e2 = std::exp(-k.beta2 / t);

    double series = 0.0;
    int tiny_streak = 0;
    for (int n = 1; n <= n_terms; ++n) {
        const double cn = gamma1 * static_cast<double>(n) * n;
        const double y = std::sqrt(cn * t);
        const double In = kappa * std::sqrt(M_PI / cn)
                          * (e1 * faddeeva_im(y, x1) - e2 * faddeeva_im(y, x2));
        const double term = In / (static_cast<double>(n) * n);
        series += term;
        if (std::abs(term) < 1e-16 * (std::abs(series) + 1e-300)) {
            if (++tiny_streak >= 3)
                break;
        } else {
            tiny_streak = 0;
        }
    }
    const double value = base - M * 6.0 / (M_PI * M_PI) * series;
    return std::max(0.0, value);
}

ResponseCurve response_instantaneous_curve(const MatrixParams& m, const ChannelParams& c,
                                           const TimeGrid& grid, int n_terms)
{
    grid.validate();
    ResponseCurve out;
    out.grid = grid;
    out.absorbed.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.absorbed[i] = response_instantaneous(grid.points[i], m, c, n_terms);
    for (std::size_t i = 1; i < grid.size(); ++i)
        out.absorbed[i] = std::max(out.absorbed[i], out.absorbed[i - 1]);
    out.validate(m.total_molecules * c.hitting_fraction());
    return out;
}

ResponseCurve absorption_rate(const ResponseCurve& curve)
{
    curve.grid.validate();
    if (curve.grid.size() < 3)
        throw std::invalid_argument("absorption_rate: need at least 3 grid points");
    if (curve.absorbed.size() != curve.grid.size())
        throw std::invalid_argument("absorption_rate: absorbed/grid size mismatch");

    const auto& t = curve.grid.points;
    const auto& n = curve.absorbed;
    ResponseCurve out = curve;
    out.rate.resize(t.size());
    const std::size_t last = t.size() - 1;
    out.rate[0] = (n[1] - n[0]) / (t[1] - t[0]);
    out.rate[last] = (n[last] - n[last - 1]) / (t[last] - t[last - 1]);
    for (std::size_t i = 1; i < last; ++i) {
        // three-point derivative exact for parabolas on non-uniform grids
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        out.rate[i] = (n[i + 1] * h1 * h1 + n[i] * (h2 * h2 - h1 * h1) - n[i - 1] * h2 * h2)
                      / (h1 * h2 * (h1 + h2));
    }
    return out;
}

} // namespace matrel
