#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "matrel/channel.hpp"
#include "matrel/quadrature.hpp"
#include "matrel/release.hpp"
#include "matrel/response.hpp"

using namespace matrel;

namespace {

const MatrixParams kTx{1e-6, 1e-9, 1.0, 1e4};
const ChannelParams kRx{1e-9, 5e-6, 1e-6};

} // namespace

TEST_CASE("convolution with a step release reduces to the surface response")
{
    // Mbar = M_inf for t >= 0: the convolution is just the integral of p_s
    auto step = [](double) { return 1.0; };
    TimeGrid grid = TimeGrid::make_logarithmic(1e-3, 10.0, 25);
    ResponseCurve conv = response_convolution(step, kTx, kRx, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double exact = kTx.total_molecules
                             * absorbed_fraction_surface(grid.points[i], kTx, kRx);
        CHECK(conv.absorbed[i] == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("closed-form response for instantaneous release: limits")
{
    CHECK(response_instantaneous(0.0, kTx, kRx) == 0.0);
    const double n_inf = kTx.total_molecules * kRx.hitting_fraction();
    CHECK(response_instantaneous(1e5, kTx, kRx) == doctest::Approx(n_inf).epsilon(1e-3));
}

TEST_CASE("closed form matches the direct convolution of the series release")
{
    // three decades, both distances of the evaluation table
    for (double d : {2e-6, 5e-6}) {
        ChannelParams c = kRx;
        c.distance = d;
        const double n_inf = kTx.total_molecules * c.hitting_fraction();
        auto release = [&](double t) { return instantaneous_fraction(t, kTx); };
        for (double t = 1e-3; t <= 1.0; t *= 3.163) {
            const double closed = response_instantaneous(t, kTx, c);
            const double direct = response_convolution_at(t, release, kTx, c);
            CHECK(std::abs(closed - direct) < 1e-3 * n_inf);
        }
    }
}

TEST_CASE("two convolution forms agree: p_s * Mbar equals N_s * dMbar/dt")
{
    const MatrixParams m{1e-6, 1e-9, 100.0, 1e4};
    const double t_rel = release_time(m);
    const double t_edge = frenning_time_edge(m);
    auto frac = [&](double t) {
        if (t <= 0.0)
            return 0.0;
        if (t >= t_edge)
            return 1.0;
        return frenning_fraction(t, m);
    };
    auto rate = [&](double t) {
        const double h = 1e-6 * t_edge;
        const double lo = std::max(0.0, t - h), hi = std::min(t_edge, t + h);
        return hi > lo ? (frac(hi) - frac(lo)) / (hi - lo) : 0.0;
    };

    for (double t : {0.3 * t_rel, 0.8 * t_rel, 2.0 * t_rel}) {
        const double form1 = response_convolution_at(t, frac, m, kRx);
        // N_s * m by direct quadrature on the same grid logic
        const double form2 = m.total_molecules
                             * integrate(
                                   [&](double u) {
                                       return absorbed_fraction_surface(u, m, kRx)
                                              * rate(t - u);
                                   },
                                   0.0, t, 1e-9);
        CHECK(form1 == doctest::Approx(form2).epsilon(1e-6));
    }
}

TEST_CASE("gradual release responses stay bounded and ordered")
{
    TimeGrid grid = TimeGrid::make_logarithmic(1e-3, 50.0, 40);
    const double n_inf = kTx.total_molecules * kRx.hitting_fraction();

    ResponseCurve inst = response_instantaneous_curve(kTx, kRx, grid);
    CHECK_NOTHROW(inst.validate(n_inf));

    MatrixParams slow = kTx;
    slow.loading_ratio = 100.0;
    ReleaseCurve release = lee_release_curve(
        slow, TimeGrid::make_logarithmic(release_time(slow) * 1e-6,
                                         release_time(slow) * 1.0001, 2000));
    ResponseCurve grad = response_convolution(release, slow, kRx, grid);
    CHECK_NOTHROW(grad.validate(n_inf));

    // the gradual response lags the instantaneous one everywhere
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(grad.absorbed[i] <= inst.absorbed[i] * (1.0 + 1e-6) + 1e-9 * n_inf);
}

TEST_CASE("incomplete release curves without grid coverage are rejected")
{
    MatrixParams slow = kTx;
    slow.loading_ratio = 100.0;
    const double t_rel = release_time(slow);
    ReleaseCurve partial = lee_release_curve(
        slow, TimeGrid::make_linear(0.0, 0.3 * t_rel, 50));  // stops at fraction < 1
    TimeGrid beyond = TimeGrid::make_logarithmic(1e-3, t_rel, 10);
    CHECK_THROWS_AS(response_convolution(partial, slow, kRx, beyond), std::invalid_argument);
}

TEST_CASE("absorption rate by finite differences")
{
    SUBCASE("constant curve has zero rate")
    {
        ResponseCurve flat;
        flat.grid = TimeGrid::make_linear(0.0, 4.0, 5);
        flat.absorbed = {3.0, 3.0, 3.0, 3.0, 3.0};
        ResponseCurve with_rate = absorption_rate(flat);
        for (double r : with_rate.rate)
            CHECK(r == 0.0);
    }

    SUBCASE("instantaneous release rate recovers M_inf p_s")
    {
        TimeGrid grid = TimeGrid::make_linear(1e-3, 0.2, 2000);
        ResponseCurve inst = response_instantaneous_curve(kTx, kRx, grid);
        ResponseCurve with_rate = absorption_rate(inst);
        for (std::size_t i = 10; i < grid.size() - 10; i += 100) {
            const double expect = kTx.total_molecules
                                  * hitting_rate_surface(grid.points[i], kTx, kRx);
            CHECK(with_rate.rate[i] == doctest::Approx(expect).epsilon(2e-3));
        }
    }

    SUBCASE("too-small grids are rejected")
    {
        ResponseCurve tiny;
        tiny.grid = TimeGrid::make_linear(0.0, 1.0, 2);
        tiny.absorbed = {0.0, 1.0};
        CHECK_THROWS_AS(absorption_rate(tiny), std::invalid_argument);
    }
}

TEST_CASE("slower carriers spread the absorption over a longer horizon")
{
    // ratio 400 vs ratio 1 at d = 5 um: lower peak rate, later tail
    TimeGrid grid = TimeGrid::make_linear(1e-3, 120.0, 1200);
    ResponseCurve inst = absorption_rate(response_instantaneous_curve(kTx, kRx, grid));

    MatrixParams slow = kTx;
    slow.loading_ratio = 400.0;
    ReleaseCurve release = lee_release_curve(
        slow, TimeGrid::make_logarithmic(release_time(slow) * 1e-6,
                                         release_time(slow) * 1.0001, 2000));
    ResponseCurve grad = absorption_rate(response_convolution(release, slow, kRx, grid));

    double peak_inst = 0.0, peak_grad = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        peak_inst = std::max(peak_inst, inst.rate[i]);
        peak_grad = std::max(peak_grad, grad.rate[i]);
    }
    CHECK(peak_grad < 0.5 * peak_inst);
    // late-time rate of the slow carrier exceeds the instantaneous one
    CHECK(grad.rate[grid.size() - 2] > inst.rate[grid.size() - 2]);
}
