#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "matrel/errors.hpp"
#include "matrel/quadrature.hpp"

TEST_CASE("polynomials integrate to machine precision")
{
    CHECK(matrel::integrate([](double) { return 1.0; }, 0.0, 1.0, 1e-10)
          == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(matrel::integrate([](double t) { return 3.0 * t * t; }, 0.0, 1.0, 1e-10)
          == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(matrel::integrate([](double t) { return std::sin(t); }, 0.0, M_PI, 1e-12)
          == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linearity on polynomial test functions")
{
    auto f = [](double t) { return t * t; };
    auto g = [](double t) { return std::exp(-t); };
    const double alpha = 2.5, beta = -1.25;
    const double lhs = matrel::integrate(
        [&](double t) { return alpha * f(t) + beta * g(t); }, 0.0, 3.0, 1e-11);
    const double rhs = alpha * matrel::integrate(f, 0.0, 3.0, 1e-11)
                       + beta * matrel::integrate(g, 0.0, 3.0, 1e-11);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("half-line kernel with essential singularity at zero")
{
    // integral_0^inf t^{-1/2} (e^{-a/t} - e^{-b/t}) dt = 2 sqrt(pi) (sqrt(b) - sqrt(a)),
    // derived by differentiating under the integral sign in a.
    auto f = [](double t) {
        if (t <= 0.0)
            return 0.0;
        return (std::exp(-1.0 / t) - std::exp(-4.0 / t)) / std::sqrt(t);
    };
    const double exact = 2.0 * std::sqrt(M_PI) * (2.0 - 1.0);
    matrel::QuadratureOptions opt;
    opt.rel_tol = 1e-9;
    CHECK(matrel::integrate_to_inf(f, 0.0, opt) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("zero-length interval and bad bounds")
{
    CHECK(matrel::integrate([](double) { return 7.0; }, 2.0, 2.0, 1e-8) == 0.0);
    CHECK_THROWS_AS(matrel::integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("budget exhaustion raises an accuracy error carrying the best estimate")
{
    // endpoint singularity that a four-interval budget cannot resolve to 1e-12
    auto singular = [](double t) { return t > 0.0 ? 1.0 / std::sqrt(t) : 0.0; };
    matrel::QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 4;
    try {
        (void)matrel::integrate(singular, 0.0, 1.0, opt);
        FAIL("expected accuracy_error");
    } catch (const matrel::accuracy_error& e) {
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.best_estimate() == doctest::Approx(2.0).epsilon(0.2));
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("interior seeds locate a spike the plain pass would miss cheaply")
{
    auto spike = [](double t) { return std::exp(-(t - 1e-4) * (t - 1e-4) * 1e10); };
    const double seeds[] = {5e-5, 1e-4, 2e-4};
    matrel::QuadratureOptions opt;
    opt.rel_tol = 1e-9;
    const double with_seeds = matrel::integrate(spike, 0.0, 10.0, opt, seeds);
    CHECK(with_seeds == doctest::Approx(std::sqrt(M_PI) * 1e-5).epsilon(1e-6));
}
