#include "matrel/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace matrel {

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

// Normal-quantile style rational first guess for erfc_inv on (0, 1],
// |error| < 5e-4; Newton on erfc finishes the job.
double erfc_inv_initial(double y)
{
    const double t = std::sqrt(-2.0 * std::log(0.5 * y));
    return 0.70710678118654752440 *
           (t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + t * 0.04481)));
}

} // namespace

double erfc_inv(double y)
{
    if (!(y > 0.0) || !(y < 2.0))
        throw std::invalid_argument("erfc_inv: argument must lie in (0, 2)");
    if (y == 1.0)
        return 0.0;

    const bool mirrored = y > 1.0;     // erfc_inv(2 - y) = -erfc_inv(y)
    const double p = mirrored ? 2.0 - y : y;

    double x = erfc_inv_initial(p);
    for (int i = 0; i < 4; ++i) {
        const double err = std::erfc(x) - p;
        x += err / (kTwoOverSqrtPi * std::exp(-x * x));
    }
    return mirrored ? -x : x;
}

namespace {

// Weideman's rational approximation of the Faddeeva function: N-term
// polynomial in Z = (L + iz)/(L - iz), coefficients from a discrete Fourier
// transform of exp(-t^2)(L^2 + t^2) sampled on t = L tan(theta/2).
constexpr int kWeidemanN = 48;

struct WeidemanTable {
    double L;
    std::array<double, kWeidemanN> a;  // a[0] = a_1, ..., a[N-1] = a_N

    WeidemanTable()
    {
        constexpr int M = 2 * kWeidemanN;
        L = std::sqrt(kWeidemanN / std::sqrt(2.0));
        // f(theta_j) on theta_j = j*pi/M, j = -M..M-1; f(-pi) = 0 (t -> inf).
        std::array<double, 2 * M> f{};
        for (int j = -M; j < M; ++j) {
            if (j == -M) { f[0] = 0.0; continue; }
            const double theta = j * M_PI / M;
            const double t = L * std::tan(0.5 * theta);
            f[j + M] = std::exp(-t * t) * (L * L + t * t);
        }
        for (int n = 1; n <= kWeidemanN; ++n) {
            double s = 0.0;
            for (int j = -M; j < M; ++j)
                s += f[j + M] * std::cos(n * j * M_PI / M);
            a[n - 1] = s / (2.0 * M);
        }
    }
};

const WeidemanTable& weideman()
{
    static const WeidemanTable table;
    return table;
}

} // namespace

std::complex<double> faddeeva(std::complex<double> z)
{
    if (z.imag() < 0.0)
        throw std::invalid_argument("faddeeva: implemented for Im(z) >= 0");
    const WeidemanTable& w = weideman();
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> denom = w.L - iz;
    const std::complex<double> Z = (w.L + iz) / denom;
    // Horner over a_N .. a_1
    std::complex<double> p(0.0, 0.0);
    for (int n = kWeidemanN - 1; n >= 0; --n)
        p = p * Z + w.a[n];
    const double inv_sqrt_pi = 0.56418958354775628695;
    return 2.0 * p / (denom * denom) + inv_sqrt_pi / denom;
}

double faddeeva_im(double re, double im)
{
    return faddeeva(std::complex<double>(re, im)).imag();
}

} // namespace matrel
