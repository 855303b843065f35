#include "matrel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "matrel/errors.hpp"

namespace matrel {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (symmetric; positive half).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Embedded 7-point Gauss weights (applied at Kronrod nodes 1, 3, 5, 7).
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
    double lo, hi, value, error;
};

struct ByError {
    bool operator()(const Interval& a, const Interval& b) const { return a.error < b.error; }
};

Interval gauss_kronrod(const std::function<double(double)>& f, double lo, double hi)
{
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kKronrodNodes[i]);
        fv[14 - i] = f(mid + half * kKronrodNodes[i]);
    }
    fv[7] = f(mid);

    double kron = kKronrodWeights[7] * fv[7];
    for (int i = 0; i < 7; ++i)
        kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);

    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 3; ++i)
        gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

    kron *= half;
    gauss *= half;
    const double diff = std::abs(kron - gauss);
    // standard QUADPACK-style error sharpening
    const double err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(kron), 1e-300), 1.5));
    return {lo, hi, kron, std::max(err, diff * 1e-6)};
}

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opt, std::span<const double> seeds)
{
    if (lo > hi)
        throw std::invalid_argument("integrate: lo > hi");
    if (lo == hi)
        return 0.0;

    std::vector<double> edges;
    edges.push_back(lo);
    for (double s : seeds)
        if (s > lo && s < hi)
            edges.push_back(s);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Interval, std::vector<Interval>, ByError> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Interval iv = gauss_kronrod(f, edges[i], edges[i + 1]);
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
    }

    int used = static_cast<int>(heap.size());
    while (total_err > std::max(opt.rel_tol * std::abs(total), opt.abs_tol)) {
        if (used >= opt.max_intervals)
            throw accuracy_error("integrate: subdivision budget exhausted", total, total_err);
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi)
            throw accuracy_error("integrate: interval below machine resolution", total, total_err);
        Interval left = gauss_kronrod(f, worst.lo, mid);
        Interval right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }
    return total;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol)
{
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    return integrate(f, lo, hi, opt);
}

double integrate_to_inf(const std::function<double(double)>& f, double lo,
                        const QuadratureOptions& opt)
{
    auto mapped = [&f, lo](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0)
            return 0.0;  // f must decay for the improper integral to exist
        const double t = lo + u / om;
        return f(t) / (om * om);
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

} // namespace matrel
