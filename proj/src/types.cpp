#include "matrel/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace matrel {

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw std::invalid_argument(message);
}

} // namespace

void MatrixParams::validate() const
{
    require(std::isfinite(radius) && radius > 0.0, "MatrixParams.radius: must be > 0");
    require(std::isfinite(diffusion) && diffusion > 0.0, "MatrixParams.diffusion: must be > 0");
    require(std::isfinite(loading_ratio) && loading_ratio > 0.0,
            "MatrixParams.loading_ratio: must be > 0");
    require(std::isfinite(total_molecules) && total_molecules >= 1.0,
            "MatrixParams.total_molecules: must be >= 1");
}

void MatrixParams::validate_gradual() const
{
    validate();
    require(loading_ratio >= 1.0,
            "MatrixParams.loading_ratio: gradual-release models require A/C_s >= 1");
}

void ChannelParams::validate() const
{
    require(std::isfinite(diffusion) && diffusion > 0.0, "ChannelParams.diffusion: must be > 0");
    require(std::isfinite(receiver_radius) && receiver_radius > 0.0,
            "ChannelParams.receiver_radius: must be > 0");
    require(std::isfinite(distance) && distance > receiver_radius,
            "ChannelParams.distance: must exceed receiver_radius");
}

void ChannelParams::validate_with(const MatrixParams& m) const
{
    validate();
    m.validate();
    // touching bodies (d == a + r_RX, i.e. beta1 == 0) are legal; the
    // evaluation tables use d = 2 um with a = r_RX = 1 um
    require(distance >= m.radius + receiver_radius,
            "ChannelParams.distance: TX and RX bodies overlap (d < a + r_RX)");
}

TimeGrid TimeGrid::make_linear(double t_begin, double t_end, std::size_t n)
{
    require(n >= 2, "TimeGrid: need at least 2 points");
    require(t_end > t_begin, "TimeGrid: t_end must exceed t_begin");
    require(t_begin >= 0.0, "TimeGrid: times must be non-negative");
    TimeGrid g;
    g.spacing = GridSpacing::linear;
    g.points.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        g.points[i] = t_begin + (t_end - t_begin) * static_cast<double>(i) / (n - 1);
    g.points.back() = t_end;
    return g;
}

TimeGrid TimeGrid::make_logarithmic(double t_begin, double t_end, std::size_t n)
{
    require(n >= 2, "TimeGrid: need at least 2 points");
    require(t_begin > 0.0, "TimeGrid: logarithmic grid needs t_begin > 0");
    require(t_end > t_begin, "TimeGrid: t_end must exceed t_begin");
    TimeGrid g;
    g.spacing = GridSpacing::logarithmic;
    g.points.resize(n);
    const double l0 = std::log(t_begin), l1 = std::log(t_end);
    for (std::size_t i = 0; i < n; ++i)
        g.points[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (n - 1));
    g.points.back() = t_end;
    return g;
}

void TimeGrid::validate() const
{
    require(points.size() >= 2, "TimeGrid: need at least 2 points");
    require(points.front() >= 0.0, "TimeGrid: times must be non-negative");
    for (std::size_t i = 1; i < points.size(); ++i)
        require(points[i] > points[i - 1], "TimeGrid: points must be strictly increasing");
}

bool TimeGrid::same_as(const TimeGrid& other, double rel_tol) const
{
    if (points.size() != other.points.size())
        return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double scale = std::max({std::abs(points[i]), std::abs(other.points[i]), 1e-300});
        if (std::abs(points[i] - other.points[i]) > rel_tol * scale)
            return false;
    }
    return true;
}

void ReleaseCurve::validate() const
{
    grid.validate();
    require(fraction.size() == grid.size(), "ReleaseCurve: fraction/grid size mismatch");
    const double slack = 1e-12;
    for (std::size_t i = 0; i < fraction.size(); ++i) {
        require(fraction[i] >= -slack && fraction[i] <= 1.0 + slack,
                "ReleaseCurve: fraction out of [0, 1]");
        if (i > 0)
            require(fraction[i] >= fraction[i - 1] - slack,
                    "ReleaseCurve: fraction must be non-decreasing");
    }
    if (!front.empty()) {
        require(front.size() == grid.size(), "ReleaseCurve: front/grid size mismatch");
        for (std::size_t i = 0; i < front.size(); ++i) {
            require(front[i] >= -slack && front[i] <= 1.0 + slack,
                    "ReleaseCurve: front out of [0, 1]");
            if (i > 0)
                require(front[i] <= front[i - 1] + slack,
                        "ReleaseCurve: front must be non-increasing");
        }
    }
}

double ReleaseCurve::fraction_at(double t) const
{
    const auto& ts = grid.points;
    if (t <= ts.front())
        return t < ts.front() ? 0.0 : fraction.front();
    if (t >= ts.back())
        return fraction.back();
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return fraction[lo] + w * (fraction[hi] - fraction[lo]);
}

void ResponseCurve::validate(double asymptotic_bound) const
{
    grid.validate();
    require(absorbed.size() == grid.size(), "ResponseCurve: absorbed/grid size mismatch");
    const double slack = 1e-9 * std::max(asymptotic_bound, 1.0);
    for (std::size_t i = 0; i < absorbed.size(); ++i) {
        require(absorbed[i] >= -slack, "ResponseCurve: absorbed count must be >= 0");
        require(absorbed[i] <= asymptotic_bound * (1.0 + 1e-6) + slack,
                "ResponseCurve: absorbed count exceeds M_inf * r_RX/d");
        if (i > 0)
            require(absorbed[i] >= absorbed[i - 1] - slack,
                    "ResponseCurve: absorbed count must be non-decreasing");
    }
    if (!rate.empty())
        require(rate.size() == grid.size(), "ResponseCurve: rate/grid size mismatch");
}

} // namespace matrel
