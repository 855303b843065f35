#include "matrel/release.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "matrel/errors.hpp"
#include "matrel/roots.hpp"

namespace matrel {

namespace {

constexpr double kClampSlack = 1e-12;

double clamp01(double v)
{
    return std::min(1.0, std::max(0.0, v));
}

void require(bool ok, const char* message)
{
    if (!ok)
        throw std::invalid_argument(message);
}

void check_delta(double delta)
{
    require(std::isfinite(delta) && delta >= 0.0 && delta <= 1.0,
            "delta: normalized front depth must lie in [0, 1]");
}

void check_gradual_ratio(double ratio)
{
    require(std::isfinite(ratio) && ratio >= 1.0,
            "loading_ratio: gradual-release models require A/C_s >= 1");
}

} // namespace

LeeCoefficients LeeCoefficients::at(double delta, double loading_ratio)
{
    check_delta(delta);
    check_gradual_ratio(loading_ratio);
    const double lambda = 1.0 + (loading_ratio - 1.0) * (1.0 - delta);
    const double a3 = lambda - std::sqrt(lambda * lambda - 1.0);
    return {1.0, -a3 - 1.0, a3, lambda};
}

double lee_fraction(double delta, double loading_ratio)
{
    const LeeCoefficients k = LeeCoefficients::at(delta, loading_ratio);
    const double cs_over_a = 1.0 / loading_ratio;
    const double shell = 1.0 - std::pow(1.0 - delta, 3);
    const double poly = (k.a1 + k.a2 / 2.0 + k.a3 / 3.0)
                        - (k.a1 / 2.0 + k.a2 / 3.0 + k.a3 / 4.0) * delta;
    return clamp01(shell * (1.0 - cs_over_a) + 3.0 * delta * cs_over_a * poly);
}

double lee_normalized_time(double delta, double loading_ratio)
{
    const LeeCoefficients k = LeeCoefficients::at(delta, loading_ratio);
    return (6.0 * loading_ratio - 4.0 - k.a3) * delta * delta / 12.0
           - (loading_ratio - 1.0) * delta * delta * delta / 3.0;
}

double lee_time_of_front(double delta, const MatrixParams& m)
{
    m.validate_gradual();
    return lee_normalized_time(delta, m.loading_ratio) * m.radius * m.radius / m.diffusion;
}

double release_time(const MatrixParams& m)
{
    m.validate_gradual();
    return m.radius * m.radius / m.diffusion * (m.loading_ratio / 6.0 - 1.0 / 12.0);
}

ReleaseCurve lee_release_curve(const MatrixParams& m, const TimeGrid& grid)
{
    m.validate_gradual();
    grid.validate();

    // The time map is NOT globally monotone: a3's square-root cusp at
    // delta -> 1 bends t(delta) above t_rel in a terminal window of width
    // ~0.4/(A/C_s - 1) before it returns to t_rel exactly at delta = 1.
    // Inversion stays single-valued for t < t_rel as long as the map is
    // strictly increasing until it first reaches t_rel and never dips back
    // below afterwards; both are verified here on a 1000-point grid.
    const int kProbe = 1000;
    const double t_rel_norm = m.loading_ratio / 6.0 - 1.0 / 12.0;
    double prev = 0.0;
    bool past_t_rel = false;
    for (int i = 1; i <= kProbe; ++i) {
        const double tn = lee_normalized_time(static_cast<double>(i) / kProbe, m.loading_ratio);
        if (!past_t_rel) {
            if (tn >= t_rel_norm * (1.0 - 1e-12)) {
                past_t_rel = true;
            } else if (tn <= prev) {
                throw accuracy_error(
                    "lee_release_curve: time map not increasing below t_rel", tn, tn - prev);
            }
        } else if (tn < t_rel_norm * (1.0 - 1e-9)) {
            throw accuracy_error(
                "lee_release_curve: time map dips below t_rel in the terminal window",
                tn, t_rel_norm - tn);
        }
        prev = tn;
    }

    const double t_rel = release_time(m);
    ReleaseCurve out;
    out.grid = grid;
    out.fraction.resize(grid.size());
    out.front.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.points[i];
        if (t <= 0.0) {
            out.fraction[i] = 0.0;
            out.front[i] = 1.0;
            continue;
        }
        if (t >= t_rel) {  // step-extended release
            out.fraction[i] = 1.0;
            out.front[i] = 0.0;
            continue;
        }
        const double tn = t * m.diffusion / (m.radius * m.radius);
        const double ratio = m.loading_ratio;
        const double delta = find_root_monotone(
            [tn, ratio](double d) { return lee_normalized_time(d, ratio) - tn; }, 0.0, 1.0, 1e-13);
        out.fraction[i] = lee_fraction(delta, ratio);
        out.front[i] = clamp01(1.0 - delta);
    }
    out.validate();
    return out;
}

double frenning_time_edge(const MatrixParams& m)
{
    return m.loading_ratio * m.radius * m.radius / (6.0 * m.diffusion);
}

namespace {

// Argument of the arccos/arcsin forms: 12 C_s D_m t / (A a^2) - 1 shifted
// into [-1, 1]; slack of 1e-12 absorbs roundoff at the endpoints.
double frenning_arg(double t, const MatrixParams& m)
{
    require(std::isfinite(t) && t >= 0.0, "t: time must be >= 0");
    const double x = 12.0 * m.diffusion * t / (m.loading_ratio * m.radius * m.radius) - 1.0;
    if (x > 1.0 + kClampSlack || x < -1.0 - kClampSlack)
        throw std::invalid_argument(
            "t: outside the closed-form release window [0, A a^2/(6 C_s D_m)]");
    return std::min(1.0, std::max(-1.0, x));
}

void check_closed_form_ratio(double ratio)
{
    require(std::isfinite(ratio) && ratio >= 10.0,
            "loading_ratio: closed-form front requires A/C_s >= 10");
}

} // namespace

double frenning_front(double t, const MatrixParams& m)
{
    m.validate_gradual();
    check_closed_form_ratio(m.loading_ratio);
    const double x = frenning_arg(t, m);
    const double cs_over_3a = 1.0 / (3.0 * m.loading_ratio);
    const double r = 0.5 * (1.0 - cs_over_3a)
                     + (1.0 + cs_over_3a) * std::cos((std::acos(x) + 4.0 * M_PI) / 3.0);
    return clamp01(r);  // exact endpoint evaluates to -C_s/(3A)
}

double frenning_fraction(double t, const MatrixParams& m)
{
    const double r = frenning_front(t, m);
    const double f = 1.0 - r * r * r
                     + 0.5 / m.loading_ratio * (2.0 * r * r * r - r * r - r);
    return clamp01(f);
}

double micelle_front(double t, const MatrixParams& m)
{
    m.validate_gradual();
    check_closed_form_ratio(m.loading_ratio);
    const double x = frenning_arg(t, m);  // arcsin argument is 1 - 12 C_s D_m t/(A a^2) = -x
    return clamp01(0.5 + std::sin(std::asin(-x) / 3.0));
}

double micelle_fraction(double t, const MatrixParams& m)
{
    const double r = micelle_front(t, m);
    return clamp01(1.0 - r * r * r);
}

namespace {

ReleaseCurve closed_form_curve(const MatrixParams& m, const TimeGrid& grid,
                               double (*front_fn)(double, const MatrixParams&),
                               double (*fraction_fn)(double, const MatrixParams&))
{
    m.validate_gradual();
    grid.validate();
    const double t_edge = frenning_time_edge(m);
    ReleaseCurve out;
    out.grid = grid;
    out.fraction.resize(grid.size());
    out.front.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // beyond the formula window the carrier is exhausted
        const double t = std::min(grid.points[i], t_edge);
        out.front[i] = front_fn(t, m);
        out.fraction[i] = fraction_fn(t, m);
    }
    // the C_s/A correction terms can dip ~1e-16 below monotone; flatten
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out.fraction[i] = std::max(out.fraction[i], out.fraction[i - 1]);
        out.front[i] = std::min(out.front[i], out.front[i - 1]);
    }
    out.validate();
    return out;
}

} // namespace

ReleaseCurve frenning_release_curve(const MatrixParams& m, const TimeGrid& grid)
{
    return closed_form_curve(m, grid, &frenning_front, &frenning_fraction);
}

ReleaseCurve micelle_release_curve(const MatrixParams& m, const TimeGrid& grid)
{
    return closed_form_curve(m, grid, &micelle_front, &micelle_fraction);
}

double instantaneous_fraction(double t, const MatrixParams& m, int n_terms)
{
    m.validate();
    require(std::isfinite(t) && t >= 0.0, "t: time must be >= 0");
    require(n_terms >= 1, "n_terms: must be >= 1");
    if (t == 0.0)
        return 0.0;  // truncated sum leaves ~1/n_terms residual at t = 0

    const double k = m.diffusion * M_PI * M_PI / (m.radius * m.radius);
    double sum = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        const double term = std::exp(-k * static_cast<double>(n) * n * t) / (static_cast<double>(n) * n);
        sum += term;
        if (term < 1e-18 * sum)
            break;
    }
    return clamp01(1.0 - 6.0 / (M_PI * M_PI) * sum);
}

ReleaseCurve instantaneous_release_curve(const MatrixParams& m, const TimeGrid& grid, int n_terms)
{
    grid.validate();
    ReleaseCurve out;
    out.grid = grid;
    out.fraction.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.fraction[i] = instantaneous_fraction(grid.points[i], m, n_terms);
    for (std::size_t i = 1; i < grid.size(); ++i)
        out.fraction[i] = std::max(out.fraction[i], out.fraction[i - 1]);
    out.validate();
    return out;
}

std::optional<std::string> lee_validity_note(double loading_ratio)
{
    if (loading_ratio >= 1.0 && loading_ratio < 10.0)
        return "heat-balance release model is inaccurate for A/C_s < 10 "
               "(fast-release regime); compare against the FDM oracle";
    return std::nullopt;
}

std::optional<std::string> frenning_validity_note(double loading_ratio)
{
    if (loading_ratio >= 10.0 && loading_ratio < 100.0)
        return "closed-form (arccos) release model derived for A/C_s >> 1; "
               "accuracy degrades below A/C_s = 100";
    return std::nullopt;
}

std::optional<std::string> micelle_validity_note(double loading_ratio)
{
    if (loading_ratio >= 10.0 && loading_ratio < 100.0)
        return "micelle (arcsin) release model validated for A/C_s >= 100; "
               "below that the dropped C_s/A terms are visible";
    return std::nullopt;
}

FdmConfig FdmConfig::resolved_for(const MatrixParams& m) const
{
    m.validate_gradual();
    require(m.loading_ratio > 1.0,
            "MatrixParams.loading_ratio: the moving-boundary problem needs A/C_s > 1");
    require(n_space >= 100, "FdmConfig.n_space: must be >= 100");
    require(front_tol > 0.0 && front_tol < 0.1, "FdmConfig.front_tol: must lie in (0, 0.1)");
    const double h = m.radius / static_cast<double>(n_space);
    const double dt_bound = 0.25 * h * h / m.diffusion;
    FdmConfig out = *this;
    if (out.dt == 0.0)
        out.dt = dt_bound;
    require(out.dt > 0.0 && out.dt <= dt_bound * (1.0 + 1e-12),
            "FdmConfig.dt: must satisfy dt <= 0.25 (a/n_space)^2 / D_m");
    return out;
}

namespace {

// Tridiagonal solve (Thomas); diag is overwritten.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs)
{
    const std::size_t n = rhs.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

struct FdmRecorder {
    std::vector<double> t, fraction, front;

    void push(double time, double frac, double r_over_a)
    {
        // keep the curve monotone against O(dt) front/profile noise
        if (!t.empty()) {
            if (time <= t.back())
                return;
            frac = std::max(frac, fraction.back());
            r_over_a = std::min(r_over_a, front.back());
        }
        t.push_back(time);
        fraction.push_back(std::min(frac, 1.0));
        front.push_back(std::max(r_over_a, 0.0));
    }
};

} // namespace

ReleaseCurve fdm_release_oracle(const MatrixParams& m, const FdmConfig& cfg_in)
{
    const FdmConfig cfg = cfg_in.resolved_for(m);
    const double a = m.radius;
    const double Dm = m.diffusion;
    const double Cs = 1.0;                       // concentrations in units of C_s
    const double A = m.loading_ratio;
    const double mass_total = A * a * a * a / 3.0;  // per 4*pi

    const int n = cfg.n_space;
    const double dxi = 1.0 / (n - 1);
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i)
        xi[i] = i * dxi;

    // Start from a thin dissolved shell with the quasi-steady profile
    // u = R C_s (1 - xi); time offset from the short-time front map.
    const double delta0 = std::max(2e-3, 2.0 * cfg.front_tol);
    double R = a * (1.0 - delta0);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i)
        u[i] = R * Cs * (1.0 - xi[i]);
    double t = lee_normalized_time(delta0, A) * a * a / Dm;

    const double t_front_estimate = release_time(m);
    const double dt_record = t_front_estimate / 1400.0;
    FdmRecorder rec;
    rec.push(0.0, 0.0, 1.0);
    double t_next_record = dt_record;

    std::vector<double> lower(n), diag(n), upper(n), rhs(n);

    auto record_if_due = [&](double frac, double r_over_a) {
        if (t >= t_next_record) {
            rec.push(t, frac, r_over_a);
            while (t_next_record <= t)
                t_next_record += dt_record;
        }
    };
    auto solution_mass = [&](double R_now) {
        // integral of u*x dx = integral of C x^2 dx over the dissolved shell
        const double s = a - R_now;
        double acc = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double x0 = R_now + xi[i] * s;
            const double x1 = R_now + xi[i + 1] * s;
            acc += 0.5 * (u[i] * x0 + u[i + 1] * x1) * (x1 - x0);
        }
        return acc;
    };

    // Phase 1: moving front. Backward-Euler in the shell, explicit front.
    const std::int64_t step_budget = 80'000'000;
    std::int64_t steps = 0;
    while (R > cfg.front_tol * a) {
        if (++steps > step_budget)
            throw accuracy_error("fdm_release_oracle: front stalled beyond the step budget",
                                 rec.fraction.back(), R / a);
        const double s = a - R;
        const double ux0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dxi) / s;
        const double Rdot = Dm * (ux0 - Cs) / (R * (A - Cs));
        double dt = std::min(cfg.dt, dt_record);
        if (Rdot != 0.0)
            dt = std::min(dt, 0.5 * dxi * s / std::abs(Rdot));
        dt = std::min(dt, 0.25 * t);  // temporal accuracy near the singular start

        double Rn = R + dt * Rdot;
        if (Rn < 0.5 * cfg.front_tol * a)
            Rn = 0.5 * cfg.front_tol * a;

        const double rd = dt * Dm / (s * s * dxi * dxi);
        for (int i = 1; i + 1 < n; ++i) {
            const double adv = dt * Rdot * (1.0 - xi[i]) / (s * 2.0 * dxi);
            lower[i] = -rd + adv;
            diag[i] = 1.0 + 2.0 * rd;
            upper[i] = -rd - adv;
            rhs[i] = u[i];
        }
        lower[0] = 0.0; diag[0] = 1.0; upper[0] = 0.0; rhs[0] = Rn * Cs;
        lower[n - 1] = 0.0; diag[n - 1] = 1.0; upper[n - 1] = 0.0; rhs[n - 1] = 0.0;
        solve_tridiagonal(lower, diag, upper, rhs);
        u.swap(rhs);
        R = Rn;
        t += dt;

        if (t >= t_next_record) {
            const double frac = 1.0 - (A * R * R * R / 3.0 + solution_mass(R)) / mass_total;
            record_if_due(frac, R / a);
        }
    }
    const double t_front = t;
    rec.push(t_front, 1.0 - (A * R * R * R / 3.0 + solution_mass(R)) / mass_total, R / a);

    // Phase 2: the front is gone; drain the remaining solution on a fixed
    // grid over [0, a] with u = x C, u(0) = u(a) = 0. The residual solid core
    // (R/a < front_tol) is folded in at C = C_s; its mass is O(front_tol^3).
    std::vector<double> xg(n), ug(n);
    const double dx = a / (n - 1);
    for (int i = 0; i < n; ++i)
        xg[i] = i * dx;
    {
        const double s = a - R;
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            const double x = xg[i];
            double c;
            if (x <= R) {
                c = Cs;
            } else {
                while (k + 2 < static_cast<std::size_t>(n) && R + xi[k + 1] * s < x)
                    ++k;
                const double x0 = R + xi[k] * s, x1 = R + xi[k + 1] * s;
                const double c0 = (x0 > 0.0) ? u[k] / x0 : Cs;
                const double c1 = u[k + 1] / x1;
                const double w = (x - x0) / (x1 - x0);
                c = c0 + w * (c1 - c0);
            }
            ug[i] = x * c;
        }
        ug[0] = 0.0;
        ug[n - 1] = 0.0;
    }

    auto tail_mass = [&]() {
        double acc = 0.0;
        for (int i = 0; i + 1 < n; ++i)
            acc += 0.5 * (ug[i] * xg[i] + ug[i + 1] * xg[i + 1]) * dx;
        return acc;
    };

    const double dt_tail = std::min(cfg.dt, dt_record);
    std::int64_t tail_steps = 0;
    while (true) {
        const double mass = tail_mass();
        const double frac = 1.0 - mass / mass_total;
        record_if_due(frac, 0.0);
        if (mass < 1e-4 * mass_total) {
            rec.push(t, frac, 0.0);
            break;
        }
        if (++tail_steps > step_budget)
            throw accuracy_error("fdm_release_oracle: drain phase exceeded the step budget",
                                 frac, mass / mass_total);
        const double rd = dt_tail * Dm / (dx * dx);
        for (int i = 1; i + 1 < n; ++i) {
            lower[i] = -rd;
            diag[i] = 1.0 + 2.0 * rd;
            upper[i] = -rd;
            rhs[i] = ug[i];
        }
        lower[0] = 0.0; diag[0] = 1.0; upper[0] = 0.0; rhs[0] = 0.0;
        lower[n - 1] = 0.0; diag[n - 1] = 1.0; upper[n - 1] = 0.0; rhs[n - 1] = 0.0;
        solve_tridiagonal(lower, diag, upper, rhs);
        ug.swap(rhs);
        t += dt_tail;
    }

    (void)t_front;
    ReleaseCurve out;
    out.grid.points = std::move(rec.t);
    out.grid.spacing = GridSpacing::linear;
    out.fraction = std::move(rec.fraction);
    out.front = std::move(rec.front);
    out.validate();
    return out;
}

} // namespace matrel
