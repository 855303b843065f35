#include "matrel/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "matrel/channel.hpp"
#include "matrel/csv.hpp"
#include "matrel/pbs.hpp"
#include "matrel/regimes.hpp"
#include "matrel/release.hpp"
#include "matrel/response.hpp"

namespace matrel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ratio_tag(double ratio)
{
    char buf[32];
    if (ratio == std::floor(ratio) && ratio < 1e6)
        std::snprintf(buf, sizeof(buf), "%d", static_cast<int>(ratio));
    else
        std::snprintf(buf, sizeof(buf), "%g", ratio);
    return buf;
}

std::string micro_tag(double meters)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%gum", meters * 1e6);
    return buf;
}

std::string tau_tag(double tau)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0e", tau);
    return buf;
}

struct Runner {
    const ExperimentConfig& cfg;
    fs::path dir;
    RunSummary summary;

    Runner(const ExperimentConfig& config, const std::string& out_dir) : cfg(config), dir(out_dir)
    {
        fs::create_directories(dir);
    }

    std::string path_of(const std::string& file) const { return (dir / file).string(); }

    void emit(const std::string& file) { summary.csv_files.push_back(file); }

    void note(const std::optional<std::string>& n)
    {
        if (n)
            summary.notes.push_back(*n);
    }

    void write_manifest(const json& extra = json::object())
    {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        json doc;
        doc["code_version"] = kVersion;
        doc["experiment"] = cfg.experiment;
        doc["seed"] = cfg.pbs.seed;
        doc["config_hash"] = hash;
        doc["config"] = json::parse(to_json(cfg));
        json outputs = json::array();
        for (const auto& f : summary.csv_files)
            outputs.push_back({{"file", f}, {"config_hash", hash}});
        doc["outputs"] = outputs;
        doc["notes"] = summary.notes;
        if (!extra.empty())
            doc["report"] = extra;
        const std::string path = path_of("manifest.json");
        std::ofstream out(path, std::ios::binary);
        out << doc.dump(2) << "\n";
        summary.manifest_path = path;
    }
};

std::vector<double> ratios_or_default(const ExperimentConfig& cfg)
{
    if (!cfg.sweep.ratios.empty())
        return cfg.sweep.ratios;
    return {1.0, 25.0, 100.0, 400.0};
}

std::vector<double> distances_or_default(const ExperimentConfig& cfg)
{
    if (!cfg.sweep.distances_m.empty())
        return cfg.sweep.distances_m;
    return {cfg.channel.distance};
}

// Dense model curve whose linear interpolation is convolution-grade.
ReleaseCurve dense_lee_curve(const MatrixParams& m)
{
    const double t_rel = release_time(m);
    TimeGrid g = TimeGrid::make_logarithmic(t_rel * 1e-6, t_rel * 1.0001, 2500);
    return lee_release_curve(m, g);
}

void run_release_profile(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    for (double ratio : ratios_or_default(cfg)) {
        MatrixParams m = cfg.matrix;
        m.loading_ratio = ratio;
        const std::string tag = ratio_tag(ratio);
        const double tau_diff = m.radius * m.radius / m.diffusion;

        if (ratio <= 1.0) {
            const double t_end = cfg.grid.t_end_s > 0.0 ? cfg.grid.t_end_s : 0.5 * tau_diff;
            TimeGrid grid = TimeGrid::make_linear(0.0, t_end, cfg.grid.n_points);
            ReleaseCurve inst = instantaneous_release_curve(m, grid);
            std::vector<CsvColumn> cols{{"instantaneous", inst.fraction}};
            if (cfg.pbs.realizations > 0) {
                pbs::Config pc;
                pc.dt = cfg.pbs.dt_s;
                pc.n_steps = static_cast<std::int64_t>(std::ceil(t_end / pc.dt));
                pc.realizations = cfg.pbs.realizations;
                pc.seed = cfg.pbs.seed;
                pc.front_table = pbs::FrontTable::dissolved();
                pbs::Result sim = pbs::simulate_release(m, pc);
                std::vector<double> mean(grid.size()), serr(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    // nearest recorded step at or before the grid time
                    const auto& ts = sim.grid.points;
                    std::size_t k = 0;
                    while (k + 1 < ts.size() && ts[k + 1] <= grid.points[i])
                        ++k;
                    mean[i] = sim.released_mean[k] / m.total_molecules;
                    serr[i] = sim.released_stderr[k] / m.total_molecules;
                }
                cols.push_back({"pbs_mean", mean});
                cols.push_back({"pbs_stderr", serr});
            }
            const std::string file = "release_profile_ratio_" + tag + ".csv";
            write_csv(run.path_of(file), "t_s", grid.points, cols);
            run.emit(file);
            continue;
        }

        run.note(lee_validity_note(ratio));
        const double t_rel = release_time(m);
        const double t_end = cfg.grid.t_end_s > 0.0 ? cfg.grid.t_end_s : 1.1 * t_rel;
        TimeGrid grid = TimeGrid::make_linear(0.0, t_end, cfg.grid.n_points);

        ReleaseCurve lee = lee_release_curve(m, grid);
        ReleaseCurve fdm = fdm_release_oracle(m);
        std::vector<CsvColumn> cols{{"lee", lee.fraction}};
        std::vector<CsvColumn> front_cols{{"lee", lee.front}};

        if (ratio >= 10.0) {
            run.note(frenning_validity_note(ratio));
            run.note(micelle_validity_note(ratio));
            ReleaseCurve fren = frenning_release_curve(m, grid);
            ReleaseCurve mic = micelle_release_curve(m, grid);
            cols.push_back({"frenning", fren.fraction});
            cols.push_back({"micelle", mic.fraction});
            front_cols.push_back({"frenning", fren.front});
            front_cols.push_back({"micelle", mic.front});
        }

        // FDM resampled onto the shared grid
        {
            ReleaseCurve tmp;
            tmp.grid = fdm.grid;
            tmp.fraction = fdm.fraction;
            std::vector<double> f(grid.size()), fr(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                f[i] = tmp.fraction_at(grid.points[i]);
                ReleaseCurve fronts;
                fronts.grid = fdm.grid;
                fronts.fraction = fdm.front;  // reuse the interpolator
                fr[i] = fronts.fraction_at(grid.points[i]);
            }
            cols.push_back({"fdm", f});
            front_cols.push_back({"fdm", fr});
        }

        if (cfg.pbs.realizations > 0) {
            pbs::Config pc;
            pc.dt = cfg.pbs.dt_s;
            pc.n_steps = static_cast<std::int64_t>(std::ceil(t_end / pc.dt));
            pc.realizations = cfg.pbs.realizations;
            pc.seed = cfg.pbs.seed;
            pc.front_table = pbs::FrontTable::from_curve(fdm);
            pbs::Result sim = pbs::simulate_release(m, pc);
            std::vector<double> mean(grid.size()), serr(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto& ts = sim.grid.points;
                std::size_t k = 0;
                while (k + 1 < ts.size() && ts[k + 1] <= grid.points[i])
                    ++k;
                mean[i] = sim.released_mean[k] / m.total_molecules;
                serr[i] = sim.released_stderr[k] / m.total_molecules;
            }
            cols.push_back({"pbs_mean", mean});
            cols.push_back({"pbs_stderr", serr});
        }

        const std::string file = "release_profile_ratio_" + tag + ".csv";
        write_csv(run.path_of(file), "t_s", grid.points, cols);
        run.emit(file);

        const std::string front_file = "release_front_ratio_" + tag + ".csv";
        write_csv(run.path_of(front_file), "t_s", grid.points, front_cols);
        run.emit(front_file);

        const std::string table_file = "front_table_ratio_" + tag + ".csv";
        write_front_table(run.path_of(table_file), fdm);
        run.emit(table_file);
    }
    run.write_manifest();
}

void run_channel_response(Runner& run, bool rates)
{
    const ExperimentConfig& cfg = run.cfg;
    for (double d : distances_or_default(cfg)) {
        ChannelParams c = cfg.channel;
        c.distance = d;
        const double t_abs = absorption_time(cfg.sigma, c);
        const double t_end = cfg.grid.t_end_s > 0.0 ? cfg.grid.t_end_s : 0.2 * t_abs;
        TimeGrid grid = TimeGrid::make_logarithmic(t_end * 1e-4, t_end, cfg.grid.n_points);

        const MatrixParams& base = cfg.matrix;
        const double M = base.total_molecules;

        std::vector<CsvColumn> cols;
        {
            std::vector<double> point(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                point[i] = M * absorbed_fraction_point(grid.points[i], c);
            ResponseCurve pc;
            pc.grid = grid;
            pc.absorbed = point;
            if (rates)
                cols.push_back({"point", absorption_rate(pc).rate});
            else
                cols.push_back({"point", point});
        }
        {
            ResponseCurve inst = response_instantaneous_curve(base, c, grid);
            cols.push_back(rates ? CsvColumn{"matrix_inst", absorption_rate(inst).rate}
                                 : CsvColumn{"matrix_inst", inst.absorbed});
        }
        for (double ratio : ratios_or_default(cfg)) {
            if (ratio <= 1.0)
                continue;  // the instantaneous column covers it
            MatrixParams m = base;
            m.loading_ratio = ratio;
            run.note(lee_validity_note(ratio));
            ReleaseCurve lee = dense_lee_curve(m);
            ResponseCurve cr = response_convolution(lee, m, c, grid);
            const std::string name = "matrix_ratio_" + ratio_tag(ratio);
            cols.push_back(rates ? CsvColumn{name, absorption_rate(cr).rate}
                                 : CsvColumn{name, cr.absorbed});
        }

        const std::string file = (rates ? std::string("absorption_rate_d_")
                                        : std::string("channel_response_d_"))
                                 + micro_tag(d) + ".csv";
        write_csv(run.path_of(file), "t_s", grid.points, cols);
        run.emit(file);
    }
    run.write_manifest();
}

// A/C_s that realizes a requested tau at the configured geometry.
double ratio_for_tau(double tau, const ExperimentConfig& cfg)
{
    const RegimeReport probe = regime_ratio(
        MatrixParams{cfg.matrix.radius, cfg.matrix.diffusion, 2.0, cfg.matrix.total_molecules},
        cfg.channel, cfg.sigma);
    const double c_tau = probe.tau / (2.0 - 0.5);  // tau is linear in (ratio - 1/2)
    return tau / c_tau + 0.5;
}

// Step-extended model release fraction and its derivative for the sweeps.
struct SweepRelease {
    MatrixParams m;
    double t_rel;
    double t_edge;

    explicit SweepRelease(const MatrixParams& params)
        : m(params), t_rel(release_time(params)), t_edge(frenning_time_edge(params))
    {
    }

    double fraction(double t) const
    {
        if (t <= 0.0)
            return 0.0;
        if (t >= t_edge)
            return 1.0;
        return frenning_fraction(t, m);
    }

    double rate(double t) const
    {
        const double h = 1e-5 * t_edge;
        const double lo = std::max(0.0, t - h);
        const double hi = std::min(t_edge, t + h);
        if (hi <= lo)
            return 0.0;
        return (fraction(hi) - fraction(lo)) / (hi - lo) * m.total_molecules;
    }
};

void run_regime_nrmse(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    std::vector<double> taus = cfg.sweep.taus;
    if (taus.empty())
        taus = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};

    const double t_abs = absorption_time(cfg.sigma, cfg.channel);
    const double n_inf_per = cfg.channel.hitting_fraction();

    std::vector<double> tau_col;
    std::vector<std::optional<double>> ch_approx, ch_bound, rel_approx, rel_bound;
    for (double tau : taus) {
        MatrixParams m = cfg.matrix;
        m.loading_ratio = ratio_for_tau(tau, cfg);
        const SweepRelease rel(m);
        const double t_max = rel.t_rel + t_abs;
        TimeGrid grid = TimeGrid::make_logarithmic(t_max * 1e-5, 10.0 * t_max, 140);
        const double n_inf = m.total_molecules * n_inf_per;
        auto frac = [&rel](double t) { return rel.fraction(t); };

        tau_col.push_back(tau);
        ch_approx.emplace_back();
        ch_bound.emplace_back();
        rel_approx.emplace_back();
        rel_bound.emplace_back();

        if (tau <= 1.0 + 1e-12) {
            std::vector<double> err(grid.size()), bound(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = grid.points[i];
                err[i] = approx_error_channel_dominated(t, frac, rel.t_rel, m, cfg.channel);
                bound[i] = error_bound_channel_dominated(t, m, cfg.channel);
            }
            // raw-seconds time measure reproduces the stated anchor at tau = 1e-5
            ch_approx.back() = nrmse_curve(err, grid, n_inf, 1.0);
            ch_bound.back() = nrmse_curve(bound, grid, n_inf, 1.0);
        }
        if (tau >= 1.0 - 1e-12) {
            std::vector<double> err(grid.size()), bound(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = grid.points[i];
                err[i] = approx_error_release_dominated(t, frac, m, cfg.channel);
                bound[i] = error_bound_release_dominated(t, rel.rate(t), cfg.channel, t_abs);
            }
            // t_max-normalized time measure reproduces the anchor at tau = 1e3
            rel_approx.back() = nrmse_curve(err, grid, n_inf, t_max);
            rel_bound.back() = nrmse_curve(bound, grid, n_inf, t_max);
        }
    }

    const std::string file = "regime_nrmse.csv";
    write_csv_optional(run.path_of(file), "tau", tau_col,
                       {{"nrmse_channel_dominated", ch_approx},
                        {"nrmse_channel_bound", ch_bound},
                        {"nrmse_release_dominated", rel_approx},
                        {"nrmse_release_bound", rel_bound}});
    run.emit(file);
    run.write_manifest();
}

void run_regime_deviation(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    const double t_abs = absorption_time(cfg.sigma, cfg.channel);

    std::vector<double> channel_taus, release_taus;
    for (double tau : cfg.sweep.taus)
        (tau <= 1.0 ? channel_taus : release_taus).push_back(tau);
    if (channel_taus.empty() && release_taus.empty()) {
        channel_taus = {1e-5, 1e-4, 1e-3, 1e-2};
        release_taus = {1e1, 1e2, 1e3, 1e4};
    }

    auto emit_side = [&](const std::vector<double>& taus, bool channel_side,
                         const std::string& file) {
        if (taus.empty())
            return;
        std::vector<double> x;  // t / t_max
        const int n = cfg.grid.n_points;
        for (int i = 0; i < n; ++i)
            x.push_back(std::pow(10.0, -5.0 + 5.0 * static_cast<double>(i) / (n - 1)));
        std::vector<CsvOptionalColumn> cols;
        for (double tau : taus) {
            MatrixParams m = cfg.matrix;
            m.loading_ratio = ratio_for_tau(tau, cfg);
            const SweepRelease rel(m);
            const double t_max = rel.t_rel + t_abs;
            auto frac = [&rel](double t) { return rel.fraction(t); };
            CsvOptionalColumn col;
            col.name = "dev_pct_tau_" + tau_tag(tau);
            for (double xt : x) {
                const double t = xt * t_max;
                const double err = channel_side
                    ? approx_error_channel_dominated(t, frac, rel.t_rel, m, cfg.channel)
                    : approx_error_release_dominated(t, frac, m, cfg.channel);
                const double approx = channel_side
                    ? m.total_molecules * absorbed_fraction_surface(t, m, cfg.channel)
                    : m.total_molecules * rel.fraction(t) * cfg.channel.hitting_fraction();
                const double actual = approx - err;
                if (actual > 0.0)
                    col.values.emplace_back(err / actual * 100.0);
                else
                    col.values.emplace_back(std::nullopt);
            }
            cols.push_back(std::move(col));
        }
        write_csv_optional(run.path_of(file), "t_over_tmax", x, cols);
        run.emit(file);
    };

    emit_side(channel_taus, true, "regime_deviation_channel.csv");
    emit_side(release_taus, false, "regime_deviation_release.csv");
    run.write_manifest();
}

void run_micelle_release(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    const MatrixParams& m = cfg.matrix;
    run.note(micelle_validity_note(m.loading_ratio));

    const double t_edge = frenning_time_edge(m);
    const double kSixtyDays = 60.0 * 86400.0;
    const double t_end = cfg.grid.t_end_s > 0.0 ? cfg.grid.t_end_s
                                                : std::min(1.05 * t_edge, kSixtyDays);
    TimeGrid grid = TimeGrid::make_linear(0.0, t_end, cfg.grid.n_points);

    ReleaseCurve mic = micelle_release_curve(m, grid);
    ReleaseCurve fdm = fdm_release_oracle(m);
    std::vector<double> fdm_on_grid(grid.size());
    {
        ReleaseCurve tmp;
        tmp.grid = fdm.grid;
        tmp.fraction = fdm.fraction;
        for (std::size_t i = 0; i < grid.size(); ++i)
            fdm_on_grid[i] = tmp.fraction_at(grid.points[i]);
    }

    std::vector<CsvColumn> cols{{"micelle", mic.fraction}, {"fdm", fdm_on_grid}};
    if (cfg.pbs.realizations > 0) {
        pbs::Config pc;
        pc.dt = cfg.pbs.dt_s;
        pc.n_steps = static_cast<std::int64_t>(std::ceil(t_end / pc.dt));
        pc.realizations = cfg.pbs.realizations;
        pc.seed = cfg.pbs.seed;
        pc.front_table = pbs::FrontTable::from_curve(fdm);
        pbs::Result sim = pbs::simulate_release(m, pc);
        std::vector<double> mean(grid.size()), serr(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& ts = sim.grid.points;
            std::size_t k = 0;
            while (k + 1 < ts.size() && ts[k + 1] <= grid.points[i])
                ++k;
            mean[i] = sim.released_mean[k] / m.total_molecules;
            serr[i] = sim.released_stderr[k] / m.total_molecules;
        }
        cols.push_back({"pbs_mean", mean});
        cols.push_back({"pbs_stderr", serr});
    }
    write_csv(run.path_of("micelle_release.csv"), "t_s", grid.points, cols);
    run.emit("micelle_release.csv");

    write_front_table(run.path_of("front_table.csv"), fdm);
    run.emit("front_table.csv");
    run.write_manifest();
}

void run_micelle_response(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    const MatrixParams& m = cfg.matrix;
    run.note(micelle_validity_note(m.loading_ratio));

    const double t_abs = absorption_time(cfg.sigma, cfg.channel);
    const double t_edge = frenning_time_edge(m);
    const double t_end = cfg.grid.t_end_s > 0.0 ? cfg.grid.t_end_s : t_edge + 5.0 * t_abs;
    TimeGrid grid = TimeGrid::make_logarithmic(t_end * 1e-4, t_end, cfg.grid.n_points);

    auto frac = [&m, t_edge](double t) {
        if (t <= 0.0)
            return 0.0;
        if (t >= t_edge)
            return 1.0;
        return micelle_fraction(t, m);
    };

    ResponseCurve cr = response_convolution(frac, m, cfg.channel, grid);
    std::vector<double> approx(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        approx[i] = m.total_molecules * frac(grid.points[i]) * cfg.channel.hitting_fraction();

    write_csv(run.path_of("micelle_response.csv"), "t_s", grid.points,
              {{"cr_convolution", cr.absorbed}, {"cr_release_dominated", approx}});
    run.emit("micelle_response.csv");

    const RegimeReport rep = regime_ratio(m, cfg.channel, cfg.sigma);
    run.write_manifest({{"tau", rep.tau}, {"classification", to_string(rep.classification)}});
}

void run_regime_report(Runner& run)
{
    const ExperimentConfig& cfg = run.cfg;
    const RegimeReport rep = regime_ratio(cfg.matrix, cfg.channel, cfg.sigma);

    json doc;
    doc["t_rel_s"] = rep.t_rel;
    doc["t_abs_s"] = rep.t_abs;
    doc["t_peak_point_s"] = rep.t_peak_point;
    doc["t_max_s"] = rep.t_max();
    doc["tau"] = rep.tau;
    doc["sigma"] = rep.sigma;
    doc["classification"] = to_string(rep.classification);
    doc["thresholds"] = {{"tau_low", rep.thresholds.tau_low},
                         {"tau_high", rep.thresholds.tau_high}};
    {
        std::ofstream out(run.path_of("regime_report.json"), std::ios::binary);
        out << doc.dump(2) << "\n";
    }

    char line[512];
    std::string text;
    text += "regime report\n";
    std::snprintf(line, sizeof(line), "  %-22s %.6e s\n", "release time t_rel", rep.t_rel);
    text += line;
    std::snprintf(line, sizeof(line), "  %-22s %.6e s (sigma = %.4g)\n",
                  "absorption time t_abs", rep.t_abs, rep.sigma);
    text += line;
    std::snprintf(line, sizeof(line), "  %-22s %.6e s\n", "point peak time", rep.t_peak_point);
    text += line;
    std::snprintf(line, sizeof(line), "  %-22s %.6e\n", "tau = t_rel/t_abs", rep.tau);
    text += line;
    std::snprintf(line, sizeof(line), "  %-22s %s (tau_low = %g, tau_high = %g)\n",
                  "classification", to_string(rep.classification).c_str(),
                  rep.thresholds.tau_low, rep.thresholds.tau_high);
    text += line;
    run.summary.report_text = text;

    run.write_manifest(doc);
}

} // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir)
{
    {
        const std::vector<std::string> errors = validate_config(cfg);
        if (!errors.empty()) {
            std::string what = "invalid config:";
            for (const auto& e : errors)
                what += "\n  " + e;
            throw std::invalid_argument(what);
        }
    }

    Runner run(cfg, out_dir);
    if (cfg.experiment == "release-profile")
        run_release_profile(run);
    else if (cfg.experiment == "channel-response")
        run_channel_response(run, false);
    else if (cfg.experiment == "absorption-rate")
        run_channel_response(run, true);
    else if (cfg.experiment == "regime-nrmse")
        run_regime_nrmse(run);
    else if (cfg.experiment == "regime-deviation")
        run_regime_deviation(run);
    else if (cfg.experiment == "micelle-release")
        run_micelle_release(run);
    else if (cfg.experiment == "micelle-response")
        run_micelle_response(run);
    else if (cfg.experiment == "regime-report")
        run_regime_report(run);
    else
        throw std::invalid_argument("config.experiment: unknown experiment " + cfg.experiment);
    return run.summary;
}

} // namespace matrel
