#include "matrel/pbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace matrel::pbs {

namespace {

void require(bool ok, const char* message)
{
    if (!ok)
        throw std::invalid_argument(message);
}

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

int worker_count(int realizations)
{
    int n = 0;
    if (const char* env = std::getenv("MATREL_THREADS"))
        n = std::atoi(env);
    if (n <= 0)
        n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0)
        n = 1;
    return std::min(n, realizations);
}

} // namespace

Rng::Rng(std::uint64_t seed)
{
    std::uint64_t sm = seed;
    for (auto& word : s_)
        word = splitmix64(sm);
}

Rng Rng::for_realization(std::uint64_t master_seed, int realization)
{
    // decorrelate streams: hash (seed, realization) through SplitMix
    std::uint64_t sm = master_seed;
    (void)splitmix64(sm);
    sm ^= 0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(realization + 1);
    return Rng(splitmix64(sm));
}

std::uint64_t Rng::next_u64()
{
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // polar Box-Muller
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

FrontTable FrontTable::from_curve(const ReleaseCurve& curve)
{
    curve.validate();
    require(curve.has_front(), "FrontTable: release curve carries no front column");
    FrontTable table;
    double last_front = 2.0;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double f = curve.front[i];
        if (f < last_front) {
            table.times.push_back(curve.grid.points[i]);
            table.fronts.push_back(f);
            last_front = f;
            if (f == 0.0)
                break;
        }
    }
    table.validate();
    return table;
}

FrontTable FrontTable::dissolved()
{
    FrontTable table;
    table.times = {0.0};
    table.fronts = {0.0};
    return table;
}

double FrontTable::front_at(double t) const
{
    if (t <= times.front())
        return fronts.front();
    if (t >= times.back())
        return fronts.back();
    auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return fronts[lo] + w * (fronts[hi] - fronts[lo]);
}

bool FrontTable::covers(double t_end) const
{
    return fronts.back() == 0.0 || times.back() >= t_end;
}

void FrontTable::validate() const
{
    require(!times.empty() && times.size() == fronts.size(),
            "FrontTable: empty or mismatched columns");
    for (std::size_t i = 1; i < times.size(); ++i) {
        require(times[i] > times[i - 1], "FrontTable: times must be strictly increasing");
        require(fronts[i] < fronts[i - 1], "FrontTable: fronts must be strictly decreasing");
    }
    require(fronts.front() <= 1.0 && fronts.back() >= 0.0, "FrontTable: fronts must lie in [0, 1]");
}

void Config::validate() const
{
    require(dt > 0.0, "Config.dt: must be > 0");
    require(n_steps >= 1, "Config.n_steps: must be >= 1");
    require(realizations >= 1, "Config.realizations: must be >= 1");
    require(record_points >= 2, "Config.record_points: must be >= 2");
    front_table.validate();
}

namespace {

struct RecordPlan {
    std::vector<std::int64_t> steps;  // 1-based step indices to record after
    TimeGrid grid;

    RecordPlan(const Config& cfg)
    {
        const std::int64_t n = cfg.n_steps;
        const int points = static_cast<int>(std::min<std::int64_t>(cfg.record_points, n));
        steps.reserve(points);
        std::int64_t prev = 0;
        for (int i = 1; i <= points; ++i) {
            const std::int64_t k = (n * i) / points;
            if (k > prev) {
                steps.push_back(k);
                prev = k;
            }
        }
        grid.spacing = GridSpacing::linear;
        grid.points.reserve(steps.size());
        for (std::int64_t k : steps)
            grid.points.push_back(static_cast<double>(k) * cfg.dt);
    }
};

struct Vec3 {
    double x, y, z;
};

// Uniform point in the sphere of given radius: rejection in the bounding cube.
Vec3 uniform_in_sphere(Rng& rng, double radius)
{
    while (true) {
        const double x = 2.0 * rng.next_double() - 1.0;
        const double y = 2.0 * rng.next_double() - 1.0;
        const double z = 2.0 * rng.next_double() - 1.0;
        if (x * x + y * y + z * z <= 1.0)
            return {x * radius, y * radius, z * radius};
    }
}

enum class State : std::uint8_t { undissolved_or_inside, released, absorbed };

struct RealizationOutput {
    std::vector<std::uint32_t> released;
    std::vector<std::uint32_t> absorbed;
    std::int64_t leak_violations = 0;
    std::int64_t conservation_violations = 0;
};

/// One realization of the full walk. Release phase follows the front-gated
/// algorithm; when `channel` is set, released molecules keep walking with
/// D_c until absorbed by the receiver at (d, 0, 0).
RealizationOutput run_realization(const MatrixParams& m, const ChannelParams* channel,
                                  const Config& cfg, const RecordPlan& plan, Rng rng)
{
    const int n_mol = static_cast<int>(m.total_molecules);
    const double a = m.radius;
    const double sigma_m = std::sqrt(2.0 * m.diffusion * cfg.dt);

    const double sigma_c = channel ? std::sqrt(2.0 * channel->diffusion * cfg.dt) : 0.0;
    const double rx_x = channel ? channel->distance : 0.0;
    const double r_rx = channel ? channel->receiver_radius : 0.0;
    const bool bridge = channel && cfg.absorption_mode == AbsorptionMode::intra_step_crossing;
    const double bridge_denominator = channel ? channel->diffusion * cfg.dt : 1.0;

    std::vector<Vec3> pos(n_mol);
    std::vector<State> state(n_mol, State::undissolved_or_inside);
    for (auto& p : pos)
        p = uniform_in_sphere(rng, a);

    RealizationOutput out;
    out.released.resize(plan.steps.size());
    out.absorbed.resize(plan.steps.size());

    std::uint32_t released_count = 0;
    std::uint32_t absorbed_count = 0;
    std::size_t record_cursor = 0;

    for (std::int64_t k = 1; k <= cfg.n_steps; ++k) {
        const double t_k = static_cast<double>(k - 1) * cfg.dt;  // front sampled at step start
        const double R = a * cfg.front_table.front_at(t_k);

        for (int i = 0; i < n_mol; ++i) {
            if (state[i] == State::absorbed)
                continue;

            if (state[i] == State::undissolved_or_inside) {
                Vec3& p = pos[i];
                const double d0 = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
                if (d0 >= a) {
                    // crossed the carrier surface: released (and frozen in
                    // release-only runs)
                    state[i] = State::released;
                    ++released_count;
                } else if (d0 >= R) {
                    // dissolved: diffusive step, bounce back if it lands in
                    // the undissolved core
                    const Vec3 trial{p.x + sigma_m * rng.next_gaussian(),
                                     p.y + sigma_m * rng.next_gaussian(),
                                     p.z + sigma_m * rng.next_gaussian()};
                    const double d1 = std::sqrt(trial.x * trial.x + trial.y * trial.y
                                                + trial.z * trial.z);
                    if (d1 >= R)
                        p = trial;
                    const double d_now = (d1 >= R) ? d1 : d0;
                    if (d_now < R)
                        ++out.leak_violations;
                    continue;  // released check happens at the next step's view
                } else {
                    continue;  // still behind the front
                }
            }

            if (state[i] == State::released && channel) {
                Vec3& p = pos[i];
                const double s1 = std::sqrt((p.x - rx_x) * (p.x - rx_x) + p.y * p.y + p.z * p.z)
                                  - r_rx;
                const Vec3 trial{p.x + sigma_c * rng.next_gaussian(),
                                 p.y + sigma_c * rng.next_gaussian(),
                                 p.z + sigma_c * rng.next_gaussian()};
                const double s2 = std::sqrt((trial.x - rx_x) * (trial.x - rx_x)
                                            + trial.y * trial.y + trial.z * trial.z)
                                  - r_rx;
                if (s2 <= 0.0) {
                    state[i] = State::absorbed;
                    ++absorbed_count;
                    continue;
                }
                if (bridge && s1 > 0.0) {
                    // first-passage probability across the step against a
                    // locally flat absorber
                    const double p_hit = std::exp(-s1 * s2 / bridge_denominator);
                    if (rng.next_double() < p_hit) {
                        state[i] = State::absorbed;
                        ++absorbed_count;
                        continue;
                    }
                }
                p = trial;  // transparent carrier: no interaction with r < a
            }
        }

        if (record_cursor < plan.steps.size() && k == plan.steps[record_cursor]) {
            out.released[record_cursor] = released_count;
            out.absorbed[record_cursor] = absorbed_count;
            if (absorbed_count > released_count)
                ++out.conservation_violations;
            ++record_cursor;
        }
    }
    return out;
}

Result aggregate(const MatrixParams& m, const ChannelParams* channel, const Config& cfg)
{
    cfg.validate();
    m.validate();
    require(m.total_molecules <= 5e7, "Config: molecule count too large for the particle walk");
    const double horizon = static_cast<double>(cfg.n_steps) * cfg.dt;
    require(cfg.front_table.covers(horizon),
            "Config.front_table: does not cover the simulated horizon");
    if (channel)
        channel->validate_with(m);

    const RecordPlan plan(cfg);
    std::vector<RealizationOutput> results(cfg.realizations);

    std::atomic<int> next{0};
    const int workers = worker_count(cfg.realizations);
    auto work = [&]() {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= cfg.realizations)
                return;
            results[r] = run_realization(m, channel, cfg, plan,
                                         Rng::for_realization(cfg.seed, r));
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }

    Result res;
    res.grid = plan.grid;
    std::vector<std::vector<std::uint32_t>> released(cfg.realizations);
    std::vector<std::vector<std::uint32_t>> absorbed(cfg.realizations);
    for (int r = 0; r < cfg.realizations; ++r) {
        released[r] = std::move(results[r].released);
        absorbed[r] = std::move(results[r].absorbed);
        res.leak_violations += results[r].leak_violations;
        res.conservation_violations += results[r].conservation_violations;
    }
    statistics(released, res.released_mean, res.released_stderr);
    if (channel)
        statistics(absorbed, res.absorbed_mean, res.absorbed_stderr);
    return res;
}

} // namespace

Result simulate_release(const MatrixParams& m, const Config& cfg)
{
    return aggregate(m, nullptr, cfg);
}

Result simulate_end_to_end(const MatrixParams& m, const ChannelParams& c, const Config& cfg)
{
    return aggregate(m, &c, cfg);
}

void statistics(const std::vector<std::vector<std::uint32_t>>& raw,
                std::vector<double>& mean, std::vector<double>& stderr_out)
{
    require(!raw.empty(), "statistics: need at least one realization");
    const std::size_t points = raw.front().size();
    for (const auto& series : raw)
        require(series.size() == points, "statistics: ragged realization series");

    const double n = static_cast<double>(raw.size());
    mean.assign(points, 0.0);
    stderr_out.assign(points, 0.0);
    for (std::size_t k = 0; k < points; ++k) {
        double s = 0.0;
        for (const auto& series : raw)
            s += series[k];
        const double mu = s / n;
        mean[k] = mu;
        if (raw.size() > 1) {
            double ss = 0.0;
            for (const auto& series : raw) {
                const double d = series[k] - mu;
                ss += d * d;
            }
            stderr_out[k] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
    }
}

} // namespace matrel::pbs
