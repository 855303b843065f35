#ifndef MATREL_PBS_HPP
#define MATREL_PBS_HPP

/**
 * @file pbs.hpp
 * @brief Particle-based Monte Carlo simulation of the matrix release and of
 *        the end-to-end system with free diffusion and an absorbing receiver.
 *
 * Release phase: M_inf molecules seeded uniformly in the sphere; a molecule
 * starts its random walk (Gaussian steps, variance 2 D_m dt per axis) once
 * the pre-computed dissolution front has passed it, steps into the
 * undissolved core revert to the previous position, and a molecule counts
 * as released once its distance from the centre reaches a.
 *
 * End-to-end: released molecules switch to the channel coefficient D_c and
 * walk freely until absorbed by the receiver. The carrier is transparent to
 * released molecules: a walker that re-enters r < a passes through freely.
 *
 * Realizations run in parallel with one independent RNG stream each;
 * aggregation sums per-realization integer counts in realization order, so
 * results are bit-identical for any worker count.
 */

#include <cstdint>
#include <vector>

#include "matrel/types.hpp"

namespace matrel::pbs {

/// Dissolution front R(t)/a sampled at increasing times; linear
/// interpolation between entries, constant extension at both ends.
struct FrontTable {
    std::vector<double> times;   ///< [s], strictly increasing
    std::vector<double> fronts;  ///< R/a, strictly decreasing

    /// Extracts a strictly decreasing table from an oracle release curve
    /// (repeated / non-decreasing entries dropped, truncated after the
    /// first zero).
    static FrontTable from_curve(const ReleaseCurve& curve);

    /// Instantaneous dissolution (front at the centre from t = 0).
    static FrontTable dissolved();

    double front_at(double t) const;
    bool covers(double t_end) const;
    void validate() const;
};

enum class AbsorptionMode {
    end_of_step,         ///< absorb when the end-of-step position is inside the RX
    intra_step_crossing  ///< additionally accept with the Brownian-bridge
                         ///< first-passage probability exp(-s1 s2/(D_c dt))
};

struct Config {
    double dt = 1e-6;          ///< time step [s]
    std::int64_t n_steps = 0;  ///< number of steps
    int realizations = 20;     ///< averaged runs (paper-scale: 100)
    std::uint64_t seed = 1;    ///< master seed; one derived stream per realization
    AbsorptionMode absorption_mode = AbsorptionMode::intra_step_crossing;
    FrontTable front_table;
    int record_points = 512;   ///< output samples (clamped to n_steps)

    void validate() const;
};

struct Result {
    TimeGrid grid;
    std::vector<double> released_mean;
    std::vector<double> released_stderr;
    std::vector<double> absorbed_mean;   ///< empty for release-only runs
    std::vector<double> absorbed_stderr;

    /// Max over recorded steps of |released+unreleased-M_inf| style audits;
    /// both stay 0 for a correct run.
    std::int64_t conservation_violations = 0;
    std::int64_t leak_violations = 0;  ///< molecules seen inside the undissolved core
};

/// Release-phase-only simulation (Algorithm: front-gated random walk with
/// bounce-back at the core). front_table must cover the horizon or end at 0.
Result simulate_release(const MatrixParams& m, const Config& cfg);

/// Full system: release as above, then free diffusion with absorption at the
/// receiver centred at distance d on the x-axis. Requires d > a + r_RX.
Result simulate_end_to_end(const MatrixParams& m, const ChannelParams& c, const Config& cfg);

/// Per-time-point mean and standard error (ddof = 1) across realizations.
/// raw[r][k] = count in realization r at record point k.
void statistics(const std::vector<std::vector<std::uint32_t>>& raw,
                std::vector<double>& mean, std::vector<double>& stderr_out);

/// xoshiro256++ with SplitMix64 seeding; value-type, deterministic stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    /// Derives the stream for one realization from a master seed.
    static Rng for_realization(std::uint64_t master_seed, int realization);

    std::uint64_t next_u64();
    double next_double();  ///< uniform in [0, 1)
    double next_gaussian();

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace matrel::pbs

#endif
