#ifndef MATREL_CONFIG_HPP
#define MATREL_CONFIG_HPP

/**
 * @file config.hpp
 * @brief Experiment configuration: a single JSON document with SI-unit keys
 *        suffixed by unit (a_m, D_m_m2s, d_m, r_rx_m, D_c_m2s, A_over_Cs,
 *        sigma, t_end_s, dt_s, seed). Unit suffixes are deliberate: these
 *        parameters invite nm/um mistakes.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "matrel/pbs.hpp"
#include "matrel/types.hpp"

namespace matrel {

inline constexpr const char* kVersion = "0.1.0";

struct GridConfig {
    double t_end_s = 0.0;      ///< 0 selects an experiment-specific default
    int n_points = 400;
    GridSpacing spacing = GridSpacing::logarithmic;
};

struct PbsRunConfig {
    double dt_s = 1e-6;
    int realizations = 20;     ///< 0 skips the particle simulation
    std::uint64_t seed = 1;
    pbs::AbsorptionMode absorption_mode = pbs::AbsorptionMode::intra_step_crossing;
};

/// Optional parameter sweeps; empty vectors select experiment defaults.
struct SweepConfig {
    std::vector<double> ratios;       ///< A/C_s values (release/response families)
    std::vector<double> distances_m;  ///< TX-RX distances
    std::vector<double> taus;         ///< regime sweep targets
};

struct ExperimentConfig {
    std::string experiment;
    MatrixParams matrix{1e-6, 1e-9, 1.0, 1e4};
    ChannelParams channel{1e-9, 5e-6, 1e-6};
    double sigma = 0.99;
    GridConfig grid;
    PbsRunConfig pbs;
    SweepConfig sweep;
    std::string provenance;  ///< carried into the manifest (preset notes)
};

const std::vector<std::string>& known_experiments();
const std::vector<std::string>& known_presets();

/// Parses a JSON config document. Structural problems throw
/// std::invalid_argument naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Semantic validation; returns one message per violated field constraint
/// plus any model-validity advisories. Empty result means runnable.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Canonical JSON serialization (sorted keys; stable across runs).
std::string to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 over the canonical serialization.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Exact parameter sets of the evaluation tables. Names:
/// dox-ph5, dox-ph74, beta-lap, eval-secVIA, eval-secVIC.
/// Unknown names throw std::invalid_argument listing the valid ones.
ExperimentConfig preset(const std::string& name);

} // namespace matrel

#endif
