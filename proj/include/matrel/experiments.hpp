#ifndef MATREL_EXPERIMENTS_HPP
#define MATREL_EXPERIMENTS_HPP

/**
 * @file experiments.hpp
 * @brief Experiment runner: turns a validated config into plot-ready CSV
 *        files plus a manifest (parameters, code version, seed, config hash,
 *        output list). Identical config and seed produce byte-identical
 *        outputs.
 */

#include <string>
#include <vector>

#include "matrel/config.hpp"

namespace matrel {

struct RunSummary {
    std::vector<std::string> csv_files;  ///< paths relative to the output dir
    std::string manifest_path;
    std::vector<std::string> notes;      ///< advisories surfaced during the run
    std::string report_text;             ///< human-readable table (regime-report)
};

/// Runs cfg.experiment and writes everything under out_dir (created if
/// missing). Throws on invalid configs; numerical accuracy failures
/// propagate as matrel::accuracy_error.
RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

} // namespace matrel

#endif
