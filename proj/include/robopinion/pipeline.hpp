#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "robopinion/slam.hpp"

namespace robopinion::pipeline {

/// Every knob of the pipeline. Loadable from a `key=value` config file
/// (keys match the field comments); CLI flags override file values.
struct PipelineConfig {
    // paths
    std::string corpus_dir;     // corpus_dir
    std::string paradigm_file;  // paradigm_file (empty: built-in defaults)
    std::string concept_file;   // concept_file
    std::string out_dir;        // out_dir
    std::string answers_file;   // answers_file (empty: interactive)

    // numeric knobs
    double delta_max = 2.0;       // delta_max, > 0
    double epsilon = 0.045;       // epsilon, in [0, 0.5)
    double alpha_nn = 0.95;       // alpha_nn, in (0, 1)
    double alpha_joint = 0.99;    // alpha_joint, in (0, 1)
    double q_scale = 1.0;         // q_scale, >= 0 (scales modeled process noise)
    double r_scale = 1.0;         // r_scale, >= 0 (scales modeled sensor noise)
    double r_true_scale = 1.0;    // r_true_scale, >= 0 (actual sensor error vs model)
    double stress = 1.0;          // stress, > 0 (scales delta_max past the gate)
    std::uint64_t seed = 1;       // seed
    double sensor_range = 30.0;   // sensor_range, > 0
    double side = 100.0;          // side, > 0
    double step_length = 2.0;     // step_length, > 0
    int laps = 1;                 // laps, >= 1
    std::size_t window = 5;       // window, >= 1
    double smoothing_k = 0.01;    // smoothing_k, >= 0
    double so_sigma = 1.0;        // so_sigma, > 0
    double tau = 0.0;             // tau, >= 0
    double landmark_prior_sigma = 1.0;  // landmark_prior_sigma, >= 0

    // mode flags
    slam::Associator associator = slam::Associator::jcbb;  // associator = nn | jcbb
};

/// Parse one `key=value` line into the config; throws on unknown keys or
/// unparsable values.
void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value);

/// `key=value` per line, `#` comments and blank lines allowed.
PipelineConfig load_config_file(const std::filesystem::path& path,
                                PipelineConfig base = PipelineConfig{});

/// Range-check every knob; throws a validation error naming the offender.
void validate_config(const PipelineConfig& config);

slam::SimParams sim_params(const PipelineConfig& config);

struct PipelineOutcome {
    double score = 0.0;
    bool degenerate = false;  // perfectly neutral opinion (constant profile)
    std::vector<std::filesystem::path> artifacts;
};

/// Full run: interview -> landscape -> simulate -> polarity. Writes
/// session.txt, map.csv, trail.csv, associations.csv, final_map.csv,
/// aberration.csv, result.csv and report.svg into out_dir. On error the
/// partially written artifacts are removed and the error rethrown.
PipelineOutcome run_pipeline(const PipelineConfig& config);

struct CompareRow {
    double noise_scale = 1.0;
    double nn_rate = 0.0;
    double jcbb_rate = 0.0;
};

/// Monte-Carlo NN vs JCBB table over `runs` seeded runs per noise scale;
/// seeds are `base_seed + i`. Independent runs execute concurrently.
std::vector<CompareRow> compare_associators(const PipelineConfig& config,
                                            const std::vector<double>& noise_scales,
                                            int runs);

std::string compare_csv(const std::vector<CompareRow>& rows);

}  // namespace robopinion::pipeline
