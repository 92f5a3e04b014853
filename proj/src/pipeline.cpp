#include "robopinion/pipeline.hpp"

#include <charconv>
#include <future>
#include <iostream>

#include "robopinion/error.hpp"
#include "robopinion/interview.hpp"
#include "robopinion/io.hpp"
#include "robopinion/lexicon.hpp"
#include "robopinion/polarity.hpp"
#include "robopinion/svg.hpp"

namespace robopinion::pipeline {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        fail_validation("config: key '" + key + "' needs a number, got \"" + value + "\"");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        fail_validation("config: key '" + key + "' needs a non-negative integer, got \"" + value +
                        "\"");
    }
    return parsed;
}

std::string strip(std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "corpus_dir") config.corpus_dir = value;
    else if (key == "paradigm_file") config.paradigm_file = value;
    else if (key == "concept_file") config.concept_file = value;
    else if (key == "out_dir") config.out_dir = value;
    else if (key == "answers_file") config.answers_file = value;
    else if (key == "delta_max") config.delta_max = parse_double(key, value);
    else if (key == "epsilon") config.epsilon = parse_double(key, value);
    else if (key == "alpha_nn") config.alpha_nn = parse_double(key, value);
    else if (key == "alpha_joint") config.alpha_joint = parse_double(key, value);
    else if (key == "q_scale") config.q_scale = parse_double(key, value);
    else if (key == "r_scale") config.r_scale = parse_double(key, value);
    else if (key == "r_true_scale") config.r_true_scale = parse_double(key, value);
    else if (key == "stress") config.stress = parse_double(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "sensor_range") config.sensor_range = parse_double(key, value);
    else if (key == "side") config.side = parse_double(key, value);
    else if (key == "step_length") config.step_length = parse_double(key, value);
    else if (key == "laps") config.laps = static_cast<int>(parse_u64(key, value));
    else if (key == "window") config.window = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "smoothing_k") config.smoothing_k = parse_double(key, value);
    else if (key == "so_sigma") config.so_sigma = parse_double(key, value);
    else if (key == "tau") config.tau = parse_double(key, value);
    else if (key == "landmark_prior_sigma")
        config.landmark_prior_sigma = parse_double(key, value);
    else if (key == "associator") {
        if (value == "nn") config.associator = slam::Associator::nn;
        else if (value == "jcbb") config.associator = slam::Associator::jcbb;
        else fail_validation("config: associator must be nn or jcbb, got \"" + value + "\"");
    } else {
        fail_validation("config: unknown key '" + key + "'");
    }
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
    const std::string text = read_file(path);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string line(text.substr(start, nl == std::string::npos ? nl : nl - start));
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        line = strip(line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail_validation("config line " + std::to_string(line_no) +
                            ": expected key=value, got \"" + line + "\"");
        }
        apply_config_entry(base, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return base;
}

void validate_config(const PipelineConfig& config) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) fail_validation("config: " + what);
    };
    require(config.delta_max > 0.0, "delta_max must be > 0");
    require(config.epsilon >= 0.0 && config.epsilon < 0.5, "epsilon must lie in [0, 0.5)");
    require(config.alpha_nn > 0.0 && config.alpha_nn < 1.0, "alpha_nn must lie in (0, 1)");
    require(config.alpha_joint > 0.0 && config.alpha_joint < 1.0,
            "alpha_joint must lie in (0, 1)");
    require(config.q_scale >= 0.0, "q_scale must be >= 0");
    require(config.r_scale >= 0.0, "r_scale must be >= 0");
    require(config.r_true_scale >= 0.0, "r_true_scale must be >= 0");
    require(config.stress > 0.0, "stress must be > 0");
    require(config.sensor_range > 0.0, "sensor_range must be > 0");
    require(config.side > 0.0, "side must be > 0");
    require(config.step_length > 0.0, "step_length must be > 0");
    require(config.laps >= 1, "laps must be >= 1");
    require(config.window >= 1, "window must be >= 1");
    require(config.smoothing_k >= 0.0, "smoothing_k must be >= 0");
    require(config.so_sigma > 0.0, "so_sigma must be > 0");
    require(config.tau >= 0.0, "tau must be >= 0");
    require(config.landmark_prior_sigma >= 0.0, "landmark_prior_sigma must be >= 0");
}

slam::SimParams sim_params(const PipelineConfig& config) {
    slam::SimParams params;
    params.sensor_range = config.sensor_range;
    params.step_length = config.step_length;
    params.laps = config.laps;
    params.alpha_nn = config.alpha_nn;
    params.alpha_joint = config.alpha_joint;
    params.Q = (config.q_scale * params.Q).eval();
    params.R = (config.r_scale * params.R).eval();
    params.r_true_scale = config.r_true_scale;
    params.landmark_prior_sigma = config.landmark_prior_sigma;
    return params;
}

PipelineOutcome run_pipeline(const PipelineConfig& config) {
    validate_config(config);
    if (config.concept_file.empty() || config.corpus_dir.empty() || config.out_dir.empty()) {
        fail_validation("pipeline needs concept_file, corpus_dir and out_dir");
    }

    PipelineOutcome outcome;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path path = std::filesystem::path(config.out_dir) / name;
        write_file(path, content);
        outcome.artifacts.push_back(path);
    };

    try {
        std::filesystem::create_directories(config.out_dir);

        // Linguistic resources.
        const auto docs = corpus::load_corpus_dir(config.corpus_dir);
        const auto table = lexicon::build_counts(docs);
        const lexicon::ParadigmSets paradigms =
            config.paradigm_file.empty() ? lexicon::default_paradigms()
                                         : lexicon::parse_paradigms(read_file(config.paradigm_file));
        const interview::SoLookup so_lookup =
            [&table, &paradigms, &config](const std::string& term) -> std::optional<double> {
            if (!table.has(term)) return std::nullopt;
            return lexicon::semantic_orientation(table, paradigms, term, config.smoothing_k);
        };

        // Interview session.
        const interview::ConceptSpec spec =
            interview::parse_concept_spec(read_file(config.concept_file));
        interview::SessionOptions options;
        options.window = config.window;
        options.so_sigma = config.so_sigma;
        interview::SessionRecord record;
        if (config.answers_file.empty()) {
            interview::InteractiveAnswers answers(std::cin, std::cout);
            record = interview::run_session(spec, answers, so_lookup, options);
        } else {
            interview::ScriptedAnswers answers(read_file(config.answers_file));
            record = interview::run_session(spec, answers, so_lookup, options);
        }
        emit("session.txt", interview::write_session(record));

        // Landscape and simulation.
        const auto gt = landscape::build_ground_truth(spec, config.side);
        const auto offsets =
            landscape::session_offsets(record, config.delta_max * config.stress);
        const auto observed = landscape::place_observed_features(gt, offsets);
        emit("map.csv", landscape::map_csv(gt));

        const slam::RunResult run =
            slam::simulate_run(gt, observed, sim_params(config), config.seed, config.associator);
        emit("trail.csv", slam::trail_csv(run));
        emit("associations.csv", slam::associations_csv(run));
        const auto estimated = slam::estimated_map(run, gt);
        emit("final_map.csv", landscape::map_csv(gt, estimated));

        // Polarity reduction.
        polarity::AberrationProfile profile = polarity::aberrations(run, gt);
        polarity::PolarityResult result;
        try {
            profile = polarity::normalize(std::move(profile));
        } catch (const Error&) {
            // Constant profile: perfectly neutral opinion.
            outcome.degenerate = true;
            for (std::size_t i = 0; i < profile.values.size(); ++i) profile.values[i] = 0.0;
        }
        if (!outcome.degenerate) {
            result = polarity::slope_lengths(profile, config.epsilon);
        } else {
            result.neutral_len = 1.0;
        }
        outcome.score = result.score;
        emit("aberration.csv", polarity::profile_csv(profile));
        emit("result.csv", polarity::result_csv(result));
        emit("report.svg", svg::emit_svg(run, gt, estimated, profile));
    } catch (...) {
        for (const auto& path : outcome.artifacts) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        throw;
    }
    return outcome;
}

std::vector<CompareRow> compare_associators(const PipelineConfig& config,
                                            const std::vector<double>& noise_scales,
                                            int runs) {
    validate_config(config);
    if (runs < 1) fail_validation("compare: runs must be >= 1");
    if (config.concept_file.empty()) fail_validation("compare needs concept_file");

    const interview::ConceptSpec spec =
        interview::parse_concept_spec(read_file(config.concept_file));
    const auto gt = landscape::build_ground_truth(spec, config.side);
    std::vector<std::array<double, 2>> observed;
    for (const auto& lm : gt.landmarks) observed.push_back({lm.x, lm.y});

    std::vector<CompareRow> rows;
    for (const double scale : noise_scales) {
        slam::SimParams params = sim_params(config);
        params.r_true_scale = scale;

        auto mean_rate = [&](slam::Associator associator) {
            std::vector<std::future<double>> futures;
            futures.reserve(static_cast<std::size_t>(runs));
            for (int i = 0; i < runs; ++i) {
                futures.push_back(std::async(std::launch::async, [&, i] {
                    return slam::simulate_run(gt, observed, params,
                                              config.seed + static_cast<std::uint64_t>(i),
                                              associator)
                        .correct_rate;
                }));
            }
            double sum = 0.0;
            for (auto& f : futures) sum += f.get();
            return sum / runs;
        };

        CompareRow row;
        row.noise_scale = scale;
        row.nn_rate = mean_rate(slam::Associator::nn);
        row.jcbb_rate = mean_rate(slam::Associator::jcbb);
        rows.push_back(row);
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "noise_scale,nn_rate,jcbb_rate\n";
    for (const CompareRow& row : rows) {
        out += fmt_double(row.noise_scale) + "," + fmt_double(row.nn_rate) + "," +
               fmt_double(row.jcbb_rate) + "\n";
    }
    return out;
}

}  // namespace robopinion::pipeline
