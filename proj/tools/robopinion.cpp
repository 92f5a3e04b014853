// robopinion: opinion polarity scoring through landmark-map navigation.
//
// Subcommands: lexicon build, concord, interview, simulate, score, pipeline,
// compare-assoc. Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 I/O error.

#include <CLI11.hpp>
#include <iostream>

#include "robopinion/error.hpp"
#include "robopinion/interview.hpp"
#include "robopinion/io.hpp"
#include "robopinion/lexicon.hpp"
#include "robopinion/pipeline.hpp"
#include "robopinion/polarity.hpp"
#include "robopinion/svg.hpp"

namespace {

using robopinion::pipeline::PipelineConfig;

// Options shared by the pipeline-shaped subcommands. A config file is
// applied first; only flags the user actually passed override it.
struct ConfigCli {
    std::string config_file;
    std::string associator;
    PipelineConfig base;

    void attach_common(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value config file (# comments)");
        cmd->add_option("--corpus", base.corpus_dir, "corpus directory of debate posts");
        cmd->add_option("--paradigms", base.paradigm_file, "paradigm file (+term/-term lines)");
        cmd->add_option("--concept", base.concept_file, "concept spec file");
        cmd->add_option("--out", base.out_dir, "output directory");
        cmd->add_option("--answers", base.answers_file,
                        "scripted answer file (one per line); omit for interactive");
        cmd->add_option("--delta-max", base.delta_max, "opinion displacement amplitude");
        cmd->add_option("--epsilon", base.epsilon, "neutral half-band for slope lengths");
        cmd->add_option("--alpha-nn", base.alpha_nn, "individual gating confidence");
        cmd->add_option("--alpha-joint", base.alpha_joint, "joint gating confidence");
        cmd->add_option("--q-scale", base.q_scale, "modeled process noise scale");
        cmd->add_option("--r-scale", base.r_scale, "modeled sensor noise scale");
        cmd->add_option("--r-true-scale", base.r_true_scale,
                        "actual sensor noise vs the filter model");
        cmd->add_option("--stress", base.stress, "scales delta_max past the association gate");
        cmd->add_option("--seed", base.seed, "random seed");
        cmd->add_option("--sensor-range", base.sensor_range, "point detector range");
        cmd->add_option("--side", base.side, "square trajectory side length");
        cmd->add_option("--step-length", base.step_length, "odometry step length");
        cmd->add_option("--laps", base.laps, "laps around the square");
        cmd->add_option("--window", base.window, "concordance context window");
        cmd->add_option("--smoothing-k", base.smoothing_k, "additive pair-count smoothing");
        cmd->add_option("--so-sigma", base.so_sigma, "SO magnitude rated as extreme");
        cmd->add_option("--tau", base.tau, "neutral threshold for mean-SO classification");
        cmd->add_option("--landmark-prior-sigma", base.landmark_prior_sigma,
                        "prior sigma of the imposed landmarks (0: build map from scratch)");
        cmd->add_option("--associator", associator, "nn | jcbb (default jcbb)");
    }

    PipelineConfig resolve(CLI::App* cmd) const {
        PipelineConfig config;
        if (!config_file.empty()) {
            config = robopinion::pipeline::load_config_file(config_file);
        }
        auto take = [&](const std::string& flag, auto member) {
            if (cmd->count(flag) > 0) config.*member = base.*member;
        };
        take("--corpus", &PipelineConfig::corpus_dir);
        take("--paradigms", &PipelineConfig::paradigm_file);
        take("--concept", &PipelineConfig::concept_file);
        take("--out", &PipelineConfig::out_dir);
        take("--answers", &PipelineConfig::answers_file);
        take("--delta-max", &PipelineConfig::delta_max);
        take("--epsilon", &PipelineConfig::epsilon);
        take("--alpha-nn", &PipelineConfig::alpha_nn);
        take("--alpha-joint", &PipelineConfig::alpha_joint);
        take("--q-scale", &PipelineConfig::q_scale);
        take("--r-scale", &PipelineConfig::r_scale);
        take("--r-true-scale", &PipelineConfig::r_true_scale);
        take("--stress", &PipelineConfig::stress);
        take("--seed", &PipelineConfig::seed);
        take("--sensor-range", &PipelineConfig::sensor_range);
        take("--side", &PipelineConfig::side);
        take("--step-length", &PipelineConfig::step_length);
        take("--laps", &PipelineConfig::laps);
        take("--window", &PipelineConfig::window);
        take("--smoothing-k", &PipelineConfig::smoothing_k);
        take("--so-sigma", &PipelineConfig::so_sigma);
        take("--tau", &PipelineConfig::tau);
        take("--landmark-prior-sigma", &PipelineConfig::landmark_prior_sigma);
        if (cmd->count("--associator") > 0) {
            robopinion::pipeline::apply_config_entry(config, "associator", associator);
        }
        robopinion::pipeline::validate_config(config);
        return config;
    }
};

void print_or_write(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        robopinion::write_file(out_path, content);
    }
}

robopinion::interview::SessionRecord run_interview(const PipelineConfig& config) {
    using namespace robopinion;
    if (config.concept_file.empty() || config.corpus_dir.empty()) {
        fail_validation("interview needs --concept and --corpus");
    }
    const auto docs = corpus::load_corpus_dir(config.corpus_dir);
    const auto table = lexicon::build_counts(docs);
    const auto paradigms = config.paradigm_file.empty()
                               ? lexicon::default_paradigms()
                               : lexicon::parse_paradigms(read_file(config.paradigm_file));
    const interview::SoLookup so_lookup =
        [&](const std::string& term) -> std::optional<double> {
        if (!table.has(term)) return std::nullopt;
        return lexicon::semantic_orientation(table, paradigms, term, config.smoothing_k);
    };
    const auto spec = interview::parse_concept_spec(read_file(config.concept_file));
    interview::SessionOptions options;
    options.window = config.window;
    options.so_sigma = config.so_sigma;
    if (config.answers_file.empty()) {
        interview::InteractiveAnswers answers(std::cin, std::cout);
        return interview::run_session(spec, answers, so_lookup, options);
    }
    interview::ScriptedAnswers answers(robopinion::read_file(config.answers_file));
    return interview::run_session(spec, answers, so_lookup, options);
}

/// Offsets for a simulation: from a session file when given, else neutral.
std::vector<robopinion::landscape::OpinionOffset> offsets_for(
    const PipelineConfig& config, const robopinion::interview::ConceptSpec& spec,
    const std::string& session_path) {
    using namespace robopinion;
    std::vector<landscape::OpinionOffset> offsets;
    if (session_path.empty()) {
        for (const auto& sub : spec.sub_concepts) {
            offsets.push_back({sub.index, 0.0});
        }
        return offsets;
    }
    const auto record = interview::parse_session(read_file(session_path), config.window);
    if (static_cast<int>(record.responses.size()) != spec.n()) {
        fail_validation("session holds " + std::to_string(record.responses.size()) +
                        " responses but the concept has " + std::to_string(spec.n()) +
                        " sub-concepts");
    }
    for (const auto& response : record.responses) {
        offsets.push_back(
            landscape::opinion_offset(spec, response, config.delta_max * config.stress));
    }
    return offsets;
}

int cmd_simulate(const PipelineConfig& config, const std::string& session_path,
                 bool with_score) {
    using namespace robopinion;
    if (config.concept_file.empty() || config.out_dir.empty()) {
        fail_validation("simulate/score need --concept and --out");
    }
    const auto spec = interview::parse_concept_spec(read_file(config.concept_file));
    const auto gt = landscape::build_ground_truth(spec, config.side);
    const auto observed =
        landscape::place_observed_features(gt, offsets_for(config, spec, session_path));

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path out(config.out_dir);
    const auto run = slam::simulate_run(gt, observed, pipeline::sim_params(config), config.seed,
                                        config.associator);
    write_file(out / "map.csv", landscape::map_csv(gt));
    write_file(out / "trail.csv", slam::trail_csv(run));
    write_file(out / "associations.csv", slam::associations_csv(run));
    const auto estimated = slam::estimated_map(run, gt);
    write_file(out / "final_map.csv", landscape::map_csv(gt, estimated));
    std::cout << "correct-association rate: " << fmt_double(run.correct_rate) << "\n";

    if (with_score) {
        auto profile = polarity::aberrations(run, gt);
        polarity::PolarityResult result;
        bool degenerate = false;
        try {
            profile = polarity::normalize(std::move(profile));
        } catch (const Error&) {
            degenerate = true;
            for (double& v : profile.values) v = 0.0;
            result.neutral_len = 1.0;
        }
        if (!degenerate) {
            result = polarity::slope_lengths(profile, config.epsilon);
        }
        write_file(out / "aberration.csv", polarity::profile_csv(profile));
        write_file(out / "result.csv", polarity::result_csv(result));
        write_file(out / "report.svg", svg::emit_svg(run, gt, estimated, profile));
        if (degenerate) {
            std::cout << "polarity: perfectly neutral (degenerate aberration profile)\n";
        } else {
            std::cout << "polarity score: " << fmt_double(result.score) << "\n";
        }
    }
    return 0;
}

int dispatch(CLI::App& app, int argc, char** argv) {
    app.require_subcommand(1);

    auto* lexicon_cmd = app.add_subcommand("lexicon", "linguistic resources");
    lexicon_cmd->require_subcommand(1);
    auto* lexicon_build =
        lexicon_cmd->add_subcommand("build", "co-occurrence counts and a term<TAB>SO dump");
    ConfigCli lexicon_cli;
    lexicon_cli.attach_common(lexicon_build);
    std::string lexicon_out;
    lexicon_build->add_option("--dump", lexicon_out, "output file (default stdout)");

    auto* concord_cmd = app.add_subcommand("concord", "KWIC concordance of a term");
    ConfigCli concord_cli;
    concord_cli.attach_common(concord_cmd);
    std::string concord_term;
    std::string concord_out;
    concord_cmd->add_option("term", concord_term, "term to concordance")->required();
    concord_cmd->add_option("--dump", concord_out, "output file (default stdout)");

    auto* interview_cmd =
        app.add_subcommand("interview", "run a session and write the TEMP session file");
    ConfigCli interview_cli;
    interview_cli.attach_common(interview_cmd);

    auto* simulate_cmd =
        app.add_subcommand("simulate", "landscape simulation (optionally from a session)");
    ConfigCli simulate_cli;
    simulate_cli.attach_common(simulate_cmd);
    std::string simulate_session;
    simulate_cmd->add_option("--session", simulate_session, "session file (omit: zero offsets)");

    auto* score_cmd = app.add_subcommand("score", "simulate and reduce to a polarity score");
    ConfigCli score_cli;
    score_cli.attach_common(score_cmd);
    std::string score_session;
    score_cmd->add_option("--session", score_session, "session file (omit: zero offsets)");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "end-to-end run with all artifacts");
    ConfigCli pipeline_cli;
    pipeline_cli.attach_common(pipeline_cmd);

    auto* compare_cmd =
        app.add_subcommand("compare-assoc", "NN vs JCBB Monte-Carlo association table");
    ConfigCli compare_cli;
    compare_cli.attach_common(compare_cmd);
    int compare_runs = 100;
    std::vector<double> compare_scales{1.0, 25.0};
    compare_cmd->add_option("--runs", compare_runs, "seeded runs per noise scale");
    compare_cmd->add_option("--noise-scales", compare_scales, "actual sensor noise scales");
    std::string compare_out;
    compare_cmd->add_option("--dump", compare_out, "output file (default stdout)");

    app.parse(argc, argv);

    using namespace robopinion;

    if (lexicon_build->parsed()) {
        const auto config = lexicon_cli.resolve(lexicon_build);
        if (config.corpus_dir.empty()) fail_validation("lexicon build needs --corpus");
        const auto docs = corpus::load_corpus_dir(config.corpus_dir);
        const auto table = lexicon::build_counts(docs);
        const auto paradigms = config.paradigm_file.empty()
                                   ? lexicon::default_paradigms()
                                   : lexicon::parse_paradigms(read_file(config.paradigm_file));
        print_or_write(lexicon_out, lexicon::lexicon_dump(table, paradigms, config.smoothing_k));
        return 0;
    }

    if (concord_cmd->parsed()) {
        const auto config = concord_cli.resolve(concord_cmd);
        if (config.corpus_dir.empty()) fail_validation("concord needs --corpus");
        const auto docs = corpus::load_corpus_dir(config.corpus_dir);
        const auto lines = corpus::concordance(concord_term, docs, config.window);
        print_or_write(concord_out, corpus::concordance_tsv(lines));
        return 0;
    }

    if (interview_cmd->parsed()) {
        const auto config = interview_cli.resolve(interview_cmd);
        const auto record = run_interview(config);
        const std::string text = interview::write_session(record);
        if (config.out_dir.empty()) {
            std::cout << text;
        } else {
            std::filesystem::create_directories(config.out_dir);
            write_file(std::filesystem::path(config.out_dir) / "session.txt", text);
        }
        return 0;
    }

    if (simulate_cmd->parsed()) {
        return cmd_simulate(simulate_cli.resolve(simulate_cmd), simulate_session, false);
    }
    if (score_cmd->parsed()) {
        return cmd_simulate(score_cli.resolve(score_cmd), score_session, true);
    }

    if (pipeline_cmd->parsed()) {
        const auto config = pipeline_cli.resolve(pipeline_cmd);
        const auto outcome = pipeline::run_pipeline(config);
        if (outcome.degenerate) {
            std::cout << "polarity: perfectly neutral (degenerate aberration profile)\n";
        } else {
            std::cout << "polarity score: " << fmt_double(outcome.score) << "\n";
        }
        return 0;
    }

    if (compare_cmd->parsed()) {
        const auto config = compare_cli.resolve(compare_cmd);
        const auto rows = pipeline::compare_associators(config, compare_scales, compare_runs);
        print_or_write(compare_out, pipeline::compare_csv(rows));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robopinion: opinion polarity scoring through landmark-map navigation"};
    try {
        return dispatch(app, argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 1;
    } catch (const robopinion::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
