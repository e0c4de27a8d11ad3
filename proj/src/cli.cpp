#include "bell/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bell/experiment.hpp"
#include "bell/io.hpp"
#include "bell/lhv.hpp"
#include "bell/optimizer.hpp"
#include "bell/quantum.hpp"
#include "bell/relativity.hpp"
#include "bell/version.hpp"

namespace bell::cli {

namespace {

using io::json;

json envelope(std::string_view command, json inputs, std::optional<std::uint64_t> seed) {
    json j;
    j["command"] = std::string(command);
    j["version"] = std::string(kVersion);
    j["inputs"] = std::move(inputs);
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

lhv::LhvModel resolve_model(const std::string& name, double epsilon) {
    return lhv::builtin_model(name, epsilon);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell/CHSH experiment simulator and hidden-variable model tester"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "Options file in key = value form; flags win");
    app.require_subcommand(1);

    std::string output_path;
    app.add_option("--output,-o", output_path, "Write the result here instead of stdout")
        ->capture_default_str();

    // predict
    auto* predict = app.add_subcommand("predict", "Exact joint distribution at one angle pair");
    std::string predict_theta_l, predict_theta_r;
    predict->add_option("--theta-l", predict_theta_l, "Left angle (radians or pi fraction)")
        ->required();
    predict->add_option("--theta-r", predict_theta_r, "Right angle (radians or pi fraction)")
        ->required();
    predict->callback([&] {
        const Angle tl = io::parse_angle(predict_theta_l);
        const Angle tr = io::parse_angle(predict_theta_r);
        json inputs;
        inputs["theta_l"] = tl.radians();
        inputs["theta_r"] = tr.radians();
        json j = envelope("predict", inputs, std::nullopt);
        j["result"] = io::to_json(quantum::exact_distribution(tl, tr));
        write_output(dump(j), output_path, out);
    });

    // curve
    auto* curve = app.add_subcommand("curve", "CSV of the exact correlation E over [0, pi]");
    std::uint64_t curve_points = 181;
    curve->add_option("--points", curve_points, "Number of samples, endpoints included")
        ->capture_default_str();
    curve->callback([&] { write_output(io::curve_csv(curve_points), output_path, out); });

    // chsh
    auto* chsh_cmd = app.add_subcommand("chsh", "Exact CHSH statistic at four angles");
    std::string chsh_angles;
    chsh_cmd->add_option("--angles", chsh_angles, "a,a',b,b' (radians or pi fractions)")
        ->required();
    chsh_cmd->callback([&] {
        const chsh::ChshSettings settings = io::parse_settings(chsh_angles);
        std::array<chsh::Estimate, 4> correlations;
        for (chsh::SettingPair pair : chsh::kAllPairs) {
            const auto [tl, tr] = settings.angles(pair);
            correlations[static_cast<std::size_t>(pair)] =
                chsh::Estimate{quantum::correlation(tl, tr), std::nullopt};
        }
        json j = envelope("chsh", io::to_json(settings), std::nullopt);
        j["result"] = io::to_json(chsh::chsh_from_correlations(correlations));
        write_output(dump(j), output_path, out);
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Seeded trial-by-trial experiment run");
    std::string sim_source = "qm";
    std::string sim_angles;
    std::uint64_t sim_trials = 1000000;
    std::uint64_t sim_seed = 1;
    double sim_epsilon = 0.1;
    std::string sim_export;
    std::string sim_format = "json";
    simulate->add_option("--source", sim_source, "qm or a model name")->capture_default_str();
    simulate->add_option("--angles", sim_angles, "a,a',b,b'")->required();
    simulate->add_option("--trials", sim_trials, "Number of trials (>= 4)")
        ->capture_default_str();
    simulate->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
    simulate->add_option("--epsilon", sim_epsilon, "Flip rate for bell_sign_detector_noise")
        ->capture_default_str();
    simulate->add_option("--export-trials", sim_export, "Also write the trial stream CSV here");
    simulate->add_option("--format", sim_format, "Summary format: json or csv")
        ->capture_default_str();
    simulate->callback([&] {
        const chsh::ChshSettings settings = io::parse_settings(sim_angles);
        std::vector<sim::TrialRecord> records;
        std::vector<sim::TrialRecord>* records_ptr = sim_export.empty() ? nullptr : &records;
        sim::ExperimentSummary summary;
        if (sim_source == "qm") {
            summary = sim::run_experiment(settings, sim_trials, sim_seed, records_ptr);
        } else {
            const lhv::LhvModel model = resolve_model(sim_source, sim_epsilon);
            summary = sim::run_experiment(model, settings, sim_trials, sim_seed, records_ptr);
        }
        if (records_ptr) {
            std::ofstream file(sim_export, std::ios::binary);
            if (!file) throw std::invalid_argument("cannot open trial file: " + sim_export);
            io::write_trials_csv(file, records);
        }
        if (sim_format == "json") {
            json inputs;
            inputs["source"] = sim_source;
            inputs["angles"] = io::to_json(settings);
            inputs["trials"] = sim_trials;
            json j = envelope("simulate", inputs, sim_seed);
            j["result"] = io::to_json(summary);
            write_output(dump(j), output_path, out);
        } else {
            write_output(io::serialize_summary(summary, sim_format), output_path, out);
        }
    });

    // lhv enumerate / lhv optimize
    auto* lhv_cmd = app.add_subcommand("lhv", "Deterministic-strategy and model-family tools");
    lhv_cmd->require_subcommand(1);

    auto* enumerate = lhv_cmd->add_subcommand("enumerate", "All 16 deterministic strategies");
    std::string enum_angles;
    enumerate->add_option("--angles", enum_angles, "a,a',b,b'")->required();
    enumerate->callback([&] {
        const chsh::ChshSettings settings = io::parse_settings(enum_angles);
        const auto reports = optimizer::enumerate_deterministic(settings);
        write_output(io::strategies_csv(reports), output_path, out);
    });

    auto* optimize = lhv_cmd->add_subcommand("optimize", "Grid search over a local family");
    std::string opt_family;
    std::string opt_angles;
    std::uint64_t opt_iterations = 33;
    std::uint64_t opt_samples = 100000;
    std::uint64_t opt_seed = 1;
    optimize->add_option("--family", opt_family, "Registered model family")->required();
    optimize->add_option("--angles", opt_angles, "a,a',b,b'")->required();
    optimize->add_option("--iterations", opt_iterations, "Grid candidate budget")
        ->capture_default_str();
    optimize->add_option("--samples", opt_samples, "Lambda draws per setting pair and candidate")
        ->capture_default_str();
    optimize->add_option("--seed", opt_seed, "Random seed")->capture_default_str();
    optimize->callback([&] {
        const chsh::ChshSettings settings = io::parse_settings(opt_angles);
        const auto result = optimizer::optimize_parametric(opt_family, settings, opt_iterations,
                                                           opt_samples, opt_seed);
        json inputs;
        inputs["family"] = opt_family;
        inputs["angles"] = io::to_json(settings);
        inputs["iterations"] = opt_iterations;
        inputs["samples"] = opt_samples;
        json j = envelope("lhv optimize", inputs, opt_seed);
        j["result"] = io::to_json(result);
        write_output(dump(j), output_path, out);
    });

    // check
    auto* check = app.add_subcommand("check", "Locality checkers for hidden-variable models");
    check->require_subcommand(1);

    std::string check_model = "bell_sign";
    double check_epsilon = 0.1;
    std::uint64_t check_n = 100000;
    std::uint64_t check_seed = 1;

    const auto add_model_options = [&](CLI::App* sub) {
        sub->add_option("--model", check_model, "Built-in model name")->capture_default_str();
        sub->add_option("--epsilon", check_epsilon, "Flip rate for bell_sign_detector_noise")
            ->capture_default_str();
        sub->add_option("--n", check_n, "Sample count")->capture_default_str();
        sub->add_option("--seed", check_seed, "Random seed")->capture_default_str();
    };

    const auto emit_report = [&](std::string_view command, json inputs,
                                 const lhv::CheckReport& report) {
        json j = envelope(command, std::move(inputs), check_seed);
        j["result"] = io::to_json(report);
        write_output(dump(j), output_path, out);
    };

    auto* no_sig = check->add_subcommand("no-signaling",
                                         "Right marginal independence from the left setting");
    std::string ns_theta_r = "0";
    std::string ns_theta_l_list = "0,pi/8,pi/4";
    double ns_sigma_threshold = 4.0;
    add_model_options(no_sig);
    no_sig->add_option("--theta-r", ns_theta_r, "Right angle")->capture_default_str();
    no_sig->add_option("--theta-l-list", ns_theta_l_list, "Comma-separated left angles (>= 2)")
        ->capture_default_str();
    no_sig->add_option("--sigma-threshold", ns_sigma_threshold, "Pass threshold in pooled sigma")
        ->capture_default_str();
    no_sig->callback([&] {
        const lhv::LhvModel model = resolve_model(check_model, check_epsilon);
        const Angle theta_r = io::parse_angle(ns_theta_r);
        const std::vector<Angle> lefts = io::parse_angle_list(ns_theta_l_list);
        const auto report = lhv::check_no_signaling(model, theta_r, lefts, check_n, check_seed,
                                                    ns_sigma_threshold);
        json inputs;
        inputs["model"] = check_model;
        inputs["theta_r"] = theta_r.radians();
        json left_json = json::array();
        for (Angle a : lefts) left_json.push_back(a.radians());
        inputs["theta_l_list"] = left_json;
        inputs["n"] = check_n;
        inputs["sigma_threshold"] = ns_sigma_threshold;
        emit_report("check no-signaling", inputs, report);
    });

    auto* coincidence = check->add_subcommand(
        "coincidence", "Zero equal-outcome mass at equal angles (surface coincidence)");
    std::string co_theta = "0";
    add_model_options(coincidence);
    coincidence->add_option("--theta", co_theta, "Common angle")->capture_default_str();
    coincidence->callback([&] {
        const lhv::LhvModel model = resolve_model(check_model, check_epsilon);
        const Angle theta = io::parse_angle(co_theta);
        const auto report = lhv::check_surface_coincidence(model, theta, check_n, check_seed);
        json inputs;
        inputs["model"] = check_model;
        inputs["theta"] = theta.radians();
        inputs["n"] = check_n;
        emit_report("check coincidence", inputs, report);
    });

    auto* det_indep = check->add_subcommand(
        "detector-independence", "Outcome stability under detector-variable resampling");
    std::string di_theta_l = "0";
    std::string di_theta_r = "0";
    std::uint64_t di_resamples = 8;
    add_model_options(det_indep);
    det_indep->add_option("--theta-l", di_theta_l, "Left angle")->capture_default_str();
    det_indep->add_option("--theta-r", di_theta_r, "Right angle")->capture_default_str();
    det_indep->add_option("--resamples", di_resamples, "Detector redraws per photon draw (>= 2)")
        ->capture_default_str();
    det_indep->callback([&] {
        const lhv::LhvModel model = resolve_model(check_model, check_epsilon);
        const Angle tl = io::parse_angle(di_theta_l);
        const Angle tr = io::parse_angle(di_theta_r);
        const auto report =
            lhv::check_detector_independence(model, tl, tr, check_n, di_resamples, check_seed);
        json inputs;
        inputs["model"] = check_model;
        inputs["theta_l"] = tl.radians();
        inputs["theta_r"] = tr.radians();
        inputs["n"] = check_n;
        inputs["resamples"] = di_resamples;
        emit_report("check detector-independence", inputs, report);
    });

    auto* vel_indep = check->add_subcommand(
        "velocity-independence",
        "Outcome partitions at equal angles compared across two frame velocities");
    std::string vi_family = "bell_sign_boosted";
    std::string vi_theta = "0";
    double vi_beta_a = 0.0;
    double vi_beta_b = 0.6;
    std::string vi_params;
    vel_indep->add_option("--family", vi_family, "Family whose first parameter is beta")
        ->capture_default_str();
    vel_indep->add_option("--theta", vi_theta, "Common angle")->capture_default_str();
    vel_indep->add_option("--beta-a", vi_beta_a, "First frame velocity")->capture_default_str();
    vel_indep->add_option("--beta-b", vi_beta_b, "Second frame velocity")->capture_default_str();
    vel_indep->add_option("--params", vi_params,
                          "Comma-separated family parameters after beta (default: each lower "
                          "bound)");
    vel_indep->add_option("--n", check_n, "Sample count")->capture_default_str();
    vel_indep->add_option("--seed", check_seed, "Random seed")->capture_default_str();
    vel_indep->callback([&] {
        const lhv::ModelFamily& family = lhv::model_family(vi_family);
        if (family.params.empty() || family.params.front().name != "beta") {
            throw std::invalid_argument("family '" + vi_family +
                                        "' has no leading beta parameter");
        }
        std::vector<double> rest;
        if (!vi_params.empty()) {
            for (Angle a : io::parse_angle_list(vi_params)) rest.push_back(a.radians());
        } else {
            for (std::size_t i = 1; i < family.params.size(); ++i) {
                rest.push_back(family.params[i].lo);
            }
        }
        if (rest.size() + 1 != family.params.size()) {
            throw std::invalid_argument("expected " +
                                        std::to_string(family.params.size() - 1) +
                                        " parameters after beta");
        }
        const auto make = [&](double beta) {
            std::vector<double> params;
            params.push_back(beta);
            params.insert(params.end(), rest.begin(), rest.end());
            return family.make(params);
        };
        const Angle theta = io::parse_angle(vi_theta);
        const auto report = lhv::check_velocity_independence(make, theta, vi_beta_a, vi_beta_b,
                                                             check_n, check_seed);
        json inputs;
        inputs["family"] = vi_family;
        inputs["theta"] = theta.radians();
        inputs["beta_a"] = vi_beta_a;
        inputs["beta_b"] = vi_beta_b;
        json rest_json = json::array();
        for (double p : rest) rest_json.push_back(p);
        inputs["params"] = rest_json;
        inputs["n"] = check_n;
        emit_report("check velocity-independence", inputs, report);
    });

    // frames
    auto* frames = app.add_subcommand("frames", "Lorentz times and orderings of the detections");
    double frames_distance = 1.0;
    double frames_beta = 0.0;
    frames->add_option("--distance", frames_distance, "Source-detector distance, light-seconds")
        ->required();
    frames->add_option("--beta", frames_beta, "Frame velocity as a fraction of c")->required();
    frames->callback([&] {
        const rel::ExperimentGeometry geometry(frames_distance);
        const rel::FrameVelocity beta(frames_beta);
        const rel::EventTimes times = rel::event_times(geometry, beta);
        const auto events = rel::experiment_events(geometry);

        json inputs;
        inputs["distance"] = frames_distance;
        inputs["beta"] = frames_beta;
        json j = envelope("frames", inputs, std::nullopt);
        json result;
        result["gamma"] = rel::gamma(beta);
        result["times"] = io::to_json(times);
        result["time_gap"] = rel::time_gap(geometry, beta);
        json orders;
        for (rel::Frame frame : {rel::Frame::source, rel::Frame::a, rel::Frame::b}) {
            orders[std::string(rel::frame_label(frame))] =
                std::string(rel::order_label(rel::detection_order(geometry, beta, frame)));
        }
        result["orders"] = orders;
        json intervals;
        intervals["emission_to_right"] = rel::invariant_interval(events[0], events[1]);
        intervals["emission_to_left"] = rel::invariant_interval(events[0], events[2]);
        intervals["right_to_left"] = rel::invariant_interval(events[1], events[2]);
        result["intervals"] = intervals;
        j["result"] = result;
        write_output(dump(j), output_path, out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace bell::cli
