#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "artipark/scenario.hpp"
#include "artipark/trajectory_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void print_warnings(const artipark::ScenarioConfig& cfg) {
    for (const std::string& w : cfg.warnings) {
        std::cerr << "warning: " << cfg.name << ": " << w << "\n";
    }
}

// Writes the CSV/SVG outputs a scenario asked for and prints a one-line
// summary; returns the paths written.
void emit_outputs(const artipark::ScenarioConfig& cfg, const artipark::Trajectory& traj,
                  const std::string& out_dir) {
    const auto& last = traj.samples.back();
    std::printf("%s: stop=%s t=%.2f s e=%.6g theta1=%.6g samples=%zu\n", cfg.name.c_str(),
                artipark::stop_reason_name(traj.stop_reason), last.t, last.polar.e,
                last.polar.theta1, traj.samples.size());
    if (!cfg.output.csv && !cfg.output.svg) return;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw artipark::IoError("cannot create output directory: " + out_dir);
    if (cfg.output.csv) {
        std::string path = (fs::path(out_dir) / (cfg.name + ".csv")).string();
        artipark::write_trajectory_csv(traj, path);
        std::printf("wrote %s\n", path.c_str());
    }
    if (cfg.output.svg) {
        std::string path = (fs::path(out_dir) / (cfg.name + ".svg")).string();
        artipark::render_trajectory_svg(traj, path);
        std::printf("wrote %s\n", path.c_str());
    }
}

bool abnormal(artipark::StopReason reason) {
    return reason == artipark::StopReason::Singularity ||
           reason == artipark::StopReason::FeedbackFailure;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override) {
    artipark::ScenarioConfig cfg = artipark::parse_scenario_file(config_path);
    print_warnings(cfg);
    artipark::Trajectory traj = artipark::run_scenario(cfg);
    emit_outputs(cfg, traj, out_override.empty() ? cfg.output.directory : out_override);
    if (abnormal(traj.stop_reason)) {
        std::cerr << "error: run ended with " << artipark::stop_reason_name(traj.stop_reason)
                  << "\n";
        return 2;
    }
    return 0;
}

int cmd_batch(const std::vector<std::string>& config_paths, unsigned parallel,
              const std::string& out_override) {
    std::vector<artipark::ScenarioConfig> configs;
    configs.reserve(config_paths.size());
    for (const std::string& path : config_paths) {
        configs.push_back(artipark::parse_scenario_file(path));
        print_warnings(configs.back());
    }

    std::vector<artipark::Trajectory> results(configs.size());
    unsigned workers = std::max(1u, std::min<unsigned>(parallel, configs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            results[i] = artipark::run_scenario(configs[i]);
        }
    } else {
        std::atomic<std::size_t> cursor{0};
        auto work = [&]() {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= configs.size()) return;
                results[i] = artipark::run_scenario(configs[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    bool any_abnormal = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::string dir = out_override.empty() ? configs[i].output.directory : out_override;
        emit_outputs(configs[i], results[i], dir);
        any_abnormal = any_abnormal || abnormal(results[i].stop_reason);
    }
    if (any_abnormal) {
        std::cerr << "error: at least one run ended abnormally\n";
        return 2;
    }
    return 0;
}

artipark::BeaconArray load_beacons(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw artipark::IoError("cannot open beacon file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw artipark::InvalidInputError(path + ": " + e.what());
    }
    if (!doc.is_object()) throw artipark::InvalidInputError(path + ": expected a JSON object");
    for (const auto& item : doc.items()) {
        if (item.key() != "A" && item.key() != "B" && item.key() != "C") {
            throw artipark::InvalidInputError(path + ": unknown key '" + item.key() + "'");
        }
    }
    auto point = [&](const char* key) -> artipark::Point2 {
        if (!doc.contains(key)) {
            throw artipark::InvalidInputError(path + ": missing beacon '" + key + "'");
        }
        const json& v = doc[key];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw artipark::InvalidInputError(path + ": beacon '" + std::string(key) +
                                              "' must be an [x, y] pair");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    };
    return artipark::BeaconArray(point("A"), point("B"), point("C"));
}

int cmd_triangulate(const std::string& beacons_path, double alpha, double beta, double gamma) {
    artipark::BeaconArray beacons = load_beacons(beacons_path);
    artipark::BearingMeasurement m{alpha, beta, gamma};
    artipark::TriangulationSolution sol = artipark::pose_from_bearings(m, beacons);
    artipark::PolarConfig pc = artipark::polar_config_from_pose(sol);
    json out = {{"x_r", sol.pose.x},   {"y_r", sol.pose.y},   {"theta_r", sol.pose.theta},
                {"e", pc.e},           {"theta1", pc.theta1}, {"theta2", pc.theta2}};
    std::printf("%s\n", out.dump().c_str());
    return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& out_path) {
    artipark::Trajectory traj = artipark::read_trajectory_csv(csv_path);
    artipark::render_trajectory_svg(traj, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov docking controller for center-articulated robots"};
    app.set_version_flag("--version", "artipark 0.1.0");
    app.require_subcommand(1);

    std::string sim_config, sim_out;
    CLI::App* simulate = app.add_subcommand("simulate", "run one scenario and write its outputs");
    simulate->add_option("--config", sim_config, "scenario JSON file")->required();
    simulate->add_option("--out", sim_out, "override the output directory");

    std::vector<std::string> batch_configs;
    unsigned batch_parallel = std::max(1u, std::thread::hardware_concurrency());
    std::string batch_out;
    CLI::App* batch = app.add_subcommand("batch", "run several scenarios, optionally in parallel");
    batch->add_option("--config", batch_configs, "scenario JSON files")
        ->required()
        ->take_all();
    batch->add_option("--parallel", batch_parallel, "worker thread count");
    batch->add_option("--out", batch_out, "override the output directory");

    std::string tri_beacons;
    double tri_alpha = 0.0, tri_beta = 0.0, tri_gamma = 0.0;
    CLI::App* triangulate =
        app.add_subcommand("triangulate", "recover the robot pose from beacon bearings");
    triangulate->add_option("--beacons", tri_beacons, "beacon layout JSON file")->required();
    triangulate->add_option("--alpha", tri_alpha, "angle subtended by beacons A and B [rad]")
        ->required();
    triangulate->add_option("--beta", tri_beta, "angle subtended by beacons C and B [rad]")
        ->required();
    triangulate->add_option("--gamma", tri_gamma, "heading-relative bearing of beacon B [rad]")
        ->required();

    std::string plot_csv, plot_out;
    CLI::App* plot = app.add_subcommand("plot", "render a trajectory CSV to SVG");
    plot->add_option("--csv", plot_csv, "trajectory CSV file")->required();
    plot->add_option("--out", plot_out, "output SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(simulate)) return cmd_simulate(sim_config, sim_out);
        if (app.got_subcommand(batch)) return cmd_batch(batch_configs, batch_parallel, batch_out);
        if (app.got_subcommand(triangulate)) {
            return cmd_triangulate(tri_beacons, tri_alpha, tri_beta, tri_gamma);
        }
        if (app.got_subcommand(plot)) return cmd_plot(plot_csv, plot_out);
    } catch (const artipark::InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const artipark::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
