#include "artipark/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace artipark {

namespace {

using nlohmann::json;

struct Context {
    std::string label;

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        throw InvalidInputError(label + ": " + path + ": " + msg);
    }
};

void check_keys(const json& obj, const Context& ctx, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) ctx.fail(path, "unknown key '" + item.key() + "'");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const Context& ctx, const std::string& path) {
    if (!v.is_number()) ctx.fail(path, "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const Context& ctx,
                 const std::string& path) {
    const json* v = find(obj, key);
    return v ? as_number(*v, ctx, path + "/" + key) : fallback;
}

bool bool_or(const json& obj, const char* key, bool fallback, const Context& ctx,
             const std::string& path) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) ctx.fail(path + "/" + key, "expected a boolean");
    return v->get<bool>();
}

std::string string_or(const json& obj, const char* key, const std::string& fallback,
                      const Context& ctx, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) ctx.fail(path + "/" + key, "expected a string");
    return v->get<std::string>();
}

double required_number(const json& obj, const char* key, const Context& ctx,
                       const std::string& path) {
    const json* v = find(obj, key);
    if (!v) ctx.fail(path, std::string("missing required key '") + key + "'");
    return as_number(*v, ctx, path + "/" + key);
}

Point2 as_point(const json& v, const Context& ctx, const std::string& path) {
    if (!v.is_array() || v.size() != 2) ctx.fail(path, "expected an [x, y] pair");
    return {as_number(v[0], ctx, path + "[0]"), as_number(v[1], ctx, path + "[1]")};
}

template <typename Build>
auto rebrand(const Context& ctx, const std::string& path, Build build) -> decltype(build()) {
    try {
        return build();
    } catch (const InvalidInputError& e) {
        ctx.fail(path, e.what());
    }
}

ScenarioConfig parse_document(const json& doc, const Context& ctx, const std::string& name) {
    if (!doc.is_object()) ctx.fail("/", "scenario document must be a JSON object");
    check_keys(doc, ctx, "/",
               {"geometry", "gains", "initial", "controller", "simulation", "feedback", "output"});

    ScenarioConfig cfg;
    cfg.name = name;

    if (const json* g = find(doc, "geometry")) {
        if (!g->is_object()) ctx.fail("/geometry", "expected an object");
        check_keys(*g, ctx, "/geometry", {"l1", "l2"});
        double l1 = number_or(*g, "l1", 0.1, ctx, "/geometry");
        double l2 = number_or(*g, "l2", 0.1, ctx, "/geometry");
        cfg.geometry = rebrand(ctx, "/geometry", [&] { return RobotGeometry(l1, l2); });
    }

    if (const json* g = find(doc, "gains")) {
        if (!g->is_object()) ctx.fail("/gains", "expected an object");
        check_keys(*g, ctx, "/gains", {"lambda1", "lambda2", "lambda3", "lambda4"});
        Gains defaults;
        double v1 = number_or(*g, "lambda1", defaults.lambda1, ctx, "/gains");
        double v2 = number_or(*g, "lambda2", defaults.lambda2, ctx, "/gains");
        double v3 = number_or(*g, "lambda3", defaults.lambda3, ctx, "/gains");
        double v4 = number_or(*g, "lambda4", defaults.lambda4, ctx, "/gains");
        cfg.controller.gains = rebrand(ctx, "/gains", [&] { return Gains(v1, v2, v3, v4); });
    }

    const json* init = find(doc, "initial");
    if (!init) ctx.fail("/", "missing required key 'initial'");
    if (!init->is_object()) ctx.fail("/initial", "expected an object");
    check_keys(*init, ctx, "/initial", {"e", "theta1", "theta2", "phi"});
    {
        double e = required_number(*init, "e", ctx, "/initial");
        double t1 = required_number(*init, "theta1", ctx, "/initial");
        double t2 = required_number(*init, "theta2", ctx, "/initial");
        double phi = required_number(*init, "phi", ctx, "/initial");
        cfg.initial = rebrand(ctx, "/initial", [&] { return PolarState(e, t1, t2, phi); });
    }

    if (const json* c = find(doc, "controller")) {
        if (!c->is_object()) ctx.fail("/controller", "expected an object");
        check_keys(*c, ctx, "/controller",
                   {"deadlock_eps", "kick_omega", "kick_phi_target", "kick_enabled", "v_max",
                    "omega_max"});
        ControllerConfig& cc = cfg.controller;
        cc.deadlock_eps = number_or(*c, "deadlock_eps", cc.deadlock_eps, ctx, "/controller");
        cc.kick_omega = number_or(*c, "kick_omega", cc.kick_omega, ctx, "/controller");
        cc.kick_phi_target =
            number_or(*c, "kick_phi_target", cc.kick_phi_target, ctx, "/controller");
        cc.kick_enabled = bool_or(*c, "kick_enabled", cc.kick_enabled, ctx, "/controller");
        if (find(*c, "v_max")) cc.v_max = number_or(*c, "v_max", 0.0, ctx, "/controller");
        if (find(*c, "omega_max")) {
            cc.omega_max = number_or(*c, "omega_max", 0.0, ctx, "/controller");
        }
    }

    if (const json* s = find(doc, "simulation")) {
        if (!s->is_object()) ctx.fail("/simulation", "expected an object");
        check_keys(*s, ctx, "/simulation",
                   {"dt", "t_max", "e_tol", "angle_tol", "integrator", "frame"});
        SimulationConfig& sc = cfg.simulation;
        sc.dt = number_or(*s, "dt", sc.dt, ctx, "/simulation");
        sc.t_max = number_or(*s, "t_max", sc.t_max, ctx, "/simulation");
        sc.e_tol = number_or(*s, "e_tol", sc.e_tol, ctx, "/simulation");
        sc.angle_tol = number_or(*s, "angle_tol", sc.angle_tol, ctx, "/simulation");
        std::string integrator = string_or(*s, "integrator", "rk4", ctx, "/simulation");
        if (integrator == "rk4") {
            sc.integrator = Integrator::Rk4;
        } else if (integrator == "euler") {
            sc.integrator = Integrator::Euler;
        } else {
            ctx.fail("/simulation/integrator", "expected \"rk4\" or \"euler\"");
        }
        std::string frame = string_or(*s, "frame", "cartesian", ctx, "/simulation");
        if (frame == "cartesian") {
            sc.frame = Frame::Cartesian;
        } else if (frame == "polar") {
            sc.frame = Frame::Polar;
        } else {
            ctx.fail("/simulation/frame", "expected \"cartesian\" or \"polar\"");
        }
    }

    if (const json* f = find(doc, "feedback")) {
        if (!f->is_object()) ctx.fail("/feedback", "expected an object");
        check_keys(*f, ctx, "/feedback", {"mode", "beacons", "sigma", "seed"});
        FeedbackConfig& fc = cfg.simulation.feedback;
        std::string mode = string_or(*f, "mode", "ground_truth", ctx, "/feedback");
        if (mode == "ground_truth") {
            fc.mode = FeedbackMode::GroundTruth;
        } else if (mode == "beacon") {
            fc.mode = FeedbackMode::Beacon;
        } else {
            ctx.fail("/feedback/mode", "expected \"ground_truth\" or \"beacon\"");
        }
        fc.sigma = number_or(*f, "sigma", fc.sigma, ctx, "/feedback");
        if (const json* seed = find(*f, "seed")) {
            // nlohmann stores any non-negative integer as unsigned
            if (!seed->is_number_unsigned()) {
                ctx.fail("/feedback/seed", "expected a non-negative integer");
            }
            fc.seed = seed->get<std::uint64_t>();
        }
        if (const json* b = find(*f, "beacons")) {
            if (!b->is_object()) ctx.fail("/feedback/beacons", "expected an object");
            check_keys(*b, ctx, "/feedback/beacons", {"A", "B", "C"});
            const json* pa = find(*b, "A");
            const json* pb = find(*b, "B");
            const json* pc = find(*b, "C");
            if (!pa || !pb || !pc) ctx.fail("/feedback/beacons", "beacons A, B, C are all required");
            Point2 a = as_point(*pa, ctx, "/feedback/beacons/A");
            Point2 bb = as_point(*pb, ctx, "/feedback/beacons/B");
            Point2 c = as_point(*pc, ctx, "/feedback/beacons/C");
            fc.beacons = rebrand(ctx, "/feedback/beacons", [&] { return BeaconArray(a, bb, c); });
        } else if (fc.mode == FeedbackMode::Beacon) {
            fc.beacons = default_beacon_array();
        }
    }

    if (const json* o = find(doc, "output")) {
        if (!o->is_object()) ctx.fail("/output", "expected an object");
        check_keys(*o, ctx, "/output", {"directory", "csv", "svg"});
        cfg.output.directory = string_or(*o, "directory", cfg.output.directory, ctx, "/output");
        cfg.output.csv = bool_or(*o, "csv", cfg.output.csv, ctx, "/output");
        cfg.output.svg = bool_or(*o, "svg", cfg.output.svg, ctx, "/output");
    }

    rebrand(ctx, "/", [&] {
        cfg.controller.validate();
        cfg.simulation.validate();
        return 0;
    });

    if (cfg.geometry.articulation_singularity_reachable()) {
        std::ostringstream os;
        os << "l2 <= l1 (" << cfg.geometry.l2 << " <= " << cfg.geometry.l1
           << "): the fully-folded articulation singularity is reachable";
        cfg.warnings.push_back(os.str());
    }
    if (cfg.controller.gains.lambda4 == 0.0) {
        cfg.warnings.push_back("lambda4 = 0: the articulation angle is uncontrolled");
    }
    return cfg;
}

std::string stem_of(const std::string& label) {
    std::string stem = std::filesystem::path(label).stem().string();
    return stem.empty() ? std::string("scenario") : stem;
}

}  // namespace

BeaconArray default_beacon_array() {
    return BeaconArray({0.0, 2.0}, {0.0, 1.0}, {0.0, 0.0});
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed to read scenario file: " + path);
    return parse_scenario_string(buffer.str(), path);
}

ScenarioConfig parse_scenario_string(const std::string& text, const std::string& label) {
    Context ctx{label};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInputError(label + ": " + e.what());
    }
    return parse_document(doc, ctx, stem_of(label));
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    json doc;
    doc["geometry"] = {{"l1", cfg.geometry.l1}, {"l2", cfg.geometry.l2}};
    const Gains& g = cfg.controller.gains;
    doc["gains"] = {{"lambda1", g.lambda1},
                    {"lambda2", g.lambda2},
                    {"lambda3", g.lambda3},
                    {"lambda4", g.lambda4}};
    doc["initial"] = {{"e", cfg.initial.e},
                      {"theta1", cfg.initial.theta1},
                      {"theta2", cfg.initial.theta2},
                      {"phi", cfg.initial.phi}};
    json controller = {{"deadlock_eps", cfg.controller.deadlock_eps},
                       {"kick_omega", cfg.controller.kick_omega},
                       {"kick_phi_target", cfg.controller.kick_phi_target},
                       {"kick_enabled", cfg.controller.kick_enabled}};
    if (cfg.controller.v_max) controller["v_max"] = *cfg.controller.v_max;
    if (cfg.controller.omega_max) controller["omega_max"] = *cfg.controller.omega_max;
    doc["controller"] = controller;
    const SimulationConfig& s = cfg.simulation;
    doc["simulation"] = {
        {"dt", s.dt},
        {"t_max", s.t_max},
        {"e_tol", s.e_tol},
        {"angle_tol", s.angle_tol},
        {"integrator", s.integrator == Integrator::Rk4 ? "rk4" : "euler"},
        {"frame", s.frame == Frame::Cartesian ? "cartesian" : "polar"}};
    json feedback = {
        {"mode", s.feedback.mode == FeedbackMode::GroundTruth ? "ground_truth" : "beacon"},
        {"sigma", s.feedback.sigma},
        {"seed", s.feedback.seed}};
    if (s.feedback.beacons) {
        const BeaconArray& b = *s.feedback.beacons;
        feedback["beacons"] = {{"A", {b.A().x, b.A().y}},
                               {"B", {b.B().x, b.B().y}},
                               {"C", {b.C().x, b.C().y}}};
    }
    doc["feedback"] = feedback;
    doc["output"] = {
        {"directory", cfg.output.directory}, {"csv", cfg.output.csv}, {"svg", cfg.output.svg}};
    return doc.dump(2) + "\n";
}

Trajectory run_scenario(const ScenarioConfig& scenario) {
    return run_scenario(scenario.initial, scenario.simulation, scenario.controller,
                        scenario.geometry);
}

}  // namespace artipark
