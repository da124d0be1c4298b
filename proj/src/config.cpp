#include "percmon/config.hpp"

#include <fstream>
#include <sstream>

namespace percmon {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": " + value);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("invalid boolean for " + key + ": " + value);
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, value));
        scenario.seed = seed;
        injection.seed = seed;
        return;
    }
    if (key == "scenario.kind") { scenario.kind = scenario_kind_from_string(value); return; }
    if (key == "scenario.n_pedestrians") { scenario.n_pedestrians = static_cast<int>(parse_int(key, value)); return; }
    if (key == "scenario.n_vehicles") { scenario.n_vehicles = static_cast<int>(parse_int(key, value)); return; }
    if (key == "scenario.duration") { scenario.duration = parse_double(key, value); return; }
    if (key == "scenario.frame_dt") { scenario.frame_dt = parse_double(key, value); return; }
    if (key == "scenario.area") { scenario.area = parse_double(key, value); return; }
    if (key == "lidar.angular_resolution") { lidar.angular_resolution = parse_double(key, value); return; }
    if (key == "lidar.max_range") { lidar.max_range = parse_double(key, value); return; }
    if (key == "lidar.range_noise_sigma") { lidar.range_noise_sigma = parse_double(key, value); return; }
    if (key == "grid.extent") { grid.extent = parse_double(key, value); return; }
    if (key == "grid.cell_size") { grid.cell_size = parse_double(key, value); return; }
    if (key == "grid.saturation_count") { grid.saturation_count = static_cast<int>(parse_int(key, value)); return; }
    if (key == "sensor.tau_tp") { sensor.tau_tp = parse_double(key, value); return; }
    if (key == "sensor.tau_fn") { sensor.tau_fn = parse_double(key, value); return; }
    if (key == "sensor.delta_safe") { sensor.delta_safe = parse_double(key, value); return; }
    if (key == "sensor.gamma_sens") { sensor.gamma_sens = parse_double(key, value); return; }
    if (key == "sensor.attr_radius") { sensor.attr_radius = parse_double(key, value); return; }
    if (key == "plaus.a_acc") { plausibility.a_acc = parse_double(key, value); return; }
    if (key == "plaus.a_br") { plausibility.a_br = parse_double(key, value); return; }
    if (key == "plaus.omega_max") { plausibility.omega_max = parse_double(key, value); return; }
    if (key == "plaus.dtheta_default") { plausibility.dtheta_default = parse_double(key, value); return; }
    if (key == "plaus.gamma_plaus") { plausibility.gamma_plaus = parse_double(key, value); return; }
    if (key == "inject.kind") { injection.kind = error_kind_from_string(value); return; }
    if (key == "inject.magnitude") { injection.magnitude = parse_double(key, value); return; }
    if (key == "inject.rate") { injection.rate = parse_double(key, value); return; }
    if (key == "inject.noise_sigma") { injection.noise_sigma = parse_double(key, value); return; }
    if (key == "inject.seed") { injection.seed = static_cast<std::uint64_t>(parse_int(key, value)); return; }
    if (key == "inject.inward") { injection.inward = parse_bool(key, value); return; }
    if (key == "eval.window") { window = static_cast<int>(parse_int(key, value)); return; }
    if (key == "sweep.experiment") { sweep_experiment = value; experiment_kind_from_string(value); return; }
    if (key == "sweep.magnitudes") { sweep_magnitudes = parse_double_list(key, value); return; }
    if (key == "sweep.rates") { sweep_rates = parse_double_list(key, value); return; }
    if (key == "sweep.sigmas") { sweep_sigmas = parse_double_list(key, value); return; }
    if (key == "sweep.transient_rate") { sweep_transient_rate = parse_double(key, value); return; }
    if (key == "bench.repetitions") { bench_repetitions = static_cast<int>(parse_int(key, value)); return; }
    if (key == "bench.points") { bench_points = static_cast<int>(parse_int(key, value)); return; }
    if (key == "bench.objects") { bench_objects = static_cast<int>(parse_int(key, value)); return; }
    if (key == "bench.frames") { bench_frames = static_cast<int>(parse_int(key, value)); return; }
    throw ConfigError("unknown config key: " + key);
}

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value");
        }
        apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::apply_overrides(const std::vector<std::string>& key_values) {
    for (const std::string& kv : key_values) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must be key=value: " + kv);
        }
        apply(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.experiment = experiment_kind_from_string(sweep_experiment);
    spec.scenario = scenario;
    spec.lidar = lidar;
    spec.monitor = monitor_params();
    spec.magnitudes = sweep_magnitudes;
    spec.rates = sweep_rates;
    spec.sigmas = sweep_sigmas;
    spec.transient_rate = sweep_transient_rate;
    spec.window = window;
    return spec;
}

}  // namespace percmon
