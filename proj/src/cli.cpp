#include "ospring/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ospring/batch.hpp"
#include "ospring/errors.hpp"
#include "ospring/meanfield.hpp"
#include "ospring/report.hpp"
#include "ospring/units.hpp"

namespace ospring {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ModeParams load_params(const std::string& preset_name,
                       const std::string& config_path, std::ostream& err) {
    if (!preset_name.empty()) return preset(preset_name);
    const std::string text = read_file(config_path);
    if (is_physical_config(text)) {
        const PhysicalConfig cfg = load_physical_config(text);
        for (const auto& w : cfg.warnings()) err << "warning: " << w << "\n";
        return to_mode_params(cfg);
    }
    return load_config(text);
}

void write_output(const std::string& payload, const std::string& target,
                  std::ostream& out) {
    if (target.empty() || target == "stdout") {
        out << payload;
        return;
    }
    std::ofstream file(target, std::ios::binary);
    if (!file) throw ConfigError(target, "cannot open output file");
    file << payload;
}

struct CommonOpts {
    std::string preset_name;
    std::string config_path;
    std::string output = "stdout";

    void attach(CLI::App* cmd) {
        auto* p = cmd->add_option("--preset", preset_name,
                                  "Named parameter preset (see preset-list)");
        auto* c = cmd->add_option("--config", config_path,
                                  "Path to a key = value config file");
        p->excludes(c);
        cmd->add_option("--output", output, "Output file path or 'stdout'");
        cmd->callback([this, cmd]() {
            if (preset_name.empty() && config_path.empty())
                throw CLI::ValidationError(cmd->get_name(),
                                           "one of --preset/--config is required");
        });
    }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Optical-spring stability analysis for detuned "
                 "dual-recycled interferometers"};
    app.require_subcommand(1);

    // analyze
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "Eigenvalues, stability verdicts and detuning bound");
    CommonOpts analyze_opts;
    analyze_opts.attach(analyze_cmd);
    std::string format = "json";
    analyze_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    std::optional<double> delta_override_hz;
    analyze_cmd->add_option("--delta-hz", delta_override_hz,
                            "Override the arm detuning [Hz]");

    // susceptibility
    auto* susc_cmd = app.add_subcommand(
        "susceptibility", "Export |chi(Omega)| over a frequency grid as CSV");
    CommonOpts susc_opts;
    susc_opts.attach(susc_cmd);
    double omega_min_hz = 0.0, omega_max_hz = 0.0;
    std::size_t points = 0;
    std::optional<double> delta_offset_hz;
    susc_cmd->add_option("--omega-min-hz", omega_min_hz, "Grid start [Hz]")
        ->required();
    susc_cmd->add_option("--omega-max-hz", omega_max_hz, "Grid end [Hz]")
        ->required();
    susc_cmd->add_option("--points", points, "Number of grid points (>= 2)")
        ->required();
    susc_cmd->add_option(
        "--delta-offset-hz", delta_offset_hz,
        "Retune delta_w so the dressed detuning is -delta1 + offset [Hz]");

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Stability verdict along one swept parameter, as CSV");
    CommonOpts sweep_opts;
    sweep_opts.attach(sweep_cmd);
    std::string param_name;
    double from = 0.0, to = 0.0;
    std::size_t steps = 0;
    sweep_cmd->add_option("--param", param_name,
                          "delta_hz, gamma_w_hz, gamma_s_hz, delta_w_hz, "
                          "delta_s_hz or circulating_power_w")
        ->required();
    sweep_cmd->add_option("--from", from, "First value (user units)")->required();
    sweep_cmd->add_option("--to", to, "Last value (user units)")->required();
    sweep_cmd->add_option("--steps", steps, "Number of points (>= 1)")
        ->required();

    // preset-list
    auto* list_cmd =
        app.add_subcommand("preset-list", "List the built-in parameter tables");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ospring");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (list_cmd->parsed()) {
            std::ostringstream payload;
            for (const auto& name : preset_names()) {
                const ModeParams p = preset(name);
                payload << name << ": gamma_w=" << rad_to_hz(p.gamma_w)
                        << " Hz, gamma_s=" << rad_to_hz(p.gamma_s)
                        << " Hz, delta_w=" << rad_to_hz(p.delta_w)
                        << " Hz, delta_s=" << rad_to_hz(p.delta_s)
                        << " Hz, delta=" << rad_to_hz(p.delta_arm)
                        << " Hz, m=" << p.mass << " kg, L=" << p.arm_length
                        << " m, I=" << p.circ_power << " W";
                if (p.topology == Topology::Msi)
                    payload << ", rz^2=" << p.r_z * p.r_z;
                payload << "\n";
            }
            out << payload.str();
            return 0;
        }

        if (analyze_cmd->parsed()) {
            ModeParams params = load_params(analyze_opts.preset_name,
                                            analyze_opts.config_path, err);
            if (delta_override_hz)
                params.delta_arm = hz_to_rad(*delta_override_hz);
            const AnalysisReport report = analyze(params);
            write_output(format == "json" ? to_json(report) : to_csv(report),
                         analyze_opts.output, out);
            return report.stable ? 0 : 2;
        }

        if (susc_cmd->parsed()) {
            if (points < 2)
                throw ConfigError("points", "need at least 2 grid points");
            if (!(omega_min_hz > 0.0) || !(omega_max_hz > omega_min_hz))
                throw ConfigError("omega-min-hz",
                                  "need 0 < omega-min-hz < omega-max-hz");
            ModeParams params =
                load_params(susc_opts.preset_name, susc_opts.config_path, err);
            if (delta_offset_hz)
                params = tune_delta_w(params, hz_to_rad(*delta_offset_hz));
            const auto coeffs = derive_coefficients(params);
            const auto grid = linspace(hz_to_rad(omega_min_hz),
                                       hz_to_rad(omega_max_hz), points);
            const auto samples = susceptibility_grid(coeffs, grid);
            write_output(susceptibility_csv(samples), susc_opts.output, out);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            if (steps < 1) throw ConfigError("steps", "need at least 1 step");
            const ModeParams params =
                load_params(sweep_opts.preset_name, sweep_opts.config_path, err);
            const SweepParam param = parse_sweep_param(param_name);
            const auto values = linspace(from, to, steps);
            const auto rows = sweep_stability(params, param, values);
            write_output(sweep_csv(rows), sweep_opts.output, out);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    err << "error: no subcommand\n";
    return 1;
}

} // namespace ospring
