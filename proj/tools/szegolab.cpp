// Command-line front end: emits the datasets behind the curve, cut, moment,
// field, flow, zero, saddle and trajectory computations as CSV/JSON.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "szego/szego.hpp"

namespace {

void add_common(CLI::App* sub, szego::cli::JobConfig& cfg, std::string& format) {
    sub->add_option("--t", cfg.t, "deformation parameter t >= 0");
    sub->add_option("--resolution", cfg.resolution, "samples per sweep or grid side");
    sub->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out,
                    "output path (sidecar written next to it; relative paths "
                    "resolve under $SZEGO_OUT_DIR)");
    sub->add_option("--tol", cfg.tolerances,
                    "tolerance overrides as key=value (e.g. series_tol=1e-10)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"szegolab: deformed Szego curves, their Schwarz function, "
                 "electrostatics, Laguerre zero clouds and Penner saddle points"};
    app.set_version_flag("--version", szego::library_version);
    app.require_subcommand(1);

    szego::cli::JobConfig cfg;
    std::string format = "csv";
    std::string ladder_spec;

    using szego::cli::Command;
    struct SubDef { Command cmd; const char* name; const char* help; };
    const std::vector<SubDef> defs = {
        {Command::curve, "curve", "theta-sampled curve gamma_t"},
        {Command::cuts, "cuts", "branch cuts of the Schwarz function and quadratrix arcs"},
        {Command::moments, "moments", "harmonic moments by series and contour"},
        {Command::field, "field", "potential and field on a grid"},
        {Command::flow, "flow", "streamline bundle of the velocity field"},
        {Command::zeros, "zeros", "scaled Laguerre zero clouds with curve distances"},
        {Command::penner, "penner", "Penner saddle configurations"},
        {Command::trajectory, "trajectory", "traced oval of the quadratic differential"},
    };

    for (const auto& d : defs) {
        CLI::App* sub = app.add_subcommand(d.name, d.help);
        add_common(sub, cfg, format);
        sub->callback([&cfg, cmd = d.cmd] { cfg.command = cmd; });
        switch (d.cmd) {
        case Command::cuts:
            sub->add_option("--kmax", cfg.cut_kmax, "number of off-axis cut pairs");
            break;
        case Command::moments:
            sub->add_option("--kmin", cfg.kmin, "lowest moment index");
            sub->add_option("--kmax", cfg.kmax, "highest moment index");
            break;
        case Command::field:
            sub->add_option("--xmin", cfg.xmin);
            sub->add_option("--xmax", cfg.xmax);
            sub->add_option("--ymin", cfg.ymin);
            sub->add_option("--ymax", cfg.ymax);
            break;
        case Command::flow:
            sub->add_option("--n", cfg.n, "number of streamlines");
            sub->add_option("--step", cfg.step, "integrator step cap");
            sub->add_option("--max-steps", cfg.max_steps);
            break;
        case Command::zeros:
            sub->add_option("--kind", cfg.kind, "sequence kind: shift_c or rate_t");
            sub->add_option("--param", cfg.param, "sequence parameter (c or t)");
            sub->add_option("--n", cfg.n, "degree when no ladder is given");
            sub->add_option("--n-ladder", ladder_spec, "comma-separated degree ladder");
            break;
        case Command::penner:
            sub->add_option("--n", cfg.n, "number of saddle points");
            sub->add_option("--g", cfg.g, "coupling constant");
            sub->add_option("--n-ladder", ladder_spec,
                            "comma-separated n ladder at fixed T = n*g");
            break;
        case Command::trajectory:
            sub->add_option("--step", cfg.step, "integrator step cap");
            sub->add_option("--max-steps", cfg.max_steps);
            break;
        default:
            break;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : szego::cli::exit_usage;
    }

    cfg.format = format == "json" ? szego::cli::Format::json : szego::cli::Format::csv;
    if (!ladder_spec.empty()) {
        size_t pos = 0;
        while (pos < ladder_spec.size()) {
            const size_t comma = ladder_spec.find(',', pos);
            const std::string tok = ladder_spec.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            cfg.n_ladder.push_back(std::stoi(tok));
            pos = comma == std::string::npos ? ladder_spec.size() : comma + 1;
        }
    }

    return szego::cli::run(cfg);
}
