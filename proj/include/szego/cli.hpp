#pragma once

// Dataset emission behind the command-line front end: every figure-grade
// table as CSV or JSON, with a metadata sidecar, deterministic byte-for-byte
// output and atomic writes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/field.hpp"
#include "szego/laguerre.hpp"
#include "szego/lambert.hpp"
#include "szego/penner.hpp"

namespace szego {

inline constexpr const char* library_version = "0.1.0";
inline constexpr const char* schema_tag = "szego-lab/1";

namespace cli {

enum class Command { curve, cuts, moments, field, flow, zeros, penner, trajectory };
enum class Format { csv, json };

struct JobConfig {
    Command command = Command::curve;
    double t = 0.4;
    int n = 10;           // degree / streamline count
    int resolution = 256; // samples per sweep or grid side
    Format format = Format::csv;
    std::string out;
    std::map<std::string, double> tolerances;

    // per-command extras
    int kmin = -5, kmax = 5;      // moments
    int cut_kmax = 2;             // cuts
    double g = 0.1;               // penner coupling
    std::string kind = "shift_c"; // zeros sequence kind
    double param = 1.0;           // zeros sequence parameter
    std::vector<int> n_ladder;    // zeros / penner ladders
    double step = 1e-2;           // flow / trajectory
    int max_steps = 100000;
    double xmin = -1.5, xmax = 1.5, ymin = -1.5, ymax = 1.5; // field grid

    double tol(const std::string& key, double fallback) const {
        const auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
};

// exit codes: 0 success, 1 usage, 2 invalid parameters, 3 numeric failure,
// 4 I/O failure
enum ExitCode { exit_ok = 0, exit_usage = 1, exit_params = 2, exit_numeric = 3, exit_io = 4 };

namespace detail {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline std::string cell_csv(const Cell& c) {
    if (std::holds_alternative<double>(c))
        return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    return std::get<std::string>(c);
}

inline nlohmann::json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c))
        return std::get<double>(c);
    if (std::holds_alternative<long long>(c))
        return std::get<long long>(c);
    return std::get<std::string>(c);
}

inline std::string render(const Table& t, Format f) {
    if (f == Format::csv) {
        std::string s;
        for (size_t i = 0; i < t.columns.size(); ++i)
            s += (i ? "," : "") + t.columns[i];
        s += '\n';
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                s += (i ? "," : "") + cell_csv(row[i]);
            s += '\n';
        }
        return s;
    }
    nlohmann::json j;
    j["schema"] = schema_tag;
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row)
            r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

// temp file + rename so readers never observe a partial dataset
inline void atomic_write(const std::filesystem::path& path, const std::string& body) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw error("cannot open output file " + tmp.string());
        os << body;
        if (!os)
            throw error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path resolve_out(const JobConfig& cfg, const char* def_name) {
    std::filesystem::path p = cfg.out.empty() ? def_name : cfg.out;
    if (p.is_relative()) {
        if (const char* dir = std::getenv("SZEGO_OUT_DIR"))
            p = std::filesystem::path(dir) / p;
    }
    return p;
}

inline const char* command_name(Command c) {
    switch (c) {
    case Command::curve: return "curve";
    case Command::cuts: return "cuts";
    case Command::moments: return "moments";
    case Command::field: return "field";
    case Command::flow: return "flow";
    case Command::zeros: return "zeros";
    case Command::penner: return "penner";
    case Command::trajectory: return "trajectory";
    }
    return "?";
}

inline const char* region_name(Region r) {
    switch (r) {
    case Region::interior: return "interior";
    case Region::exterior: return "exterior";
    default: return "on_curve";
    }
}

} // namespace detail

// One command per invocation; writes the dataset, a ".meta.json" sidecar,
// and returns an exit status.  Failures print one machine-readable JSON
// object to stderr.
inline int run(const JobConfig& cfg) {
    using detail::Table;
    using nlohmann::json;
    try {
        if (cfg.resolution < 16)
            throw domain_error("resolution must be at least 16");
        if (cfg.t < 0.0)
            throw domain_error("t must be nonnegative");

        Table table;
        json extra; // command-specific summary for the sidecar

        switch (cfg.command) {
        case Command::curve: {
            table.columns = {"theta", "re", "im", "level_residual"};
            for (int j = 0; j < cfg.resolution; ++j) {
                const double theta = two_pi * j / cfg.resolution;
                const complex z = curve_point(cfg.t, theta);
                const double res = std::abs((z - std::log(z)).real() - (cfg.t + 1.0));
                table.add({theta, z.real(), z.imag(), res});
            }
            break;
        }
        case Command::cuts: {
            table.columns = {"kind", "k", "y", "re", "im"};
            const auto cs = analyticity_cuts(cfg.t, cfg.cut_kmax);
            table.add({std::string("x1"), 0LL, 0.0, cs.x1, 0.0});
            table.add({std::string("x2"), 0LL, 0.0, cs.x2, 0.0});
            for (const auto& arc : cs.off_axis) {
                for (int j = 0; j < cfg.resolution; ++j) {
                    const double y =
                        arc.y_start + (arc.y_end - arc.y_start) * j / (cfg.resolution - 1.0);
                    if (y == 0.0 || std::abs(std::sin(y)) < 1e-300)
                        continue;
                    table.add({std::string("cut_arc"), (long long)arc.k, y,
                               y / std::tan(y), y});
                }
            }
            for (const auto& qp : quadratrix_samples(cfg.cut_kmax, cfg.resolution)) {
                const std::string kind = qp.is_real_ray ? "real_ray" : "quadratrix";
                for (const complex& p : qp.points)
                    table.add({kind, (long long)qp.k, p.imag(), p.real(), p.imag()});
            }
            extra["x1"] = cs.x1;
            extra["x2"] = cs.x2;
            break;
        }
        case Command::moments: {
            if (cfg.kmin > cfg.kmax)
                throw domain_error("kmin must not exceed kmax");
            table.columns = {"k", "series", "contour_re", "contour_im", "abs_delta"};
            const double tol = cfg.tol("series_tol", 1e-12);
            const int npts = std::max(256, cfg.resolution);
            for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
                const double s = harmonic_moment_series(k, cfg.t, tol);
                const complex c = harmonic_moment_contour(k, cfg.t, npts);
                table.add({(long long)k, s, c.real(), c.imag(), std::abs(c - s)});
            }
            break;
        }
        case Command::field: {
            table.columns = {"re", "im", "U", "Ex", "Ey", "region"};
            const double band = cfg.tol("band", 1e-12);
            for (int iy = 0; iy < cfg.resolution; ++iy) {
                for (int ix = 0; ix < cfg.resolution; ++ix) {
                    const complex z(cfg.xmin + (cfg.xmax - cfg.xmin) * ix / (cfg.resolution - 1.0),
                                    cfg.ymin + (cfg.ymax - cfg.ymin) * iy / (cfg.resolution - 1.0));
                    if (z == 0.0)
                        continue;
                    const auto fs = field_sample(z, cfg.t, band);
                    table.add({z.real(), z.imag(), fs.U, fs.E.real(), fs.E.imag(),
                               std::string(detail::region_name(fs.region))});
                }
            }
            break;
        }
        case Command::flow: {
            table.columns = {"stream_id", "idx", "re", "im"};
            auto& streams = extra["streams"] = json::array();
            const int half = std::max(1, cfg.n / 2);
            std::vector<double> levels;
            for (int j = 1; j <= half; ++j)
                levels.push_back(cfg.t * j / (half + 1.0)); // exterior levels
            for (int j = 1; j <= cfg.n - half; ++j)
                levels.push_back(cfg.t + 0.35 * j);         // interior levels
            long long id = 0;
            for (double s : levels) {
                const complex z0 = curve_point(s, 0.0);
                const auto path = streamline(z0, cfg.t, cfg.step, cfg.max_steps);
                long long idx = 0;
                for (const complex& p : path.points)
                    table.add({id, idx++, p.real(), p.imag()});
                json meta;
                meta["level"] = s;
                meta["closed"] = path.closed;
                meta["invariant_drift"] = path.invariant_drift;
                meta["arclength"] = path.arclength;
                meta["reason"] = path.reason;
                streams.push_back(std::move(meta));
                ++id;
            }
            break;
        }
        case Command::zeros: {
            table.columns = {"n", "alpha", "re", "im", "dist_to_curve"};
            SequenceSpec spec{cfg.kind == "rate_t" ? SequenceSpec::Kind::rate_t
                                                   : SequenceSpec::Kind::shift_c,
                              cfg.param};
            if (cfg.kind != "rate_t" && cfg.kind != "shift_c")
                throw domain_error("zeros kind must be shift_c or rate_t");
            const std::vector<int> ladder =
                cfg.n_ladder.empty() ? std::vector<int>{cfg.n} : cfg.n_ladder;
            auto& summary = extra["ladder"] = json::array();
            for (int n : ladder) {
                const auto zs = scaled_zeros(spec, n);
                const auto d = zero_curve_distance(zs, cfg.t);
                std::vector<complex> pts(2048);
                for (int j = 0; j < 2048; ++j)
                    pts[j] = curve_point(cfg.t, two_pi * j / 2048.0);
                for (const complex& z : zs.zeros) {
                    double best = std::numeric_limits<double>::infinity();
                    for (const complex& p : pts)
                        best = std::min(best, std::abs(z - p));
                    table.add({(long long)n, zs.alpha, z.real(), z.imag(), best});
                }
                json row;
                row["n"] = n;
                row["max_dist"] = d.max_dist;
                row["mean_dist"] = d.mean_dist;
                summary.push_back(std::move(row));
            }
            break;
        }
        case Command::penner: {
            table.columns = {"n", "g", "re", "im", "residual"};
            const std::vector<int> ladder =
                cfg.n_ladder.empty() ? std::vector<int>{cfg.n} : cfg.n_ladder;
            const double T = cfg.n * cfg.g;
            auto& summary = extra["ladder"] = json::array();
            for (int n : ladder) {
                const double g = ladder.size() == 1 ? cfg.g : T / n; // fixed 't Hooft T
                const auto sc = saddle_from_laguerre(n, g);
                complex recip = 0.0;
                for (const complex& z : sc.points) {
                    table.add({(long long)n, g, z.real(), z.imag(), sc.residual});
                    recip += 1.0 / z;
                }
                json row;
                row["n"] = n;
                row["g"] = g;
                row["residual"] = sc.residual;
                row["recip_sum_re"] = recip.real();
                row["recip_sum_im"] = recip.imag();
                summary.push_back(std::move(row));
            }
            break;
        }
        case Command::trajectory: {
            table.columns = {"idx", "re", "im", "level_residual"};
            const complex z0 = curve_point(cfg.t, 0.0);
            const auto path = trajectory(cfg.t, z0, cfg.step, cfg.max_steps);
            long long idx = 0;
            for (const complex& z : path.points) {
                const double res = std::abs((z - std::log(z)).real() - (cfg.t + 1.0));
                table.add({idx++, z.real(), z.imag(), res});
            }
            double winding = 0.0;
            for (size_t i = 1; i < path.points.size(); ++i)
                winding += std::arg(path.points[i] / path.points[i - 1]);
            extra["closed"] = path.closed;
            extra["closure_gap"] = path.closure_gap;
            extra["level_drift"] = path.invariant_drift;
            extra["winding"] = winding / two_pi;
            break;
        }
        }

        const char* def_name = detail::command_name(cfg.command);
        const auto out = detail::resolve_out(
            cfg, (std::string(def_name) + (cfg.format == Format::csv ? ".csv" : ".json")).c_str());
        try {
            detail::atomic_write(out, detail::render(table, cfg.format));

            json meta;
            meta["schema"] = schema_tag;
            meta["version"] = library_version;
            meta["command"] = def_name;
            json params;
            params["t"] = cfg.t;
            params["n"] = cfg.n;
            params["resolution"] = cfg.resolution;
            params["g"] = cfg.g;
            params["kind"] = cfg.kind;
            params["param"] = cfg.param;
            params["step"] = cfg.step;
            params["kmin"] = cfg.kmin;
            params["kmax"] = cfg.kmax;
            params["cut_kmax"] = cfg.cut_kmax;
            meta["parameters"] = std::move(params);
            meta["tolerances"] = cfg.tolerances;
            meta["columns"] = table.columns;
            if (!extra.is_null())
                meta["summary"] = std::move(extra);
            detail::atomic_write(out.string() + ".meta.json", meta.dump(2) + "\n");
        } catch (const error& e) {
            json err;
            err["error"] = e.what();
            err["code"] = exit_io;
            std::fprintf(stderr, "%s\n", err.dump().c_str());
            return exit_io;
        }
        return exit_ok;
    } catch (const domain_error& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["code"] = exit_params;
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return exit_params;
    } catch (const error& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["code"] = exit_numeric;
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return exit_numeric;
    }
}

} // namespace cli
} // namespace szego
