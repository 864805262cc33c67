// Command-line front end: single-point sum-rate queries, rate-region
// frontier export, P1 sweeps and the best-scheme SNR map.
//
// stdout carries data; stderr carries diagnostics. Exit codes:
//   0 success, 1 I/O error, 2 argument/validation error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twrc/twrc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct ChannelFlags {
    double p1 = 0.0;
    double p2 = 0.0;
    double n0 = 1.0;
    std::optional<double> p0, n1, n2;
    bool db = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--p1", p1, "User 1 uplink power")->required();
        cmd->add_option("--p2", p2, "User 2 uplink power")->required();
        cmd->add_option("--n0", n0, "Uplink noise power")->required();
        cmd->add_option("--p0", p0, "Relay power (enables the downlink)");
        cmd->add_option("--n1", n1, "Downlink noise power at user 1");
        cmd->add_option("--n2", n2, "Downlink noise power at user 2");
        cmd->add_flag("--db", db, "Interpret powers and noise in dB");
    }

    twrc::ChannelParams to_params() const {
        const int given = (p0 ? 1 : 0) + (n1 ? 1 : 0) + (n2 ? 1 : 0);
        if (given != 0 && given != 3)
            throw twrc::validation_error("downlink needs all of --p0, --n1, --n2");
        twrc::ChannelParams params{p1, p2, n0, std::nullopt};
        if (given == 3) params.downlink = twrc::Downlink{*p0, *n1, *n2};
        if (db) {
            params.p1 = db_to_linear(params.p1);
            params.p2 = db_to_linear(params.p2);
            params.n0 = db_to_linear(params.n0);
            if (params.downlink) {
                params.downlink->p0 = db_to_linear(params.downlink->p0);
                params.downlink->n1 = db_to_linear(params.downlink->n1);
                params.downlink->n2 = db_to_linear(params.downlink->n2);
            }
        }
        twrc::validate(params);
        return params;
    }
};

struct OutputFlags {
    std::string format = "csv";
    std::string out_path;  // empty: stdout

    void add_to(CLI::App* cmd, bool with_format = true) {
        if (with_format)
            cmd->add_option("--format", format, "Output format")
                ->check(CLI::IsMember({"csv", "json"}))
                ->capture_default_str();
        cmd->add_option("--out", out_path, "Output file (default: stdout)");
    }

    // Writes atomically enough for our purposes: buffer, then one write call.
    void deliver(const std::string& payload) const {
        if (out_path.empty()) {
            std::cout << payload;
            std::cout.flush();
            if (!std::cout) throw io_error("write to stdout failed");
            return;
        }
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw io_error("cannot open for writing: " + out_path);
        file << payload;
        file.flush();
        if (!file) throw io_error("write failed: " + out_path);
    }
};

twrc::ordered_json load_config_json(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open config: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw io_error("read failed: " + path);
    try {
        return twrc::ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw twrc::validation_error("malformed JSON in " + path + ": " + e.what());
    }
}

twrc::ordered_json result_to_json(const twrc::SchemeResult& result) {
    using twrc::ordered_json;
    ordered_json params = ordered_json::object();
    if (const auto* np = std::get_if<twrc::NestedParams>(&result.best_params)) {
        params["delta1"] = np->delta1;
        params["delta2"] = np->delta2;
    } else if (const auto* rp = std::get_if<twrc::RsSimParams>(&result.best_params)) {
        params["eta1"] = rp->eta1;
        params["eta2"] = rp->eta2;
    } else if (const auto* tp = std::get_if<twrc::TdmParams>(&result.best_params)) {
        params["alpha"] = tp->alpha;
    }
    return ordered_json{{"scheme", std::string(twrc::scheme_label(result.scheme))},
                        {"sum_rate", result.sum_rate},
                        {"params", std::move(params)},
                        {"argmax", ordered_json{{"r1", result.argmax.r1},
                                                {"r2", result.argmax.r2}}},
                        {"swapped", result.swapped}};
}

int run(int argc, char** argv) {
    CLI::App app{"Rate-region toolkit for the AWGN two-way relay channel"};
    app.require_subcommand(1);

    // --- rate ---
    auto* rate = app.add_subcommand("rate", "Optimized sum rate of one scheme (JSON)");
    ChannelFlags rate_channel;
    rate_channel.add_to(rate);
    std::string rate_scheme = "cdf";
    int rate_grid = twrc::SearchConfig{}.coarse_grid;
    double rate_tol = twrc::SearchConfig{}.tol;
    rate->add_option("--scheme", rate_scheme,
                     "Scheme: outer_bound, cdf, fdf_nested, fdf_rs_sim, fdf_rs_tdm")
        ->required();
    rate->add_option("--grid", rate_grid, "Coarse grid points per parameter axis")
        ->capture_default_str();
    rate->add_option("--tol", rate_tol, "Search convergence tolerance")->capture_default_str();
    OutputFlags rate_out;
    rate_out.add_to(rate, /*with_format=*/false);

    // --- region ---
    auto* region = app.add_subcommand("region", "Pareto frontier of one scheme (CSV)");
    ChannelFlags region_channel;
    region_channel.add_to(region);
    std::string region_scheme = "cdf";
    int region_points = 21;
    int region_grid = twrc::SearchConfig{}.coarse_grid;
    double region_tol = twrc::SearchConfig{}.tol;
    region->add_option("--scheme", region_scheme, "Scheme to trace")->required();
    region->add_option("--points", region_points, "Number of frontier points")
        ->capture_default_str();
    region->add_option("--grid", region_grid, "Coarse grid points per parameter axis")
        ->capture_default_str();
    region->add_option("--tol", region_tol, "Search convergence tolerance")
        ->capture_default_str();
    OutputFlags region_out;
    region_out.add_to(region, /*with_format=*/false);

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "Sum-rate sweep over P1 (CSV/JSON)");
    std::string sweep_config;
    sweep->add_option("--config", sweep_config, "Sweep spec JSON file");
    double sweep_n0 = 2.0, sweep_p2 = 2.0;
    double sweep_p1_start = 2.0, sweep_p1_stop = 20.0;
    int sweep_p1_count = 10;
    int sweep_grid = twrc::SearchConfig{}.coarse_grid;
    double sweep_tol = twrc::SearchConfig{}.tol;
    sweep->add_option("--n0", sweep_n0, "Uplink noise power")->capture_default_str();
    sweep->add_option("--p2", sweep_p2, "Fixed user 2 power")->capture_default_str();
    sweep->add_option("--p1-start", sweep_p1_start, "First P1 value")->capture_default_str();
    sweep->add_option("--p1-stop", sweep_p1_stop, "Last P1 value")->capture_default_str();
    sweep->add_option("--p1-count", sweep_p1_count, "Number of P1 grid points")
        ->capture_default_str();
    sweep->add_option("--grid", sweep_grid, "Coarse grid points per parameter axis")
        ->capture_default_str();
    sweep->add_option("--tol", sweep_tol, "Search convergence tolerance")
        ->capture_default_str();
    OutputFlags sweep_out;
    sweep_out.add_to(sweep);

    // --- map ---
    auto* map = app.add_subcommand("map", "Best-scheme map over (P1/N0, P2/N0) (CSV/JSON)");
    std::string map_config;
    map->add_option("--config", map_config, "Map spec JSON file (defaults: 0..5, 101x101)");
    OutputFlags map_out;
    map_out.add_to(map);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*rate) {
            const twrc::Scheme scheme = twrc::parse_scheme(rate_scheme);
            twrc::SearchConfig cfg;
            cfg.coarse_grid = rate_grid;
            cfg.tol = rate_tol;
            const auto result =
                twrc::optimize_sum_rate(scheme, rate_channel.to_params(), cfg);
            rate_out.deliver(result_to_json(result).dump(2) + "\n");
        } else if (*region) {
            const twrc::Scheme scheme = twrc::parse_scheme(region_scheme);
            twrc::SearchConfig cfg;
            cfg.coarse_grid = region_grid;
            cfg.tol = region_tol;
            const auto frontier = twrc::pareto_frontier(scheme, region_channel.to_params(),
                                                        cfg, region_points);
            std::ostringstream csv;
            csv << "r1,r2\n";
            for (const auto& pt : frontier)
                csv << twrc::detail::format_double(pt.r1) << ','
                    << twrc::detail::format_double(pt.r2) << '\n';
            region_out.deliver(csv.str());
        } else if (*sweep) {
            twrc::SweepSpec spec;
            if (!sweep_config.empty()) {
                spec = twrc::sweep_spec_from_json(load_config_json(sweep_config));
            } else {
                spec.n0 = sweep_n0;
                spec.p2 = sweep_p2;
                spec.p1_range = twrc::Range{sweep_p1_start, sweep_p1_stop, sweep_p1_count};
                spec.search.coarse_grid = sweep_grid;
                spec.search.tol = sweep_tol;
            }
            const auto table = twrc::sum_rate_sweep(spec);
            std::ostringstream payload;
            if (sweep_out.format == "json")
                twrc::emit_json(table, payload);
            else
                twrc::emit_csv(table, payload);
            sweep_out.deliver(payload.str());
        } else if (*map) {
            twrc::MapSpec spec;
            if (!map_config.empty()) spec = twrc::map_spec_from_json(load_config_json(map_config));
            const auto grid = twrc::winner_map(spec);
            std::ostringstream payload;
            if (map_out.format == "json")
                twrc::emit_json(grid, payload);
            else
                twrc::emit_csv(grid, payload);
            map_out.deliver(payload.str());
        }
    } catch (const io_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
