#ifndef TWRC_EXPERIMENTS_HPP
#define TWRC_EXPERIMENTS_HPP

#include <atomic>
#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "twrc/channel.hpp"
#include "twrc/optimizer.hpp"
#include "twrc/oracle.hpp"
#include "twrc/schemes.hpp"

namespace twrc {

using ordered_json = nlohmann::ordered_json;

struct Range {
    double start = 0.0;
    double stop = 0.0;
    int count = 2;

    std::vector<double> grid() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        if (count == 1) {
            out.push_back(start);
            return out;
        }
        for (int i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * (static_cast<double>(i) / (count - 1)));
        return out;
    }

    friend bool operator==(const Range&, const Range&) = default;
};

inline void validate_range(const Range& r, const char* name) {
    if (!std::isfinite(r.start) || !std::isfinite(r.stop))
        throw validation_error(std::string(name) + " bounds must be finite");
    if (r.start < 0.0) throw validation_error(std::string(name) + ".start must be >= 0");
    if (r.start > r.stop)
        throw validation_error(std::string(name) + ".start must be <= stop");
    if (r.count < 1) throw validation_error(std::string(name) + ".count must be >= 1");
    if (r.count < 2 && r.start < r.stop)
        throw validation_error(std::string(name) + ".count must be >= 2 for a nondegenerate range");
}

/// Sum-rate sweep over P1 at fixed P2 and N0. Downlink is inactive unless
/// the optional record is supplied.
struct SweepSpec {
    double n0 = 2.0;
    double p2 = 2.0;
    Range p1_range{2.0, 20.0, 10};
    std::optional<Downlink> downlink{};
    SearchConfig search{};

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

inline void validate(const SweepSpec& spec) {
    validate(ChannelParams{spec.p1_range.start, spec.p2, spec.n0, spec.downlink});
    validate_range(spec.p1_range, "p1_range");
    validate(spec.search);
}

/// Best-scheme map over the (P1/N0, P2/N0) plane, uplink only.
/// Defaults reproduce the 0..5 x 0..5 view at 101 points per axis.
struct MapSpec {
    Range snr1_range{0.0, 5.0, 101};
    Range snr2_range{0.0, 5.0, 101};
    double n0 = 2.0;
    double tie_tol = 1e-4;

    friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

inline void validate(const MapSpec& spec) {
    validate_range(spec.snr1_range, "snr1_range");
    validate_range(spec.snr2_range, "snr2_range");
    if (!(spec.n0 > 0.0) || !std::isfinite(spec.n0))
        throw validation_error("n0 must be > 0");
    if (!(spec.tie_tol > 0.0)) throw validation_error("tie_tol must be > 0");
}

// Map cells carry search error on the order of the refined grid pitch, so
// they use a lighter deterministic config than single-point queries.
inline constexpr SearchConfig kMapSearchConfig{41, 3, 0.1, 1e-9};

struct SweepRow {
    double p1 = 0.0;
    double p2 = 0.0;
    double n0 = 0.0;
    double ub = 0.0;
    double cdf = 0.0;
    double fdf_nested = 0.0;
    double fdf_rs_sim = 0.0;
    double fdf_rs_tdm = 0.0;
    Scheme best_scheme = Scheme::CDF;
    double best_sum = 0.0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
    SweepSpec spec{};
    std::vector<SweepRow> rows{};

    friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

struct WinnerMap {
    MapSpec spec{};
    std::vector<WinnerCell> cells{};  // row-major: snr2 outer, snr1 inner

    friend bool operator==(const WinnerMap& a, const WinnerMap& b) {
        if (a.spec != b.spec || a.cells.size() != b.cells.size()) return false;
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            const WinnerCell& x = a.cells[i];
            const WinnerCell& y = b.cells[i];
            if (x.snr1 != y.snr1 || x.snr2 != y.snr2 || x.margin != y.margin ||
                x.winners != y.winners)
                return false;
            for (int k = 0; k < 4; ++k)
                if (x.sums[k] != y.sums[k]) return false;
        }
        return true;
    }
};

namespace detail {

// Searched optima carry grid error; comparisons below this are ties.
inline constexpr double kSweepTieTol = 1e-4;

inline Scheme pick_display_winner(const double sums[4], double tie_tol) {
    double best = sums[0];
    for (int i = 1; i < 4; ++i) best = std::max(best, sums[i]);
    for (int i = 0; i < 4; ++i)
        if (sums[i] >= best - tie_tol) return kAchievableSchemes[i];
    return kAchievableSchemes[0];
}

template <class Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers =
        std::min<std::size_t>(count, hw == 0 ? 1 : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// One row per p1 grid point, ordered by p1. The ub column is the cut-set
/// sum; the scheme columns are optimized sums under spec.search.
inline SweepTable sum_rate_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepTable table{spec, {}};
    const auto p1_values = spec.p1_range.grid();
    table.rows.resize(p1_values.size());
    detail::parallel_for_index(p1_values.size(), [&](std::size_t i) {
        const ChannelParams params{p1_values[i], spec.p2, spec.n0, spec.downlink};
        SweepRow row;
        row.p1 = params.p1;
        row.p2 = params.p2;
        row.n0 = params.n0;
        row.ub = max_sum_rate(outer_bound_region(params)).value;
        double sums[4];
        for (int k = 0; k < 4; ++k)
            sums[k] = optimize_sum_rate(kAchievableSchemes[k], params, spec.search).sum_rate;
        row.cdf = sums[0];
        row.fdf_nested = sums[1];
        row.fdf_rs_sim = sums[2];
        row.fdf_rs_tdm = sums[3];
        row.best_sum = std::max(std::max(sums[0], sums[1]), std::max(sums[2], sums[3]));
        row.best_scheme = detail::pick_display_winner(sums, detail::kSweepTieTol);
        table.rows[i] = row;
    });
    return table;
}

/// Winner decision per (snr1, snr2) cell; output row-major with snr2 as the
/// slow index. Cells are independent and evaluated concurrently; ordering
/// comes from the spec, never from completion order.
inline WinnerMap winner_map(const MapSpec& spec) {
    validate(spec);
    WinnerMap map{spec, {}};
    const auto snr1s = spec.snr1_range.grid();
    const auto snr2s = spec.snr2_range.grid();
    map.cells.resize(snr1s.size() * snr2s.size());
    detail::parallel_for_index(snr2s.size(), [&](std::size_t row) {
        for (std::size_t col = 0; col < snr1s.size(); ++col) {
            const ChannelParams params{snr1s[col] * spec.n0, snr2s[row] * spec.n0, spec.n0,
                                       std::nullopt};
            WinnerCell cell = winner_at(params, kMapSearchConfig, spec.tie_tol);
            cell.snr1 = snr1s[col];
            cell.snr2 = snr2s[row];
            map.cells[row * snr1s.size() + col] = std::move(cell);
        }
    });
    return map;
}

// ---------------------------------------------------------------------------
// Serialization. CSV floats use 9 significant digits via to_chars, which is
// locale-independent; identical specs must produce byte-identical output.

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline std::string joined_winners(const std::vector<Scheme>& winners) {
    std::string out;
    for (std::size_t i = 0; i < winners.size(); ++i) {
        if (i) out += '|';
        out += scheme_label(winners[i]);
    }
    return out;
}

inline std::vector<Scheme> split_winners(const std::string& text) {
    std::vector<Scheme> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t bar = text.find('|', pos);
        const std::string token =
            text.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
        if (!token.empty()) out.push_back(parse_scheme(token));
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    return out;
}

}  // namespace detail

inline constexpr const char* kSweepCsvHeader =
    "p1,p2,n0,ub,cdf,fdf_nested,fdf_rs_sim,fdf_rs_tdm,best_scheme,best_sum";
inline constexpr const char* kMapCsvHeader =
    "snr1,snr2,cdf,fdf_nested,fdf_rs_sim,fdf_rs_tdm,winners,margin";

inline void emit_csv(const SweepTable& table, std::ostream& out) {
    using detail::format_double;
    out << kSweepCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << format_double(r.p1) << ',' << format_double(r.p2) << ','
            << format_double(r.n0) << ',' << format_double(r.ub) << ','
            << format_double(r.cdf) << ',' << format_double(r.fdf_nested) << ','
            << format_double(r.fdf_rs_sim) << ',' << format_double(r.fdf_rs_tdm) << ','
            << scheme_label(r.best_scheme) << ',' << format_double(r.best_sum) << '\n';
    }
}

inline void emit_csv(const WinnerMap& map, std::ostream& out) {
    using detail::format_double;
    out << kMapCsvHeader << '\n';
    for (const auto& c : map.cells) {
        out << format_double(c.snr1) << ',' << format_double(c.snr2) << ','
            << format_double(c.sums[0]) << ',' << format_double(c.sums[1]) << ','
            << format_double(c.sums[2]) << ',' << format_double(c.sums[3]) << ','
            << detail::joined_winners(c.winners) << ',' << format_double(c.margin) << '\n';
    }
}

// --- JSON, with the full spec echoed for reproducibility ---

inline ordered_json to_json(const Range& r) {
    return ordered_json{{"start", r.start}, {"stop", r.stop}, {"count", r.count}};
}

inline ordered_json to_json(const SearchConfig& s) {
    return ordered_json{{"coarse_grid", s.coarse_grid},
                        {"refine_iters", s.refine_iters},
                        {"refine_shrink", s.refine_shrink},
                        {"tol", s.tol}};
}

inline ordered_json to_json(const std::optional<Downlink>& d) {
    if (!d) return nullptr;
    return ordered_json{{"p0", d->p0}, {"n1", d->n1}, {"n2", d->n2}};
}

inline ordered_json to_json(const SweepSpec& spec) {
    return ordered_json{{"n0", spec.n0},
                        {"p2", spec.p2},
                        {"p1_range", to_json(spec.p1_range)},
                        {"downlink", to_json(spec.downlink)},
                        {"search", to_json(spec.search)}};
}

inline ordered_json to_json(const MapSpec& spec) {
    return ordered_json{{"snr1_range", to_json(spec.snr1_range)},
                        {"snr2_range", to_json(spec.snr2_range)},
                        {"n0", spec.n0},
                        {"tie_tol", spec.tie_tol}};
}

inline ordered_json to_json(const SweepTable& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows)
        rows.push_back(ordered_json{{"p1", r.p1},
                                    {"p2", r.p2},
                                    {"n0", r.n0},
                                    {"ub", r.ub},
                                    {"cdf", r.cdf},
                                    {"fdf_nested", r.fdf_nested},
                                    {"fdf_rs_sim", r.fdf_rs_sim},
                                    {"fdf_rs_tdm", r.fdf_rs_tdm},
                                    {"best_scheme", std::string(scheme_label(r.best_scheme))},
                                    {"best_sum", r.best_sum}});
    return ordered_json{{"spec", to_json(table.spec)}, {"rows", std::move(rows)}};
}

inline ordered_json to_json(const WinnerMap& map) {
    ordered_json rows = ordered_json::array();
    for (const auto& c : map.cells)
        rows.push_back(ordered_json{{"snr1", c.snr1},
                                    {"snr2", c.snr2},
                                    {"cdf", c.sums[0]},
                                    {"fdf_nested", c.sums[1]},
                                    {"fdf_rs_sim", c.sums[2]},
                                    {"fdf_rs_tdm", c.sums[3]},
                                    {"winners", detail::joined_winners(c.winners)},
                                    {"margin", c.margin}});
    return ordered_json{{"spec", to_json(map.spec)}, {"rows", std::move(rows)}};
}

inline void emit_json(const SweepTable& table, std::ostream& out) {
    out << to_json(table).dump(2) << '\n';
}

inline void emit_json(const WinnerMap& map, std::ostream& out) {
    out << to_json(map).dump(2) << '\n';
}

// --- Parsers for the emitted documents and for config files. Fail closed:
// unknown keys are rejected with their path so runs stay reproducible. ---

namespace detail {

inline void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                                const std::string& path) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw validation_error("unknown key: " + (path.empty() ? item.key()
                                                                   : path + "." + item.key()));
    }
}

template <class T>
T get_field(const ordered_json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key))
        throw validation_error("missing key: " + (path.empty() ? std::string(key)
                                                               : path + "." + std::string(key)));
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw validation_error("bad value for key: " +
                               (path.empty() ? std::string(key) : path + "." + std::string(key)));
    }
}

}  // namespace detail

inline Range range_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) throw validation_error(path + " must be an object");
    detail::reject_unknown_keys(j, {"start", "stop", "count"}, path);
    return Range{detail::get_field<double>(j, "start", path),
                 detail::get_field<double>(j, "stop", path),
                 detail::get_field<int>(j, "count", path)};
}

inline SearchConfig search_config_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) throw validation_error(path + " must be an object");
    detail::reject_unknown_keys(j, {"coarse_grid", "refine_iters", "refine_shrink", "tol"}, path);
    SearchConfig cfg;
    if (j.contains("coarse_grid")) cfg.coarse_grid = detail::get_field<int>(j, "coarse_grid", path);
    if (j.contains("refine_iters"))
        cfg.refine_iters = detail::get_field<int>(j, "refine_iters", path);
    if (j.contains("refine_shrink"))
        cfg.refine_shrink = detail::get_field<double>(j, "refine_shrink", path);
    if (j.contains("tol")) cfg.tol = detail::get_field<double>(j, "tol", path);
    return cfg;
}

inline std::optional<Downlink> downlink_from_json(const ordered_json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_object()) throw validation_error(path + " must be an object or null");
    detail::reject_unknown_keys(j, {"p0", "n1", "n2"}, path);
    return Downlink{detail::get_field<double>(j, "p0", path),
                    detail::get_field<double>(j, "n1", path),
                    detail::get_field<double>(j, "n2", path)};
}

inline SweepSpec sweep_spec_from_json(const ordered_json& j) {
    if (!j.is_object()) throw validation_error("sweep config must be a JSON object");
    detail::reject_unknown_keys(j, {"n0", "p2", "p1_range", "downlink", "search"}, "");
    SweepSpec spec;
    spec.n0 = detail::get_field<double>(j, "n0", "");
    spec.p2 = detail::get_field<double>(j, "p2", "");
    spec.p1_range = range_from_json(j.at("p1_range"), "p1_range");
    if (j.contains("downlink")) spec.downlink = downlink_from_json(j.at("downlink"), "downlink");
    if (j.contains("search")) spec.search = search_config_from_json(j.at("search"), "search");
    validate(spec);
    return spec;
}

inline MapSpec map_spec_from_json(const ordered_json& j) {
    if (!j.is_object()) throw validation_error("map config must be a JSON object");
    detail::reject_unknown_keys(j, {"snr1_range", "snr2_range", "n0", "tie_tol"}, "");
    MapSpec spec;
    if (j.contains("snr1_range")) spec.snr1_range = range_from_json(j.at("snr1_range"), "snr1_range");
    if (j.contains("snr2_range")) spec.snr2_range = range_from_json(j.at("snr2_range"), "snr2_range");
    if (j.contains("n0")) spec.n0 = detail::get_field<double>(j, "n0", "");
    if (j.contains("tie_tol")) spec.tie_tol = detail::get_field<double>(j, "tie_tol", "");
    validate(spec);
    return spec;
}

inline SweepTable sweep_table_from_json(const ordered_json& j) {
    SweepTable table;
    table.spec = sweep_spec_from_json(j.at("spec"));
    for (const auto& r : j.at("rows")) {
        SweepRow row;
        row.p1 = r.at("p1").get<double>();
        row.p2 = r.at("p2").get<double>();
        row.n0 = r.at("n0").get<double>();
        row.ub = r.at("ub").get<double>();
        row.cdf = r.at("cdf").get<double>();
        row.fdf_nested = r.at("fdf_nested").get<double>();
        row.fdf_rs_sim = r.at("fdf_rs_sim").get<double>();
        row.fdf_rs_tdm = r.at("fdf_rs_tdm").get<double>();
        row.best_scheme = parse_scheme(r.at("best_scheme").get<std::string>());
        row.best_sum = r.at("best_sum").get<double>();
        table.rows.push_back(row);
    }
    return table;
}

inline WinnerMap winner_map_from_json(const ordered_json& j) {
    WinnerMap map;
    map.spec = map_spec_from_json(j.at("spec"));
    for (const auto& r : j.at("rows")) {
        WinnerCell cell;
        cell.snr1 = r.at("snr1").get<double>();
        cell.snr2 = r.at("snr2").get<double>();
        cell.sums[0] = r.at("cdf").get<double>();
        cell.sums[1] = r.at("fdf_nested").get<double>();
        cell.sums[2] = r.at("fdf_rs_sim").get<double>();
        cell.sums[3] = r.at("fdf_rs_tdm").get<double>();
        cell.winners = detail::split_winners(r.at("winners").get<std::string>());
        cell.margin = r.at("margin").get<double>();
        map.cells.push_back(std::move(cell));
    }
    return map;
}

}  // namespace twrc

#endif  // TWRC_EXPERIMENTS_HPP
