// SPDX-License-Identifier: Apache-2.0
#include "core/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/reference_values.hpp"

namespace uwbsim {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr char kToolVersion[] = "0.1.0";

std::string fmt(double value)
{
    if (std::isnan(value))
        return "";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.9g", value);
    return buffer;
}

const char *scheme_name(RangingScheme scheme)
{
    return scheme == RangingScheme::DoubleSided ? "ds" : "ss";
}

struct Accumulator {
    int attempted = 0;
    std::vector<double> estimates;
    std::vector<double> deviations;

    void attempt() { ++attempted; }
    void sample(double estimate, double truth)
    {
        estimates.push_back(estimate);
        deviations.push_back(estimate - truth);
    }

    MethodStats stats() const
    {
        MethodStats s;
        s.attempted = attempted;
        s.received = static_cast<int>(estimates.size());
        s.reception_rate = attempted > 0 ? double(s.received) / attempted : 0.0;
        if (estimates.empty())
            return s;
        double sum_est = 0.0, sum_dev = 0.0;
        for (std::size_t i = 0; i < estimates.size(); ++i) {
            sum_est += estimates[i];
            sum_dev += deviations[i];
            s.max_abs_dev_m = std::max(s.max_abs_dev_m, std::abs(deviations[i]));
        }
        s.mean_m = sum_est / estimates.size();
        s.mean_dev_m = sum_dev / deviations.size();
        if (deviations.size() > 1) {
            double ss = 0.0;
            for (double d : deviations)
                ss += (d - s.mean_dev_m) * (d - s.mean_dev_m);
            s.std_dev_m = std::sqrt(ss / (deviations.size() - 1));
        }
        return s;
    }
};

} // namespace

MethodStats collect_stats(const RunResult &result, const StatsFilter &filter)
{
    Accumulator acc;
    for (const ExchangeRecord &e : result.exchanges) {
        if (e.true_distance_m < filter.min_true_distance_m ||
            e.true_distance_m > filter.max_true_distance_m)
            continue;
        if (filter.los_filter == 0 && !e.los_truth)
            continue;
        if (filter.los_filter == 1 && e.los_truth)
            continue;
        if (filter.ble) {
            if (!e.ble)
                continue;
            acc.attempt();
            if (e.ble->received)
                acc.sample(e.ble->distance_m, e.true_distance_m);
        } else {
            acc.attempt();
            if (e.outcome == ExchangeOutcome::Complete && e.has_estimate)
                acc.sample(e.final_m, e.true_distance_m);
        }
    }
    return acc.stats();
}

PositionStats collect_position_stats(const RunResult &result, RangingMethod method)
{
    PositionStats stats;
    double sum_sq = 0.0;
    for (const PositionRecord &p : result.positions) {
        if (p.method != method)
            continue;
        ++stats.attempted;
        if (!p.success)
            continue;
        ++stats.successful;
        sum_sq += p.error_m * p.error_m;
    }
    stats.success_rate = stats.attempted > 0 ? double(stats.successful) / stats.attempted : 0.0;
    stats.rms_error_m = stats.successful > 0 ? std::sqrt(sum_sq / stats.successful) : 0.0;
    return stats;
}

namespace {

ordered_json stats_to_json(const MethodStats &s)
{
    return ordered_json{{"attempted", s.attempted},
                        {"received", s.received},
                        {"reception_rate", s.reception_rate},
                        {"mean_m", s.mean_m},
                        {"mean_dev_m", s.mean_dev_m},
                        {"std_dev_m", s.std_dev_m},
                        {"max_abs_dev_m", s.max_abs_dev_m}};
}

ordered_json position_stats_to_json(const PositionStats &s)
{
    return ordered_json{{"attempted", s.attempted},
                        {"successful", s.successful},
                        {"success_rate", s.success_rate},
                        {"rms_error_m", s.rms_error_m}};
}

ordered_json exchange_to_json(const ExchangeRecord &e)
{
    ordered_json j{{"time_s", e.time_s},
                   {"tag", e.tag_id},
                   {"anchor", e.anchor_id},
                   {"mode", e.mode_id},
                   {"scheme", scheme_name(e.scheme)},
                   {"outcome", outcome_name(e.outcome)},
                   {"true_distance_m", e.true_distance_m},
                   {"los", e.los_truth}};
    if (e.has_estimate) {
        j["raw_m"] = e.raw_m;
        j["corrected_m"] = e.corrected_m;
        j["final_m"] = e.final_m;
        j["ratio_used"] = e.ratio_used;
    }
    if (e.outcome == ExchangeOutcome::Complete) {
        j["reply_delay_s"] = e.reply_delay_s;
        j["p_rxl_dbm"] = e.p_rxl_dbm;
        j["p_fp_dbm"] = e.p_fp_dbm;
        j["fp_diff_db"] = e.p_rxl_dbm - e.p_fp_dbm;
        j["nlos"] = e.nlos;
    }
    if (e.ble) {
        ordered_json ble{{"received", e.ble->received}};
        if (e.ble->received) {
            ble["rssi_dbm"] = e.ble->rssi_dbm;
            ble["distance_m"] = e.ble->distance_m;
        }
        j["ble"] = ble;
    }
    j["tag_charge_mah"] = e.tag_charge_mah;
    return j;
}

ordered_json run_to_json_object(const RunResult &result)
{
    ordered_json j;
    j["kind"] = "run";
    j["tool_version"] = kToolVersion;
    j["reference_version"] = refs::kVersion;
    j["scenario"] = result.scenario_name;
    j["seed"] = result.seed;
    j["duration_s"] = result.duration_s;
    j["mode"] = result.mode_id;
    j["event_count"] = result.event_count;

    ordered_json summary;
    summary["uwb"] = stats_to_json(collect_stats(result, {}));
    StatsFilter near;
    near.max_true_distance_m = 10.0;
    summary["uwb_0_10m"] = stats_to_json(collect_stats(result, near));
    StatsFilter ble;
    ble.ble = true;
    summary["ble"] = stats_to_json(collect_stats(result, ble));
    summary["positions_uwb"] =
        position_stats_to_json(collect_position_stats(result, RangingMethod::UwbTof));
    summary["positions_ble"] =
        position_stats_to_json(collect_position_stats(result, RangingMethod::BleRssi));
    j["summary"] = summary;

    ordered_json exchanges = ordered_json::array();
    for (const ExchangeRecord &e : result.exchanges)
        exchanges.push_back(exchange_to_json(e));
    j["exchanges"] = exchanges;

    ordered_json positions = ordered_json::array();
    for (const PositionRecord &p : result.positions) {
        ordered_json pj{{"time_s", p.time_s},
                        {"tag", p.tag_id},
                        {"method", p.method == RangingMethod::UwbTof ? "uwb" : "ble"},
                        {"success", p.success},
                        {"intersected", p.intersected},
                        {"n_anchors", p.n_anchors},
                        {"true_x", p.true_x},
                        {"true_y", p.true_y}};
        if (p.success) {
            pj["est_x"] = p.est_x;
            pj["est_y"] = p.est_y;
            pj["error_m"] = p.error_m;
            pj["residual_m"] = p.residual_m;
        }
        positions.push_back(pj);
    }
    j["positions"] = positions;

    ordered_json ledgers = ordered_json::array();
    for (const NodeLedgerRecord &l : result.ledgers) {
        ordered_json lj{{"node", l.node_id}, {"role", node_role_name(l.role)}};
        ordered_json states;
        for (const auto &[state, seconds] : l.state_seconds)
            states[radio_state_name(state)] = seconds;
        lj["state_seconds"] = states;
        lj["radio_charge_mah"] = l.radio_charge_mah;
        lj["host_charge_mah"] = l.host_charge_mah;
        lj["total_charge_mah"] = l.total_charge_mah;
        lj["average_current_ma"] = l.average_current_ma;
        lj["projected_lifetime_h"] = l.projected_lifetime_h;
        ledgers.push_back(lj);
    }
    j["ledgers"] = ledgers;
    j["log"] = result.log;
    return j;
}

} // namespace

std::string result_to_json(const RunResult &result)
{
    return run_to_json_object(result).dump(2) + "\n";
}

std::string exchanges_to_csv(const RunResult &result)
{
    std::ostringstream out;
    out << "time_s,tag,anchor,mode,scheme,outcome,true_distance_m,los,raw_m,corrected_m,"
           "final_m,p_rxl_dbm,p_fp_dbm,fp_diff_db,nlos,reply_delay_s,ble_received,"
           "ble_rssi_dbm,ble_distance_m,charge_mah\n";
    for (const ExchangeRecord &e : result.exchanges) {
        out << fmt(e.time_s) << ',' << e.tag_id << ',' << e.anchor_id << ',' << e.mode_id << ','
            << scheme_name(e.scheme) << ',' << outcome_name(e.outcome) << ','
            << fmt(e.true_distance_m) << ',' << (e.los_truth ? 1 : 0) << ',';
        if (e.has_estimate)
            out << fmt(e.raw_m) << ',' << fmt(e.corrected_m) << ',' << fmt(e.final_m) << ',';
        else
            out << ",,,";
        if (e.outcome == ExchangeOutcome::Complete)
            out << fmt(e.p_rxl_dbm) << ',' << fmt(e.p_fp_dbm) << ','
                << fmt(e.p_rxl_dbm - e.p_fp_dbm) << ',' << (e.nlos ? 1 : 0) << ','
                << fmt(e.reply_delay_s) << ',';
        else
            out << ",,,,,";
        if (e.ble) {
            out << (e.ble->received ? 1 : 0) << ',';
            if (e.ble->received)
                out << fmt(e.ble->rssi_dbm) << ',' << fmt(e.ble->distance_m) << ',';
            else
                out << ",,";
        } else {
            out << ",,,";
        }
        out << fmt(e.tag_charge_mah) << '\n';
    }
    return out.str();
}

std::string sweep_to_json(const std::vector<SweepPointResult> &points)
{
    ordered_json j;
    j["kind"] = "sweep";
    j["tool_version"] = kToolVersion;
    j["reference_version"] = refs::kVersion;
    ordered_json rows = ordered_json::array();
    for (const SweepPointResult &p : points) {
        ordered_json row{{"index", p.index},
                         {"mode", p.mode_id},
                         {"rx_delay_s", p.rx_delay_s},
                         {"seed", p.seed}};
        if (p.distance_m)
            row["distance_m"] = *p.distance_m;
        if (p.failed) {
            row["failed"] = true;
            row["error"] = p.error;
        } else {
            row["stats"] = stats_to_json(collect_stats(p.result, {}));
            StatsFilter near;
            near.max_true_distance_m = 10.0;
            row["stats_0_10m"] = stats_to_json(collect_stats(p.result, near));
            StatsFilter ble;
            ble.ble = true;
            row["stats_ble"] = stats_to_json(collect_stats(p.result, ble));
            // Tag-side energy summary: first tag ledger.
            for (const NodeLedgerRecord &l : p.result.ledgers) {
                if (l.role != NodeRole::Tag)
                    continue;
                row["tag_average_current_ma"] = l.average_current_ma;
                row["tag_projected_lifetime_h"] = l.projected_lifetime_h;
                break;
            }
        }
        rows.push_back(row);
    }
    j["points"] = rows;
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepPointResult> &points)
{
    std::ostringstream out;
    out << "index,mode,distance_m,rx_delay_s,seed,failed,attempted,received,reception_rate,"
           "mean_dev_m,std_dev_m,max_abs_dev_m,std_dev_0_10m,tag_average_current_ma,"
           "tag_projected_lifetime_h\n";
    for (const SweepPointResult &p : points) {
        out << p.index << ',' << p.mode_id << ','
            << (p.distance_m ? fmt(*p.distance_m) : std::string()) << ',' << fmt(p.rx_delay_s)
            << ',' << p.seed << ',' << (p.failed ? 1 : 0) << ',';
        if (p.failed) {
            out << ",,,,,,,,\n";
            continue;
        }
        const MethodStats all = collect_stats(p.result, {});
        StatsFilter near_filter;
        near_filter.max_true_distance_m = 10.0;
        const MethodStats near = collect_stats(p.result, near_filter);
        double current = 0.0, lifetime = 0.0;
        for (const NodeLedgerRecord &l : p.result.ledgers) {
            if (l.role != NodeRole::Tag)
                continue;
            current = l.average_current_ma;
            lifetime = l.projected_lifetime_h;
            break;
        }
        out << all.attempted << ',' << all.received << ',' << fmt(all.reception_rate) << ','
            << fmt(all.mean_dev_m) << ',' << fmt(all.std_dev_m) << ',' << fmt(all.max_abs_dev_m)
            << ',' << fmt(near.std_dev_m) << ',' << fmt(current) << ',' << fmt(lifetime)
            << '\n';
    }
    return out.str();
}

namespace {

struct TableDocument {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string table_to_string(const TableDocument &table, const std::string &format)
{
    if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto &row : table.rows) {
            ordered_json obj;
            for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i)
                obj[table.header[i]] = row[i];
            rows.push_back(obj);
        }
        return rows.dump(2) + "\n";
    }
    require(format == "csv" || format.empty(), ErrorCode::Usage,
            "unknown format '" + format + "' (expected csv or json)");
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

std::string rel_dev(double computed, double reference)
{
    if (reference == 0.0)
        return "";
    return fmt((computed - reference) / std::abs(reference));
}

/// Minimal view of a results document for table rendering.
struct ResultsView {
    bool is_sweep = false;
    nlohmann::json doc;
};

ResultsView parse_results(const std::string &text)
{
    ResultsView view;
    try {
        view.doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        fail(ErrorCode::Parse, std::string("results document: ") + e.what());
    }
    const std::string kind = view.doc.value("kind", std::string());
    if (kind == "sweep")
        view.is_sweep = true;
    else
        require(kind == "run", ErrorCode::Usage,
                "results document must be a run or sweep JSON produced by this tool");
    return view;
}

struct ExchangeView {
    double true_distance_m = 0.0;
    bool los = true;
    bool complete = false;
    bool has_estimate = false;
    double final_m = 0.0;
    double p_rxl = 0.0, p_fp = 0.0;
    bool nlos_flag = false;
    int tag = 0, anchor = 0;
    bool ble_present = false;
    bool ble_received = false;
    double ble_distance_m = 0.0;
    double ble_rssi_dbm = 0.0;
};

std::vector<ExchangeView> exchange_views(const nlohmann::json &doc)
{
    std::vector<ExchangeView> views;
    for (const auto &e : doc.at("exchanges")) {
        ExchangeView v;
        v.true_distance_m = e.value("true_distance_m", 0.0);
        v.los = e.value("los", true);
        v.complete = e.value("outcome", std::string()) == "complete";
        v.has_estimate = e.contains("final_m");
        v.final_m = e.value("final_m", 0.0);
        v.p_rxl = e.value("p_rxl_dbm", 0.0);
        v.p_fp = e.value("p_fp_dbm", 0.0);
        v.nlos_flag = e.value("nlos", false);
        v.tag = e.value("tag", 0);
        v.anchor = e.value("anchor", 0);
        if (e.contains("ble")) {
            v.ble_present = true;
            v.ble_received = e["ble"].value("received", false);
            v.ble_distance_m = e["ble"].value("distance_m", 0.0);
            v.ble_rssi_dbm = e["ble"].value("rssi_dbm", 0.0);
        }
        views.push_back(v);
    }
    return views;
}

struct DevStats {
    int attempted = 0;
    int received = 0;
    std::vector<double> devs;
    std::vector<double> abs_devs_near_250; // |dev| at ~2.5 m
    std::vector<double> abs_devs_near_750; // |dev| at ~7.5 m
    std::vector<double> devs_near;         // <= 10 m

    double reception() const { return attempted ? double(received) / attempted : 0.0; }
    static double std_of(const std::vector<double> &xs)
    {
        if (xs.size() < 2)
            return 0.0;
        double mean = 0.0;
        for (double x : xs)
            mean += x;
        mean /= xs.size();
        double ss = 0.0;
        for (double x : xs)
            ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (xs.size() - 1));
    }
    static double mean_of(const std::vector<double> &xs)
    {
        if (xs.empty())
            return 0.0;
        double mean = 0.0;
        for (double x : xs)
            mean += x;
        return mean / xs.size();
    }
    double max_abs() const
    {
        double best = 0.0;
        for (double d : devs)
            best = std::max(best, std::abs(d));
        return best;
    }
};

void add_dev(DevStats &stats, double estimate, double truth)
{
    const double dev = estimate - truth;
    stats.devs.push_back(dev);
    if (truth <= 10.0)
        stats.devs_near.push_back(dev);
    if (std::abs(truth - 2.5) < 0.5)
        stats.abs_devs_near_250.push_back(std::abs(dev));
    if (std::abs(truth - 7.5) < 0.5)
        stats.abs_devs_near_750.push_back(std::abs(dev));
}

TableDocument precision_table(const ResultsView &view)
{
    TableDocument table;
    table.header = {"mode",
                    "std_0_30_cm", "ref_std_0_30_cm", "rel_dev_0_30",
                    "std_0_10_cm", "ref_std_0_10_cm", "rel_dev_0_10",
                    "max_dev_cm", "ref_max_dev_cm", "rel_dev_max"};
    struct Row {
        int mode;
        double std30_cm, std10_cm, max_cm;
    };
    std::vector<Row> rows;
    if (view.is_sweep) {
        for (const auto &point : view.doc.at("points")) {
            if (point.value("failed", false))
                continue;
            rows.push_back({point.value("mode", 0),
                            point.at("stats").value("std_dev_m", 0.0) * 100.0,
                            point.at("stats_0_10m").value("std_dev_m", 0.0) * 100.0,
                            point.at("stats").value("max_abs_dev_m", 0.0) * 100.0});
        }
    } else {
        DevStats stats;
        for (const ExchangeView &e : exchange_views(view.doc)) {
            ++stats.attempted;
            if (e.complete && e.has_estimate) {
                ++stats.received;
                add_dev(stats, e.final_m, e.true_distance_m);
            }
        }
        rows.push_back({view.doc.value("mode", 0), DevStats::std_of(stats.devs) * 100.0,
                        DevStats::std_of(stats.devs_near) * 100.0, stats.max_abs() * 100.0});
    }
    for (const Row &r : rows) {
        if (r.mode < 1 || r.mode > 6)
            continue;
        const double ref30 = refs::kStd0to30Cm[r.mode - 1];
        const double ref10 = refs::kStd0to10Cm[r.mode - 1];
        const double refmax = refs::kMaxDiffCm[r.mode - 1];
        table.rows.push_back({std::to_string(r.mode),
                              fmt(r.std30_cm), fmt(ref30), rel_dev(r.std30_cm, ref30),
                              fmt(r.std10_cm), fmt(ref10), rel_dev(r.std10_cm, ref10),
                              fmt(r.max_cm), fmt(refmax), rel_dev(r.max_cm, refmax)});
    }
    return table;
}

TableDocument comparison_table(const ResultsView &view)
{
    require(!view.is_sweep, ErrorCode::Usage, "comparison table needs a run document");
    TableDocument table;
    table.header = {"group",
                    "reception_rate", "ref_reception_rate", "rel_dev_reception",
                    "std_0_30_cm", "ref_std_0_30_cm", "rel_dev_0_30",
                    "std_0_10_cm", "ref_std_0_10_cm", "rel_dev_0_10",
                    "max_dev_cm", "ref_max_dev_cm", "rel_dev_max",
                    "avg_dev_250_cm", "ref_avg_dev_250_cm",
                    "avg_dev_750_cm", "ref_avg_dev_750_cm"};
    DevStats groups[4]; // uwb_los, uwb_nlos, ble_los, ble_nlos
    for (const ExchangeView &e : exchange_views(view.doc)) {
        DevStats &uwb = groups[e.los ? 0 : 1];
        ++uwb.attempted;
        if (e.complete && e.has_estimate) {
            ++uwb.received;
            add_dev(uwb, e.final_m, e.true_distance_m);
        }
        if (e.ble_present) {
            DevStats &ble = groups[e.los ? 2 : 3];
            ++ble.attempted;
            if (e.ble_received) {
                ++ble.received;
                add_dev(ble, e.ble_distance_m, e.true_distance_m);
            }
        }
    }
    for (int g = 0; g < 4; ++g) {
        const DevStats &s = groups[g];
        if (s.attempted == 0)
            continue;
        const double std30 = DevStats::std_of(s.devs) * 100.0;
        const double std10 = DevStats::std_of(s.devs_near) * 100.0;
        const double maxdev = s.max_abs() * 100.0;
        const double avg250 = DevStats::mean_of(s.abs_devs_near_250) * 100.0;
        const double avg750 = DevStats::mean_of(s.abs_devs_near_750) * 100.0;
        table.rows.push_back({refs::kComparisonGroups[g],
                              fmt(s.reception()), fmt(refs::kComparisonReception[g]),
                              rel_dev(s.reception(), refs::kComparisonReception[g]),
                              fmt(std30), fmt(refs::kComparisonStd0to30Cm[g]),
                              rel_dev(std30, refs::kComparisonStd0to30Cm[g]),
                              fmt(std10), fmt(refs::kComparisonStd0to10Cm[g]),
                              rel_dev(std10, refs::kComparisonStd0to10Cm[g]),
                              fmt(maxdev), fmt(refs::kComparisonMaxDevCm[g]),
                              rel_dev(maxdev, refs::kComparisonMaxDevCm[g]),
                              fmt(avg250), fmt(refs::kComparisonAvgDev250Cm[g]),
                              fmt(avg750), fmt(refs::kComparisonAvgDev750Cm[g])});
    }
    return table;
}

TableDocument nlos_table(const ResultsView &view)
{
    require(!view.is_sweep, ErrorCode::Usage, "nlos table needs a run document");
    TableDocument table;
    table.header = {"level", "ref_barrier_cm",
                    "distance_est_cm", "ref_distance_est_cm",
                    "ble_rssi_dbm", "ref_ble_rssi_dbm",
                    "p_fp_dbm", "ref_p_fp_dbm",
                    "p_rxl_dbm", "ref_p_rxl_dbm",
                    "fp_diff_db", "ref_fp_diff_db",
                    "nlos_fraction", "ref_nlos"};
    // Pairs in first-appearance order map onto the reference levels.
    std::vector<std::pair<int, int>> order;
    struct Level {
        std::vector<double> dist, rssi, fp, rxl, diff;
        int complete = 0, flagged = 0;
    };
    std::map<std::pair<int, int>, Level> levels;
    for (const ExchangeView &e : exchange_views(view.doc)) {
        const std::pair<int, int> key{e.tag, e.anchor};
        if (!levels.count(key))
            order.push_back(key);
        Level &level = levels[key];
        if (!e.complete)
            continue;
        ++level.complete;
        if (e.has_estimate)
            level.dist.push_back(e.final_m);
        level.fp.push_back(e.p_fp);
        level.rxl.push_back(e.p_rxl);
        level.diff.push_back(e.p_rxl - e.p_fp);
        if (e.nlos_flag)
            ++level.flagged;
        if (e.ble_received)
            level.rssi.push_back(e.ble_rssi_dbm);
    }
    for (std::size_t i = 0; i < order.size() && i < 4; ++i) {
        const Level &level = levels[order[i]];
        const double flagged_fraction =
            level.complete ? double(level.flagged) / level.complete : 0.0;
        table.rows.push_back({refs::kNlosLevels[i], fmt(refs::kNlosBarrierCm[i]),
                              fmt(DevStats::mean_of(level.dist) * 100.0),
                              fmt(refs::kNlosDistanceEstCm[i]),
                              fmt(DevStats::mean_of(level.rssi)), fmt(refs::kNlosBleRssiDbm[i]),
                              fmt(DevStats::mean_of(level.fp)), fmt(refs::kNlosPFpDbm[i]),
                              fmt(DevStats::mean_of(level.rxl)), fmt(refs::kNlosPRxlDbm[i]),
                              fmt(DevStats::mean_of(level.diff)), fmt(refs::kNlosDiffDbm[i]),
                              fmt(flagged_fraction), i == 0 ? "0" : "1"});
    }
    return table;
}

TableDocument power_table()
{
    TableDocument table;
    table.header = {"mode", "avg_current_ma", "ref_avg_current_ma", "rel_dev"};
    const PowerProfile profile = PowerProfile::defaults();
    for (int m = 1; m <= kModeCount; ++m) {
        const double computed = exchange_charge(profile, m, 0.0).average_current_ma;
        const double reference = refs::kAvgCurrentMa[m - 1];
        table.rows.push_back(
            {std::to_string(m), fmt(computed), fmt(reference), rel_dev(computed, reference)});
    }
    return table;
}

} // namespace

const char *const kTableIds[4] = {"precision", "comparison", "nlos", "power"};

std::string render_table(const std::string &table_id, const std::string &results_json_text,
                         const std::string &format)
{
    if (table_id == "power")
        return table_to_string(power_table(), format);

    require(!results_json_text.empty(), ErrorCode::Usage,
            "table '" + table_id + "' needs a results document");
    const ResultsView view = parse_results(results_json_text);
    if (table_id == "precision")
        return table_to_string(precision_table(view), format);
    if (table_id == "comparison")
        return table_to_string(comparison_table(view), format);
    if (table_id == "nlos")
        return table_to_string(nlos_table(view), format);
    fail(ErrorCode::Usage, "unknown table id '" + table_id +
                               "' (expected precision, comparison, nlos or power)");
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

} // namespace

std::string stats_from_csv(const std::string &csv_text, const std::string &format)
{
    std::istringstream in(csv_text);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Parse, "empty CSV document");
    const std::vector<std::string> header = split_csv_line(line);
    auto column = [&](const std::string &name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return static_cast<long>(i);
        return -1L;
    };
    const long col_outcome = column("outcome");
    const long col_truth = column("true_distance_m");
    const long col_final = column("final_m");
    const long col_ble_received = column("ble_received");
    const long col_ble_distance = column("ble_distance_m");
    require(col_outcome >= 0 && col_truth >= 0 && col_final >= 0, ErrorCode::Parse,
            "CSV lacks the outcome/true_distance_m/final_m columns");

    Accumulator uwb, ble;
    std::vector<std::size_t> malformed;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty())
            continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            malformed.push_back(row_number);
            continue;
        }
        try {
            const double truth = std::stod(fields[col_truth]);
            uwb.attempt();
            if (fields[col_outcome] == "complete" && !fields[col_final].empty())
                uwb.sample(std::stod(fields[col_final]), truth);
            if (col_ble_received >= 0 && !fields[col_ble_received].empty()) {
                ble.attempt();
                if (fields[col_ble_received] == "1" && col_ble_distance >= 0 &&
                    !fields[col_ble_distance].empty())
                    ble.sample(std::stod(fields[col_ble_distance]), truth);
            }
        } catch (const std::exception &) {
            malformed.push_back(row_number);
        }
    }
    if (!malformed.empty()) {
        std::string rows;
        for (std::size_t i = 0; i < malformed.size(); ++i)
            rows += (i ? ", " : "") + std::to_string(malformed[i]);
        fail(ErrorCode::Parse, "malformed CSV rows: " + rows);
    }

    TableDocument table;
    table.header = {"method", "attempted", "received", "reception_rate",
                    "mean_m", "mean_dev_m", "std_dev_m", "max_abs_dev_m"};
    const MethodStats us = uwb.stats();
    table.rows.push_back({"uwb", std::to_string(us.attempted), std::to_string(us.received),
                          fmt(us.reception_rate), fmt(us.mean_m), fmt(us.mean_dev_m),
                          fmt(us.std_dev_m), fmt(us.max_abs_dev_m)});
    if (ble.attempted > 0) {
        const MethodStats bs = ble.stats();
        table.rows.push_back({"ble", std::to_string(bs.attempted), std::to_string(bs.received),
                              fmt(bs.reception_rate), fmt(bs.mean_m), fmt(bs.mean_dev_m),
                              fmt(bs.std_dev_m), fmt(bs.max_abs_dev_m)});
    }
    return table_to_string(table, format);
}

} // namespace uwbsim
