// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the simulator exclusively through the
// public C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "uwbsim.h"

namespace {

int report_failure(uwbsim_status status, const std::string &context)
{
    std::fprintf(stderr, "uwbsim: %s: %s\n", context.c_str(), uwbsim_last_error());
    return status == UWBSIM_OK ? 1 : static_cast<int>(status);
}

struct ScenarioHandle {
    uwbsim_scenario *ptr = nullptr;
    ~ScenarioHandle() { uwbsim_scenario_free(ptr); }
};

struct ResultHandle {
    uwbsim_result *ptr = nullptr;
    ~ResultHandle() { uwbsim_result_free(ptr); }
};

struct StringHandle {
    char *ptr = nullptr;
    ~StringHandle() { uwbsim_string_free(ptr); }
};

int load_scenario(const std::string &path, bool has_seed, std::uint64_t seed,
                  ScenarioHandle &scenario)
{
    if (uwbsim_status s = uwbsim_scenario_from_file(path.c_str(), &scenario.ptr))
        return report_failure(s, path);
    if (has_seed)
        if (uwbsim_status s = uwbsim_scenario_set_seed(scenario.ptr, seed))
            return report_failure(s, "set seed");
    return 0;
}

int write_outputs(const ResultHandle &result, const std::string &out_prefix)
{
    const std::string json_path = out_prefix + ".json";
    const std::string csv_path = out_prefix + ".csv";
    if (uwbsim_status s = uwbsim_result_write(result.ptr, json_path.c_str(), csv_path.c_str()))
        return report_failure(s, "write outputs");
    std::printf("wrote %s and %s\n", json_path.c_str(), csv_path.c_str());
    return 0;
}

int emit(const std::string &text, const std::string &out_path)
{
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::FILE *f = std::fopen(out_path.c_str(), "wb");
    if (!f) {
        std::fprintf(stderr, "uwbsim: cannot write %s\n", out_path.c_str());
        return 1;
    }
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"UWB/BLE asset-tracking ranging simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(uwbsim_version()));

    std::string scenario_path;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto add_seed = [&](CLI::App *cmd) {
        cmd->add_option("--seed", seed, "Override the scenario seed")
            ->each([&](const std::string &) { has_seed = true; });
    };

    CLI::App *cmd_run = app.add_subcommand("run", "Run a scenario file");
    cmd_run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    cmd_run->add_option("--out", out, "Output prefix (<out>.json, <out>.csv)");
    add_seed(cmd_run);

    CLI::App *cmd_sweep = app.add_subcommand("sweep", "Run a scenario's sweep grid");
    cmd_sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    cmd_sweep->add_option("--out", out, "Output prefix (<out>.json, <out>.csv)");
    add_seed(cmd_sweep);

    std::string table_id;
    std::string results_path;
    CLI::App *cmd_table = app.add_subcommand("table", "Render a report table");
    cmd_table->add_option("id", table_id, "precision | comparison | nlos | power")->required();
    cmd_table->add_option("--results", results_path, "Results JSON from run/sweep");
    cmd_table->add_option("--out", out, "Output file (stdout when omitted)");
    cmd_table->add_option("--format", format, "csv | json");

    std::string csv_path;
    CLI::App *cmd_stats = app.add_subcommand("stats", "Summary statistics of an exchange CSV");
    cmd_stats->add_option("csv", csv_path, "Per-exchange CSV file")->required();
    cmd_stats->add_option("--out", out, "Output file (stdout when omitted)");
    cmd_stats->add_option("--format", format, "csv | json");

    CLI::App *cmd_validate = app.add_subcommand("validate", "Validate a scenario file");
    cmd_validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) {
        ScenarioHandle scenario;
        if (int rc = load_scenario(scenario_path, has_seed, seed, scenario))
            return rc;
        ResultHandle result;
        if (uwbsim_status s = uwbsim_run(scenario.ptr, &result.ptr))
            return report_failure(s, "run");
        if (out.empty())
            out = "run_result";
        return write_outputs(result, out);
    }

    if (cmd_sweep->parsed()) {
        ScenarioHandle scenario;
        if (int rc = load_scenario(scenario_path, has_seed, seed, scenario))
            return rc;
        ResultHandle result;
        if (uwbsim_status s = uwbsim_sweep(scenario.ptr, &result.ptr))
            return report_failure(s, "sweep");
        if (out.empty())
            out = "sweep_result";
        return write_outputs(result, out);
    }

    if (cmd_table->parsed()) {
        StringHandle text;
        if (uwbsim_status s =
                uwbsim_table(table_id.c_str(), results_path.empty() ? nullptr : results_path.c_str(),
                             format.c_str(), &text.ptr))
            return report_failure(s, "table " + table_id);
        return emit(text.ptr, out);
    }

    if (cmd_stats->parsed()) {
        StringHandle text;
        if (uwbsim_status s = uwbsim_stats(csv_path.c_str(), format.c_str(), &text.ptr))
            return report_failure(s, csv_path);
        return emit(text.ptr, out);
    }

    if (cmd_validate->parsed()) {
        ScenarioHandle scenario;
        if (uwbsim_status s = uwbsim_scenario_from_file(scenario_path.c_str(), &scenario.ptr))
            return report_failure(s, scenario_path);
        StringHandle text;
        if (uwbsim_status s = uwbsim_scenario_describe(scenario.ptr, &text.ptr))
            return report_failure(s, "describe");
        std::printf("ok: %s\n", text.ptr);
        return 0;
    }

    return 1;
}
