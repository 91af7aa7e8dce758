// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmeas: runs a measurement scenario and writes its table as CSV or JSON.
//
// Exit status: 0 when every check holds, 1 when a check fails, 2 on configuration or
// numerical errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmeas/report.hpp"

namespace {

using qmeas::report::ScenarioConfig;

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid_n;
    std::optional<double> grid_span;
    std::optional<double> tol;
    std::vector<std::string> sets;
    std::string scenario;  // validate only
};

void add_common(CLI::App *app, Flags &f) {
    app->add_option("--config", f.config, "JSON configuration file");
    app->add_option("--out", f.out, "output file (default: stdout)");
    app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--seed", f.seed, "base seed of the random sweeps");
    app->add_option("--grid-n", f.grid_n, "position grid points");
    app->add_option("--grid-span", f.grid_span, "half-width of the position domain");
    app->add_option("--tol", f.tol, "tolerance of exact finite-dimensional identities");
    app->add_option("--set", f.sets, "scenario parameter, key=value (repeatable)");
}

std::string describe(qmeas::report::Scenario s) {
    std::string text = "Parameters:\n";
    for (const auto &p : qmeas::report::scenario_parameters(s)) {
        text += "  " + p.key + (p.required ? " (required)" : "");
        if (!p.fallback.is_null()) {
            text += " [default " + p.fallback.dump() + "]";
        }
        text += ": " + p.help + "\n";
    }
    text += "Columns:";
    for (const auto &c : qmeas::report::scenario_columns(s)) {
        text += " " + c;
    }
    return text + "\n";
}

ScenarioConfig build_config(const Flags &f, std::optional<qmeas::report::Scenario> scenario) {
    nlohmann::json j = nlohmann::json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw qmeas::report::ConfigError(std::vector<qmeas::report::Diagnostic>{{"--config", "cannot open " + f.config}});
        }
        j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) {
            throw qmeas::report::ConfigError(std::vector<qmeas::report::Diagnostic>{{"--config", "not valid JSON: " + f.config}});
        }
    }
    if (scenario) {
        j["scenario"] = qmeas::report::scenario_name(*scenario);
    } else if (!f.scenario.empty()) {
        j["scenario"] = f.scenario;
    }
    ScenarioConfig c = qmeas::report::config_from_json(j);
    for (const auto &s : f.sets) {
        qmeas::report::apply_override(c, s);
    }
    if (!f.out.empty()) {
        c.out = f.out;
    }
    if (!f.format.empty()) {
        c.format = *qmeas::report::parse_format(f.format);
    }
    if (f.seed) {
        c.seed = *f.seed;
    }
    if (f.grid_n) {
        c.grid_n = f.grid_n;
    }
    if (f.grid_span) {
        c.grid_span = f.grid_span;
    }
    if (f.tol) {
        c.tol = *f.tol;
    }
    return c;
}

void print_diagnostics(const std::vector<qmeas::report::Diagnostic> &d) {
    for (const auto &x : d) {
        std::cerr << "error: " << (x.key.empty() ? "config" : x.key) << ": " << x.message << "\n";
    }
}

int run_scenario(const Flags &f, qmeas::report::Scenario s) {
    const ScenarioConfig c = build_config(f, s);
    const qmeas::report::RunReport r = qmeas::report::run(c);
    qmeas::report::write_report(r, c);
    for (const auto &ch : r.checks) {
        std::fprintf(stderr, "%s  %s: %.6g %s %.6g (margin %.3g)\n", ch.passed ? "PASS" : "FAIL", ch.name.c_str(),
                     ch.value, ch.relation.c_str(), ch.bound, ch.margin);
    }
    for (const auto &[k, v] : r.diagnostics) {
        std::fprintf(stderr, "info  %s = %.17g\n", k.c_str(), v);
    }
    std::fprintf(stderr, "%zu rows, %d threads, %.3f s\n", r.rows.size(), r.threads, r.wall_time_s);
    return r.passed() ? 0 : 1;
}

int run_validate(const Flags &f) {
    const ScenarioConfig c = build_config(f, std::nullopt);
    const auto d = qmeas::report::validate(c);
    if (d.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    print_diagnostics(d);
    return 2;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulate quantum measurements and tabulate their noise and disturbance."};
    app.require_subcommand(1);

    Flags flags;
    std::optional<qmeas::report::Scenario> chosen;
    for (const auto s : qmeas::report::all_scenarios()) {
        const std::string name(qmeas::report::scenario_name(s));
        CLI::App *sub = app.add_subcommand(name, "run the " + name + " scenario");
        sub->footer(describe(s));
        add_common(sub, flags);
        sub->callback([&chosen, s] { chosen = s; });
    }
    CLI::App *val = app.add_subcommand("validate", "check a configuration without running it");
    add_common(val, flags);
    val->add_option("--scenario", flags.scenario, "scenario name when the config file does not give one");

    CLI11_PARSE(app, argc, argv);

    try {
        if (val->parsed()) {
            return run_validate(flags);
        }
        return run_scenario(flags, *chosen);
    } catch (const qmeas::report::ConfigError &e) {
        print_diagnostics(e.diagnostics());
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
