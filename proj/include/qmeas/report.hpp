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

#pragma once

// Scenario runner behind the qmeas command line tool.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qmeas/errors.hpp"
#include "qmeas/random.hpp"

namespace qmeas::report {

enum class Scenario {
    two_state,
    weak_sweep,
    successive_xp,
    joint_ak,
    compare_joint_successive,
    ozawa_gap,
    dilation_check,
    profile_sweep,
};

enum class Format { csv, json };

/// "two-state", "weak-sweep", ...
std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<Scenario> &all_scenarios();

std::string_view format_name(Format f);
std::optional<Format> parse_format(std::string_view name);

struct ScenarioConfig {
    Scenario scenario = Scenario::two_state;
    nlohmann::json parameters = nlohmann::json::object();
    std::string out;  ///< empty writes to stdout
    Format format = Format::csv;
    std::uint64_t seed = kDefaultSeed;
    std::optional<int> grid_n;
    std::optional<double> grid_span;  ///< half-width of the position domain
    double tol = 1e-10;               ///< tolerance for exact (finite-dimensional) identities
};

/// A problem with one key of a configuration.
struct Diagnostic {
    std::string key;
    std::string message;
};

class ConfigError : public Error {
   public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

   private:
    std::vector<Diagnostic> diagnostics_;
};

/// Reads {scenario, parameters, output: {path, format}, seed, grid: {n, span}, tol}. Every key is
/// optional except scenario. Throws ConfigError for structural problems (wrong JSON types, unknown
/// scenario or format); parameter values are checked by validate().
ScenarioConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ScenarioConfig &c);

/// "key=value". The value is parsed as JSON when possible and kept as a string otherwise.
void apply_override(ScenarioConfig &c, std::string_view assignment);

enum class ParamKind { number, integer, vec3, number_list, text };

struct ParamSpec {
    std::string key;
    ParamKind kind;
    bool required;
    nlohmann::json fallback;  ///< default when not required; null means "derived at run time"
    std::string help;
};

const std::vector<ParamSpec> &scenario_parameters(Scenario s);

/// Fixed CSV column order of each scenario.
const std::vector<std::string> &scenario_columns(Scenario s);

/// Empty iff run() would start.
std::vector<Diagnostic> validate(const ScenarioConfig &c);

using Cell = std::variant<double, std::int64_t, std::string>;
using Row = std::vector<Cell>;

/// One asserted inequality. margin ≥ 0 (or > 0 for strict checks) means it holds.
struct Check {
    std::string name;
    std::string relation;  ///< "<=", ">=" or ">"
    double value;
    double bound;
    double margin;
    bool passed;
};

Check check_le(std::string name, double value, double bound);
Check check_ge(std::string name, double value, double bound);
Check check_gt(std::string name, double value, double bound);

struct RunReport {
    Scenario scenario;
    nlohmann::json parameters;  ///< with defaults filled in
    std::uint64_t seed;
    std::vector<std::string> columns;
    std::vector<Row> rows;
    std::vector<Check> checks;
    std::map<std::string, double> tolerances;
    std::map<std::string, double> diagnostics;  ///< grid sizes, leakage, minima worth reporting
    int threads;
    double wall_time_s;

    bool passed() const;
};

/// Throws ConfigError if validate() reports anything. Numerical failures (GridError,
/// ConsistencyError, ...) propagate.
RunReport run(const ScenarioConfig &c);

/// Worker count: hardware concurrency, capped by QMEAS_THREADS when set.
int worker_threads();

/// Header plus one line per row, 17 significant digits, '.' decimal separator.
void write_csv(const RunReport &r, std::ostream &os);

/// Rows as objects keyed by column, plus checks, tolerances, diagnostics, seed and wall time.
nlohmann::json to_json(const RunReport &r);

/// Writes to c.out (or stdout) in c.format.
void write_report(const RunReport &r, const ScenarioConfig &c);

}  // namespace qmeas::report
