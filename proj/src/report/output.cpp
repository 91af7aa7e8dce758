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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

#include "qmeas/report.hpp"

namespace qmeas::report {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch;
        if (ch == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

std::string csv_cell(const Cell &c) {
    if (const auto *d = std::get_if<double>(&c)) {
        return format_double(*d);
    }
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    return csv_field(std::get<std::string>(c));
}

json json_cell(const Cell &c) {
    if (const auto *d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? json(*d) : json(nullptr);
    }
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return *i;
    }
    return std::get<std::string>(c);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_csv(const RunReport &r, std::ostream &os) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        os << (i ? "," : "") << r.columns[i];
    }
    os << '\n';
    for (const auto &row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_cell(row[i]);
        }
        os << '\n';
    }
}

json to_json(const RunReport &r) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            o[r.columns[i]] = json_cell(row[i]);
        }
        rows.push_back(std::move(o));
    }
    json checks = json::array();
    for (const auto &c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"relation", c.relation},
                          {"value", finite_or_null(c.value)},
                          {"bound", finite_or_null(c.bound)},
                          {"margin", finite_or_null(c.margin)},
                          {"passed", c.passed}});
    }
    json diag = json::object();
    for (const auto &[k, v] : r.diagnostics) {
        diag[k] = finite_or_null(v);
    }
    return {{"scenario", scenario_name(r.scenario)},
            {"parameters", r.parameters},
            {"seed", r.seed},
            {"columns", r.columns},
            {"rows", rows},
            {"checks", checks},
            {"tolerances", r.tolerances},
            {"diagnostics", diag},
            {"threads", r.threads},
            {"wall_time_s", r.wall_time_s},
            {"passed", r.passed()}};
}

void write_report(const RunReport &r, const ScenarioConfig &c) {
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out, std::ios::binary);
        if (!file) {
            throw Error("cannot open output file " + c.out);
        }
    }
    std::ostream &os = c.out.empty() ? std::cout : file;
    if (c.format == Format::csv) {
        write_csv(r, os);
    } else {
        os << to_json(r).dump(2) << '\n';
    }
    if (!os) {
        throw Error("failed writing the report");
    }
}

}  // namespace qmeas::report
