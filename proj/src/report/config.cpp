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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "qmeas/report.hpp"

namespace qmeas::report {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 8> kNames{{
    {Scenario::two_state, "two-state"},
    {Scenario::weak_sweep, "weak-sweep"},
    {Scenario::successive_xp, "successive-xp"},
    {Scenario::joint_ak, "joint-ak"},
    {Scenario::compare_joint_successive, "compare-joint-successive"},
    {Scenario::ozawa_gap, "ozawa-gap"},
    {Scenario::dilation_check, "dilation-check"},
    {Scenario::profile_sweep, "profile-sweep"},
}};

std::string joined(const std::vector<Diagnostic> &d) {
    std::string s = "invalid configuration:";
    for (const auto &x : d) {
        s += " [" + x.key + "] " + x.message + ";";
    }
    return s;
}

ParamSpec num(std::string key, bool required, json fallback, std::string help) {
    return {std::move(key), ParamKind::number, required, std::move(fallback), std::move(help)};
}
ParamSpec integer(std::string key, bool required, json fallback, std::string help) {
    return {std::move(key), ParamKind::integer, required, std::move(fallback), std::move(help)};
}

bool kind_matches(const json &v, ParamKind kind) {
    switch (kind) {
        case ParamKind::number:
            return v.is_number();
        case ParamKind::integer:
            return v.is_number_integer() || (v.is_number() && std::floor(v.get<double>()) == v.get<double>());
        case ParamKind::vec3:
            return v.is_array() && v.size() == 3 &&
                   std::all_of(v.begin(), v.end(), [](const json &e) { return e.is_number(); });
        case ParamKind::number_list:
            return v.is_array() && !v.empty() &&
                   std::all_of(v.begin(), v.end(), [](const json &e) { return e.is_number(); });
        case ParamKind::text:
            return v.is_string();
    }
    return false;
}

std::string_view kind_label(ParamKind kind) {
    switch (kind) {
        case ParamKind::number:
            return "a number";
        case ParamKind::integer:
            return "an integer";
        case ParamKind::vec3:
            return "an array of three numbers";
        case ParamKind::number_list:
            return "a non-empty array of numbers";
        case ParamKind::text:
            return "a string";
    }
    return "";
}

// Collects diagnostics for one config; values that fail their type check are not range-checked.
class Checker {
   public:
    explicit Checker(const json &p) : p_(p) {}

    bool has(const std::string &k) const { return p_.contains(k) && !p_.at(k).is_null() && !bad_.count(k); }
    double number(const std::string &k) const { return p_.at(k).get<double>(); }

    void type(const ParamSpec &s) {
        if (!p_.contains(s.key) || p_.at(s.key).is_null()) {
            if (s.required) {
                add(s.key, "missing required parameter");
            }
            return;
        }
        if (!kind_matches(p_.at(s.key), s.kind)) {
            add(s.key, "must be " + std::string(kind_label(s.kind)));
            bad_.insert(s.key);
        }
    }

    void require(const std::string &k) {
        if (!p_.contains(k) || p_.at(k).is_null()) {
            add(k, "missing required parameter");
        }
    }

    void positive(const std::string &k) {
        if (has(k) && !(number(k) > 0.0 && std::isfinite(number(k)))) {
            add(k, "must be positive and finite");
        }
    }

    void range(const std::string &k, double lo, double hi) {
        if (has(k) && !(number(k) >= lo && number(k) <= hi)) {
            add(k, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
        }
    }

    void list_range(const std::string &k, double lo, double hi, bool integral = false) {
        if (!has(k)) {
            return;
        }
        for (const auto &e : p_.at(k)) {
            const double v = e.get<double>();
            if (!(v >= lo && v <= hi) || (integral && std::floor(v) != v)) {
                add(k, std::string("entries must be ") + (integral ? "integers " : "") + "in [" + fmt(lo) +
                           ", " + fmt(hi) + "]");
                return;
            }
        }
    }

    void add(std::string key, std::string msg) { out.push_back({std::move(key), std::move(msg)}); }

    std::vector<Diagnostic> out;

   private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    const json &p_;
    std::set<std::string> bad_;
};

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : Error(joined(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string_view scenario_name(Scenario s) {
    for (const auto &[k, v] : kNames) {
        if (k == s) {
            return v;
        }
    }
    return "";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
    for (const auto &[k, v] : kNames) {
        if (v == name) {
            return k;
        }
    }
    return std::nullopt;
}

const std::vector<Scenario> &all_scenarios() {
    static const std::vector<Scenario> all = [] {
        std::vector<Scenario> v;
        for (const auto &kv : kNames) {
            v.push_back(kv.first);
        }
        return v;
    }();
    return all;
}

std::string_view format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

std::optional<Format> parse_format(std::string_view name) {
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "json") {
        return Format::json;
    }
    return std::nullopt;
}

ScenarioConfig config_from_json(const json &j) {
    std::vector<Diagnostic> d;
    ScenarioConfig c;
    if (!j.is_object()) {
        throw ConfigError(std::vector<Diagnostic>{{"", "configuration must be a JSON object"}});
    }
    static const std::set<std::string> known{"scenario", "parameters", "output", "seed", "grid", "tol"};
    for (const auto &[k, v] : j.items()) {
        if (!known.count(k)) {
            d.push_back({k, "unknown configuration key"});
        }
    }
    if (!j.contains("scenario")) {
        d.push_back({"scenario", "missing required parameter"});
    } else if (!j["scenario"].is_string() || !parse_scenario(j["scenario"].get<std::string>())) {
        d.push_back({"scenario", "unknown scenario " + j["scenario"].dump()});
    } else {
        c.scenario = *parse_scenario(j["scenario"].get<std::string>());
    }
    if (j.contains("parameters")) {
        if (j["parameters"].is_object()) {
            c.parameters = j["parameters"];
        } else {
            d.push_back({"parameters", "must be an object"});
        }
    }
    if (j.contains("output")) {
        const json &o = j["output"];
        if (!o.is_object()) {
            d.push_back({"output", "must be an object with path and format"});
        } else {
            if (o.contains("path")) {
                if (o["path"].is_string()) {
                    c.out = o["path"].get<std::string>();
                } else {
                    d.push_back({"output.path", "must be a string"});
                }
            }
            if (o.contains("format")) {
                const auto f = o["format"].is_string() ? parse_format(o["format"].get<std::string>()) : std::nullopt;
                if (f) {
                    c.format = *f;
                } else {
                    d.push_back({"output.format", "must be \"csv\" or \"json\""});
                }
            }
        }
    }
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
            c.seed = j["seed"].get<std::uint64_t>();
        } else {
            d.push_back({"seed", "must be a non-negative integer"});
        }
    }
    if (j.contains("grid")) {
        const json &g = j["grid"];
        if (!g.is_object()) {
            d.push_back({"grid", "must be an object with n and/or span"});
        } else {
            if (g.contains("n")) {
                if (g["n"].is_number_integer()) {
                    c.grid_n = g["n"].get<int>();
                } else {
                    d.push_back({"grid.n", "must be an integer"});
                }
            }
            if (g.contains("span")) {
                if (g["span"].is_number()) {
                    c.grid_span = g["span"].get<double>();
                } else {
                    d.push_back({"grid.span", "must be a number"});
                }
            }
        }
    }
    if (j.contains("tol")) {
        if (j["tol"].is_number()) {
            c.tol = j["tol"].get<double>();
        } else {
            d.push_back({"tol", "must be a number"});
        }
    }
    if (!d.empty()) {
        throw ConfigError(std::move(d));
    }
    return c;
}

json config_to_json(const ScenarioConfig &c) {
    json j{{"scenario", scenario_name(c.scenario)},
           {"parameters", c.parameters},
           {"output", {{"path", c.out}, {"format", format_name(c.format)}}},
           {"seed", c.seed},
           {"tol", c.tol}};
    json g = json::object();
    if (c.grid_n) {
        g["n"] = *c.grid_n;
    }
    if (c.grid_span) {
        g["span"] = *c.grid_span;
    }
    j["grid"] = g;
    return j;
}

void apply_override(ScenarioConfig &c, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(std::vector<Diagnostic>{{std::string(assignment), "override must look like key=value"}});
    }
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) {
        v = text;
    }
    c.parameters[key] = v;
}

const std::vector<ParamSpec> &scenario_parameters(Scenario s) {
    static const std::map<Scenario, std::vector<ParamSpec>> specs{
        {Scenario::two_state,
         {{"a", ParamKind::vec3, true, nullptr, "Bloch vector of the state, |a| <= 1"},
          {"b", ParamKind::vec3, true, nullptr, "B = b.J"},
          num("theta", false, 0.0, "weak-measurement angle in [0, pi/4] for the OLW columns")}},
        {Scenario::weak_sweep,
         {integer("dim", false, 2, "Hilbert-space dimension"),
          integer("outcomes", false, 2, "number of distinct eigenvalues of A (2..4)"),
          integer("steps", false, 17, "theta samples on [0, theta_max]")}},
        {Scenario::successive_xp,
         {{"profile", ParamKind::text, false, "gaussian", "gaussian or smoothed-square"},
          num("sigma_x", false, nullptr, "Gaussian profile width (required for profile=gaussian)"),
          num("alpha", false, nullptr, "smoothed-square edge sharpness"),
          num("b", false, nullptr, "smoothed-square half-width"),
          num("sigma_p", true, nullptr, "momentum detector resolution"),
          num("var_x", false, nullptr, "position variance of the pure Gaussian test state; default saturates"),
          num("p_mean", false, 0.0, "mean momentum of the test state"),
          integer("random_states", false, 0, "additional random mixed Gaussian states")}},
        {Scenario::joint_ak,
         {num("b", true, nullptr, "width parameter of f"),
          {"a", ParamKind::number_list, false, nullptr, "widths of g; default [b/2, b, 2b]"},
          num("var_x", false, nullptr, "position variance of the pure Gaussian test state; default b^2/2"),
          num("p_mean", false, 0.0, "mean momentum of the test state")}},
        {Scenario::compare_joint_successive,
         {num("sigma_x", true, nullptr, "position resolution"),
          num("sigma_p", true, nullptr, "momentum resolution, sigma_x*sigma_p <= 1/4"),
          num("var_x", false, nullptr, "variance of the test state; default sigma_x/(2 sigma_p)")}},
        {Scenario::ozawa_gap,
         {integer("samples", false, 10000, "random (a, b, theta) instances"),
          num("theta_max", false, std::numbers::pi / 4.0, "upper end of the theta range, <= pi/4")}},
        {Scenario::dilation_check,
         {integer("samples", false, 100, "random (rho, B) instances per outcome count"),
          {"outcomes", ParamKind::number_list, false, json::array({2, 3, 4}), "outcome counts (2..4)"},
          integer("dim", false, nullptr, "Hilbert-space dimension; default max(outcomes)")}},
        {Scenario::profile_sweep,
         {{"alpha_b", ParamKind::number_list, false, nullptr,
           "alpha*b values of the smoothed squares; default 21 log-spaced values in [0.5, 20]"},
          num("b", false, 1.0, "half-width of the smoothed squares"),
          {"gaussian_sigma", ParamKind::number_list, false, json::array({0.5, 1.0, 2.0}), "Gaussian widths"},
          {"perturbation", ParamKind::number_list, false, json::array({-0.05, 0.05, 0.2}),
           "c of the tabulated profiles (1 + c u^2) exp(-u^2/4)"},
          num("sigma_p", false, 1.0, "momentum resolution used for the saturation columns")}},
    };
    return specs.at(s);
}

const std::vector<std::string> &scenario_columns(Scenario s) {
    static const std::map<Scenario, std::vector<std::string>> cols{
        {Scenario::two_state,
         {"a_x", "a_y", "a_z", "b_x", "b_y", "b_z", "theta", "var_b_rho", "var_b_hat", "delta_var", "eta2", "cov_rho",
          "cov_hat", "jx_jy_product", "commutator_rhs", "engine_max_error", "ideal_lhs", "sharp_rhs", "olw_lhs",
          "olw_rhs", "olw_gap", "olw_lhs_weak"}},
        {Scenario::weak_sweep,
         {"theta", "f", "g", "epsilon", "eta2", "eta_theta2", "f_eta2", "interpolation_error", "reconstruction_error",
          "uniformity_error"}},
        {Scenario::successive_xp,
         {"state", "var_x_rho", "var_p_rho", "sigma_x2", "eta_p2", "eta_p2_grid", "sigma_p2", "measured_var_x",
          "measured_var_p", "product", "line2", "bound", "margin"}},
        {Scenario::joint_ak,
         {"a", "b", "g_norm", "measured_mean_x", "measured_var_x", "measured_mean_p", "measured_var_p", "product",
          "eta_p2", "eta_p2_closed", "eta_x2", "eta_x2_closed"}},
        {Scenario::compare_joint_successive,
         {"sigma_x", "sigma_p", "a2", "b2", "var_x_joint", "var_x_successive", "var_p_joint", "var_p_successive",
          "diff_x_grid", "diff_x_closed", "diff_p_grid", "diff_p_derived", "diff_p_printed", "post_state_mismatch"}},
        {Scenario::ozawa_gap,
         {"sample", "a_x", "a_y", "a_z", "b_x", "b_y", "b_z", "theta", "lhs", "rhs", "gap", "lhs_weak", "gap_weak",
          "ideal_lhs", "sharp_rhs"}},
        {Scenario::dilation_check,
         {"sample", "outcomes", "dim", "beta", "rho_hat_error", "eta_dilation", "eta_intrinsic", "eta_error"}},
        {Scenario::profile_sweep,
         {"profile", "shape_parameter", "alpha", "b", "sigma_x2", "sigma_x2_quadrature", "eta_p2", "eta_p2_quadrature", "ratio",
          "saturating_var_x", "saturating_product"}},
    };
    return cols.at(s);
}

std::vector<Diagnostic> validate(const ScenarioConfig &c) {
    const json &p = c.parameters;
    Checker ck(p);
    if (!p.is_object()) {
        ck.add("parameters", "must be an object");
        return ck.out;
    }
    const auto &specs = scenario_parameters(c.scenario);
    for (const auto &[k, v] : p.items()) {
        const bool known = std::any_of(specs.begin(), specs.end(), [&k](const ParamSpec &s) { return s.key == k; });
        if (!known) {
            ck.add(k, "unknown parameter for scenario " + std::string(scenario_name(c.scenario)));
        }
    }
    for (const auto &s : specs) {
        ck.type(s);
    }

    if (c.grid_n && (*c.grid_n < 16 || *c.grid_n > 8192)) {
        ck.add("grid.n", "must lie in [16, 8192]");
    }
    if (c.grid_span && !(*c.grid_span > 0.0 && std::isfinite(*c.grid_span))) {
        ck.add("grid.span", "must be positive and finite");
    }
    if (!(c.tol > 0.0 && c.tol < 1.0)) {
        ck.add("tol", "must lie in (0, 1)");
    }

    switch (c.scenario) {
        case Scenario::two_state: {
            if (ck.has("a")) {
                const auto a = p["a"].get<std::vector<double>>();
                if (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] > 1.0 + 1e-12) {
                    ck.add("a", "Bloch vector must satisfy |a| <= 1");
                }
            }
            ck.range("theta", 0.0, std::numbers::pi / 4.0);
            break;
        }
        case Scenario::weak_sweep: {
            ck.range("dim", 2, 6);
            ck.range("outcomes", 2, 4);
            ck.range("steps", 2, 100001);
            if (ck.has("dim") && ck.has("outcomes") && ck.number("outcomes") > ck.number("dim")) {
                ck.add("outcomes", "cannot exceed dim");
            }
            break;
        }
        case Scenario::successive_xp: {
            const std::string profile = ck.has("profile") ? p["profile"].get<std::string>() : "gaussian";
            if (profile == "gaussian") {
                ck.require("sigma_x");
                ck.positive("sigma_x");
                for (const char *k : {"alpha", "b"}) {
                    if (ck.has(k)) {
                        ck.add(k, "only used with profile=smoothed-square");
                    }
                }
            } else if (profile == "smoothed-square") {
                ck.require("alpha");
                ck.require("b");
                ck.positive("alpha");
                ck.positive("b");
                if (ck.has("alpha") && ck.has("b") && ck.number("alpha") > 0 && ck.number("b") > 0) {
                    const double ab = ck.number("alpha") * ck.number("b");
                    if (ab < 0.01 || ab > 700.0) {
                        ck.add("alpha", "alpha*b must lie in [0.01, 700]");
                    }
                }
                if (ck.has("sigma_x")) {
                    ck.add("sigma_x", "derived from the profile when profile=smoothed-square");
                }
            } else {
                ck.add("profile", "must be \"gaussian\" or \"smoothed-square\"");
            }
            ck.positive("sigma_p");
            ck.positive("var_x");
            ck.range("p_mean", -1e3, 1e3);
            ck.range("random_states", 0, 100000);
            break;
        }
        case Scenario::joint_ak: {
            ck.positive("b");
            ck.list_range("a", 1e-300, 1e300);
            ck.positive("var_x");
            ck.range("p_mean", -1e3, 1e3);
            break;
        }
        case Scenario::compare_joint_successive: {
            ck.positive("sigma_x");
            ck.positive("sigma_p");
            ck.positive("var_x");
            if (ck.has("sigma_x") && ck.has("sigma_p")) {
                const double s = ck.number("sigma_x") * ck.number("sigma_p");
                if (s > 0.25 * (1.0 + 1e-12)) {
                    ck.add("sigma_p", "sigma_x*sigma_p = " + std::to_string(s) +
                                          " exceeds 1/4: a joint measurement with the same disturbance as the "
                                          "successive one exists only when sigma_x*sigma_p <= 1/4");
                }
            }
            break;
        }
        case Scenario::ozawa_gap: {
            ck.range("samples", 1, 1e7);
            ck.range("theta_max", 0.0, std::numbers::pi / 4.0);
            break;
        }
        case Scenario::dilation_check: {
            ck.range("samples", 1, 1e6);
            ck.list_range("outcomes", 2, 4, true);
            ck.range("dim", 2, 8);
            if (ck.has("dim") && ck.has("outcomes")) {
                for (const auto &e : p["outcomes"]) {
                    if (e.get<double>() > ck.number("dim")) {
                        ck.add("dim", "must be at least every entry of outcomes");
                        break;
                    }
                }
            }
            break;
        }
        case Scenario::profile_sweep: {
            ck.list_range("alpha_b", 0.01, 700.0);
            ck.positive("b");
            ck.list_range("gaussian_sigma", 1e-6, 1e6);
            ck.list_range("perturbation", -0.2, 10.0);
            ck.positive("sigma_p");
            break;
        }
    }
    return ck.out;
}

}  // namespace qmeas::report
