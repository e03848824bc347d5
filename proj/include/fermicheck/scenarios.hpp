// Copyright 2026 The fermicheck Authors
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

// Named, reproducible checks and the aggregate runner behind the CLI.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermicheck/fermion.hpp"
#include "fermicheck/gpt.hpp"
#include "fermicheck/independence.hpp"
#include "fermicheck/linops.hpp"
#include "fermicheck/report.hpp"

namespace fermicheck {

struct ScenarioDescriptor {
    std::string name;
    std::string module;
    std::map<std::string, std::string> parameters;
    std::string description;
};

enum class OutputFormat { Text, Json };

struct RunConfig {
    double tolerance = kPredicateTol;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Text;
    std::optional<std::string> output_path;

    void validate() const {
        if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
            throw std::invalid_argument("tolerance must be a positive finite number");
        }
    }
};

struct UnknownScenarioError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kProp1Trials = 100;

namespace detail {

struct Scenario {
    ScenarioDescriptor descriptor;
    std::function<Report(const RunConfig &)> body;
};

inline Report car_scenario(const RunConfig &cfg) {
    Report r;
    r.scenario = "car-check";
    for (int n = 2; n <= 6; ++n) {
        const Report sub = check_car(build_modes(n), cfg.tolerance);
        for (auto c : sub.checks) {
            c.name = "n=" + std::to_string(n) + "/" + c.name;
            r.checks.push_back(std::move(c));
        }
    }
    return r;
}

inline Report twirl_scenario(const RunConfig &cfg) {
    const double tol = cfg.tolerance;
    const ModeSystem ms = build_modes(2);
    const TwirlGroup group = parity_twirl_group(ms, ModeSet{0}, ModeSet{1});
    Report r;
    r.scenario = "twirl-identity";

    const QuantumState rho = counterexample_state();
    const QuantumState once = twirl(rho, group);
    const double gap = (once.op() - Matrix::identity(4) * 0.25).max_abs();
    r.add("twirl_of_mixed_bell_state_is_identity_over_4", gap <= tol, gap);

    const double idem = (twirl(once, group).op() - once.op()).max_abs();
    r.add("twirl_idempotent", idem <= tol, idem);

    const Matrix phi_p = Matrix::column({1, 0, 0, 1}, Field::Real);
    const Matrix phi_m = Matrix::column({1, 0, 0, -1}, Field::Real);
    const QuantumState bell(0.5 * (phi_p * phi_p.transpose()), {2, 2});
    const Matrix expected = 0.25 * (phi_p * phi_p.transpose() + phi_m * phi_m.transpose());
    const double bell_gap = (twirl(bell, group).op() - expected).max_abs();
    r.add("twirl_of_phi_plus_mixes_phi_minus", bell_gap <= tol, bell_gap);
    return r;
}

struct TomographyRow {
    int composite_dim;
    int product_rank;
    int holistic_dim;
    bool locally_tomographic;
};

inline TomographyRow expected_row(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::ComplexQubitPair: return {16, 16, 0, true};
        case InstanceKind::RealQubitPair: return {10, 9, 1, false};
        case InstanceKind::FermiTwoModes: return {8, 4, 4, false};
    }
    throw std::invalid_argument("unknown instance");
}

inline Report tomography_scenario(InstanceKind kind, const RunConfig &cfg) {
    const double tol = cfg.tolerance;
    const CompositeModel cm = build_instance(kind);
    const SubspaceBasis span = product_span(cm);
    const SubspaceBasis holistic = holistic_subspace(cm);
    const bool lt = is_locally_tomographic(cm);
    const TomographyRow want = expected_row(kind);

    Report r;
    r.scenario = "gpt-tomography-" + std::string(instance_name(kind));
    const std::string row = "(" + std::to_string(cm.composite_dim()) + ", " + std::to_string(span.dimension()) +
                            ", " + std::to_string(holistic.dimension()) + ")";
    const bool row_ok = cm.composite_dim() == want.composite_dim && span.dimension() == want.product_rank &&
                        holistic.dimension() == want.holistic_dim;
    r.add("dimension_table", row_ok, 0.0, "(composite_dim, product_span, holistic) = " + row);

    const int missing = cm.composite_dim() - span.dimension() - holistic.dimension();
    r.add("decomposition_complete", missing == 0, static_cast<double>(std::abs(missing)));

    double visibility = 0.0;
    for (const auto &h : holistic.vectors) {
        visibility = std::max(visibility, max_local_visibility(cm, h));
    }
    r.add("holistic_invisible_to_local_effects", visibility <= tol, visibility);

    const bool single_ok = cm.system_a().effect_rank() == cm.system_a().ambient_dim() &&
                           cm.system_b().effect_rank() == cm.system_b().ambient_dim();
    r.add("single_systems_tomographic", single_ok, 0.0);

    r.add("effect_rank_agrees_with_holistic_dim", lt == (holistic.dimension() == 0), 0.0);

    const std::string verdict = std::string("locally_tomographic=") + (lt ? "true" : "false");
    r.add(want.locally_tomographic ? "locally_tomographic" : "not_locally_tomographic", lt == want.locally_tomographic,
          0.0, verdict);
    return r;
}

inline Report prop1_scenario(const RunConfig &cfg) {
    const CompositeModel cm = build_instance(InstanceKind::ComplexQubitPair);
    Report r = prop1_check(cm, kProp1Trials, cfg.seed, cfg.tolerance);
    r.scenario = "prop1";
    return r;
}

inline Vec maximally_mixed(const CompositeModel &cm) { return cm.from_operator(Matrix::identity(4) * 0.25); }

inline Report prop2_scenario(InstanceKind kind, const RunConfig &cfg) {
    const double tol = cfg.tolerance;
    const CompositeModel cm = build_instance(kind);
    Prop2Result res = prop2_witness(cm, maximally_mixed(cm), tol);
    Report r = std::move(res.report);
    r.scenario = "prop2-witness-" + std::string(instance_name(kind));
    if (!res.found) {
        return r;
    }
    const Matrix op = cm.to_operator(res.witness);
    if (kind == InstanceKind::FermiTwoModes) {
        const double gap = (op - counterexample_state().op()).max_abs();
        r.add("witness_equals_mixed_bell_state", gap <= tol, gap);
    } else if (kind == InstanceKind::RealQubitPair) {
        const Matrix yy = kron(pauli::Y(), pauli::Y());
        const Matrix expected = (Matrix::identity(4).as_complex() + yy) * 0.25;
        const double gap = (op - expected).max_abs();
        r.add("witness_equals_identity_plus_yy_over_4", gap <= tol, gap);
        const auto spectrum = herm_eigen(op);
        const double want[4] = {0.0, 0.0, 0.5, 0.5};
        double sgap = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            sgap = std::max(sgap, std::abs(spectrum[k] - want[k]));
        }
        r.add("witness_spectrum_0_0_half_half", sgap <= tol, sgap);
    }
    return r;
}

inline Report cross_module_scenario(const RunConfig &cfg) {
    const double tol = cfg.tolerance;
    const CompositeModel cm = build_instance(InstanceKind::FermiTwoModes);
    const Prop2Result res = prop2_witness(cm, maximally_mixed(cm), tol);
    Report r;
    r.scenario = "cross-module-verdict";
    if (!res.found) {
        r.add("witness_found", false, 0.0);
        return r;
    }
    const ModeSystem ms = build_modes(2);
    const QuantumState s(cm.to_operator(res.witness), {2, 2});
    const IndependenceVerdict v = assess_independence(ms, s, {ModeSet{0}, ModeSet{1}}, tol);
    r.add("operationally_independent", v.operationally_independent, v.max_residual, v.witness);
    const double prod = product_residual(s);
    r.add("not_product_state", !v.product_state, prod);
    r.add("not_independently_preparable", !v.independently_preparable, prod);
    return r;
}

inline std::vector<Scenario> registry() {
    std::vector<Scenario> out;
    out.push_back({{"car-check", "fermion", {{"modes", "2..6"}},
                    "canonical anticommutation relations of the Jordan-Wigner modes"},
                   car_scenario});
    out.push_back({{"counterexample", "independence", {},
                    "mixed Bell state: operationally independent but not independently preparable"},
                   [](const RunConfig &cfg) { return counterexample_scenario(cfg.tolerance); }});
    out.push_back({{"cross-module-verdict", "gpt+independence", {{"instance", "fermi-two-modes"}},
                    "holistic witness state re-examined by the independence checks"},
                   cross_module_scenario});
    out.push_back({{"footnote", "fermion", {{"modes", "2"}},
                    "sign of (f_B + f_B^dag) on |11> versus the factor-wise action"},
                   [](const RunConfig &cfg) { return footnote_check(build_modes(2), cfg.tolerance); }});
    for (auto kind : kAllInstances) {
        const std::string inst(instance_name(kind));
        out.push_back({{"gpt-tomography-" + inst, "gpt", {{"instance", inst}},
                        "product span, holistic subspace and local tomography of " + inst},
                       [kind](const RunConfig &cfg) { return tomography_scenario(kind, cfg); }});
    }
    out.push_back({{"prop1", "gpt", {{"instance", "complex-qubit-pair"}, {"trials", std::to_string(kProp1Trials)}},
                    "local tomography: operational independence iff product, on seeded random states"},
                   prop1_scenario});
    for (auto kind : {InstanceKind::FermiTwoModes, InstanceKind::RealQubitPair}) {
        const std::string inst(instance_name(kind));
        out.push_back({{"prop2-witness-" + inst, "gpt", {{"instance", inst}, {"base", "I/4"}},
                        "operationally independent non-product state built from a holistic direction"},
                       [kind](const RunConfig &cfg) { return prop2_scenario(kind, cfg); }});
    }
    out.push_back({{"twirl-identity", "independence", {}, "parity twirl of the mixed Bell state is I/4"},
                   twirl_scenario});
    std::sort(out.begin(), out.end(),
              [](const Scenario &a, const Scenario &b) { return a.descriptor.name < b.descriptor.name; });
    return out;
}

}  // namespace detail

/// Registered scenarios, ordered by name.
inline std::vector<ScenarioDescriptor> list_scenarios() {
    std::vector<ScenarioDescriptor> out;
    for (const auto &s : detail::registry()) {
        out.push_back(s.descriptor);
    }
    return out;
}

/// Runs one scenario. Throws UnknownScenarioError for unregistered names; a
/// scenario that throws yields a single failing "completed" check.
inline Report run(const std::string &name, const RunConfig &cfg) {
    cfg.validate();
    for (const auto &s : detail::registry()) {
        if (s.descriptor.name == name) {
            Report r;
            try {
                r = s.body(cfg);
            } catch (const std::exception &e) {
                r.add("completed", false, 0.0, e.what());
            }
            r.scenario = name;
            r.tol = cfg.tolerance;
            r.seed = cfg.seed;
            return r;
        }
    }
    throw UnknownScenarioError("unknown scenario '" + name + "'");
}

struct AggregateReport {
    std::vector<Report> reports;
    double tol = 0.0;
    std::uint64_t seed = 0;

    bool passed() const {
        return std::all_of(reports.begin(), reports.end(), [](const Report &r) { return r.passed(); });
    }

    /// One check per scenario; the residual is the number of failing checks.
    Report summary() const {
        Report s;
        s.scenario = "run-all";
        s.tol = tol;
        s.seed = seed;
        for (const auto &r : reports) {
            const std::size_t failed = r.checks.size() - r.pass_count();
            s.add(r.scenario, r.passed(), static_cast<double>(failed),
                  std::to_string(r.pass_count()) + "/" + std::to_string(r.checks.size()) + " checks pass");
        }
        return s;
    }
};

/// Runs every registered scenario in name order.
inline AggregateReport run_all(const RunConfig &cfg) {
    cfg.validate();
    AggregateReport agg;
    agg.tol = cfg.tolerance;
    agg.seed = cfg.seed;
    for (const auto &d : list_scenarios()) {
        agg.reports.push_back(run(d.name, cfg));
    }
    return agg;
}

/// The summary report's fields plus "reports": the per-scenario reports.
inline std::string to_json(const AggregateReport &agg) {
    std::string out = "{\n" + detail::report_fields(agg.summary(), "  ") + ",\n  \"reports\": [";
    for (std::size_t i = 0; i < agg.reports.size(); ++i) {
        out += (i == 0 ? "\n" : ",\n") + to_json(agg.reports[i], 4);
    }
    out += "\n  ]\n}";
    return out;
}

inline std::string to_text(const AggregateReport &agg) {
    std::string out;
    for (const auto &r : agg.reports) {
        out += to_text(r);
    }
    const Report s = agg.summary();
    out += "run-all: " + std::to_string(s.pass_count()) + "/" + std::to_string(s.checks.size()) +
           " scenarios pass\n";
    return out;
}

inline std::string descriptors_to_json(const std::vector<ScenarioDescriptor> &ds) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &d : ds) {
        arr.push_back({{"name", d.name}, {"module", d.module}, {"parameters", d.parameters},
                       {"description", d.description}});
    }
    return arr.dump(2);
}

}  // namespace fermicheck
