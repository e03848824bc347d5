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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "fermicheck/cli.hpp"
#include "fermicheck/fermion.hpp"
#include "fermicheck/gpt.hpp"
#include "fermicheck/independence.hpp"

using namespace fermicheck;

namespace {

constexpr double kTight = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(int id, bool ok, const std::string &detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    failures += ok ? 0 : 1;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void counterexample_suite() {
    const auto start = Clock::now();
    const ModeSystem ms = build_modes(2);
    const QuantumState rho = counterexample_state();

    const double ssr = commutator_norm(rho.op(), ms.total_parity());
    const QuantumState tw = twirl(rho, parity_twirl_group(ms, ModeSet{0}, ModeSet{1}));
    const double twirl_gap = (tw.op() - Matrix::identity(4) * 0.25).max_abs();
    const auto [ba, bb] = parity_bases(ms, {ModeSet{0}, ModeSet{1}});
    const auto restricted = is_operationally_independent(rho, ba, bb, kTight);
    const EffectBasis paulis = qubit_pauli_basis();
    const auto unrestricted = is_operationally_independent(rho, paulis, paulis, kTight);
    const double prod = product_residual(rho);
    const double ppt = ppt_min_eigenvalue(rho);
    double off = 0.0;
    bool off_ok = true;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const double mag = std::abs(rho.op()(r, c));
            if (r != c && mag != 0.0) {
                off = std::max(off, mag);
                off_ok = off_ok && std::abs(mag - 0.25) < kTight;
            }
        }
    }
    const double elapsed = seconds_since(start);

    const bool witness_ok = unrestricted.witness_label == "(X,X)" && std::abs(unrestricted.max_residual - 1.0) < kTight;
    const bool ok = ssr < kTight && twirl_gap < kTight && restricted.independent && restricted.max_residual < kTight &&
                    !unrestricted.independent && witness_ok && std::abs(prod - 0.5) < kTight && ppt > -kTight &&
                    off_ok && off == 0.25 && elapsed < 1.0;
    verdict(1, ok,
            "counterexample: ssr=" + fmt(ssr) + " twirl=" + fmt(twirl_gap) + " parity-basis delta=" +
                fmt(restricted.max_residual) + " unrestricted witness " + unrestricted.witness_label + " delta=" +
                fmt(unrestricted.max_residual) + " ||rho-rhoA(x)rhoB||=" + fmt(prod) + " min eig PT=" + fmt(ppt) +
                " off-diagonal=" + fmt(off) + " time=" + fmt(elapsed) + "s");
}

void car_suite() {
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        for (const auto &c : check_car(build_modes(n), kTight).checks) {
            worst = std::max(worst, c.residual);
        }
    }
    const Report fn = footnote_check(build_modes(2), kTight);
    const bool exact = fn.find("jw_action_is_minus_10")->residual == 0.0 &&
                       fn.find("factorwise_action_is_plus_10")->residual == 0.0;
    const double overlap_gap = fn.find("overlap_is_minus_one")->residual;
    const bool ok = worst < kTight && exact && overlap_gap < kTight && fn.passed();
    verdict(2, ok,
            "CAR max residual n=2..6 " + fmt(worst) + ", v1=-|10> and v2=+|10> exact, |<v1,v2>+1|=" +
                fmt(overlap_gap));
}

void dimension_table() {
    const auto start = Clock::now();
    struct Row {
        InstanceKind kind;
        int dim, span, holistic;
    };
    bool ok = true;
    std::string detail;
    for (const Row want : {Row{InstanceKind::ComplexQubitPair, 16, 16, 0}, Row{InstanceKind::RealQubitPair, 10, 9, 1},
                           Row{InstanceKind::FermiTwoModes, 8, 4, 4}}) {
        const CompositeModel cm = build_instance(want.kind);
        const int d = cm.composite_dim();
        const int s = product_span(cm).dimension();
        const int h = holistic_subspace(cm).dimension();
        ok = ok && d == want.dim && s == want.span && h == want.holistic;
        detail += std::string(instance_name(want.kind)) + "=(" + std::to_string(d) + "," + std::to_string(s) + "," +
                  std::to_string(h) + ") ";
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 1.0;
    verdict(3, ok, detail + "time=" + fmt(elapsed) + "s");
}

void independence_iff_product() {
    const Report r = prop1_check(build_instance(InstanceKind::ComplexQubitPair), 100, 0, 1e-9);
    const Check *bi = r.find("biconditional_all_trials");
    verdict(4, r.passed(), "complex-qubit-pair, 100 seeded states, " + bi->witness.value_or("") +
                               ", disagreements=" + fmt(bi->residual));
}

void holistic_witnesses() {
    bool ok = true;
    std::string detail;

    const CompositeModel fermi = build_instance(InstanceKind::FermiTwoModes);
    const Prop2Result fw = prop2_witness(fermi, fermi.from_operator(Matrix::identity(4) * 0.25), kTight);
    const double fgap = fw.found ? (fermi.to_operator(fw.witness) - counterexample_state().op()).max_abs() : 1.0;
    ok = ok && fw.found && fw.report.passed() && fgap < kTight;
    detail += "fermi witness - rho_AB = " + fmt(fgap);

    const CompositeModel real = build_instance(InstanceKind::RealQubitPair);
    const Vec base = real.from_operator(Matrix::identity(4) * 0.25);
    const Prop2Result rw = prop2_witness(real, base, kTight);
    if (!rw.found) {
        verdict(5, false, detail + "; real witness not found");
        return;
    }
    const Matrix op = real.to_operator(rw.witness);
    const Matrix expected = (Matrix::identity(4, Field::Complex) + kron(pauli::Y(), pauli::Y())) * 0.25;
    const double rgap = (op - expected).max_abs();
    const auto spec = herm_eigen(op);
    const double want[4] = {0.0, 0.0, 0.5, 0.5};
    double sgap = 0.0;
    for (int k = 0; k < 4; ++k) {
        sgap = std::max(sgap, std::abs(spec[static_cast<std::size_t>(k)] - want[k]));
    }
    const auto [ba, bb] = marginals(real, base);
    const auto [wa, wb] = marginals(real, rw.witness);
    const double mgap = std::max((ba - wa).norm(), (bb - wb).norm());
    const double ind = independence_residual(real, rw.witness);
    ok = ok && rw.report.passed() && rgap < kTight && sgap < kTight && mgap < kTight && ind < kTight;
    detail += "; real witness - (I+YY)/4 = " + fmt(rgap) + ", spectrum gap " + fmt(sgap) + ", marginal gap " +
              fmt(mgap) + ", independence residual " + fmt(ind);
    verdict(5, ok, detail);
}

void cross_module() {
    const CompositeModel cm = build_instance(InstanceKind::FermiTwoModes);
    const Prop2Result res = prop2_witness(cm, cm.from_operator(Matrix::identity(4) * 0.25));
    if (!res.found) {
        verdict(6, false, "no fermionic witness");
        return;
    }
    const QuantumState s(cm.to_operator(res.witness), {2, 2});
    const IndependenceVerdict v = assess_independence(build_modes(2), s, {ModeSet{0}, ModeSet{1}});
    const auto b = [](bool x) { return std::string(x ? "true" : "false"); };
    const bool ok = v.operationally_independent && !v.product_state && !v.independently_preparable;
    verdict(6, ok,
            "operationally_independent=" + b(v.operationally_independent) + " product_state=" + b(v.product_state) +
                " independently_preparable=" + b(v.independently_preparable));
}

void determinism() {
    const std::vector<std::string> args = {"--seed", "0", "--format", "json", "run-all"};
    std::ostringstream out1, out2, err;
    const int c1 = run_cli(args, out1, err);
    const int c2 = run_cli(args, out2, err);
    const bool same = out1.str() == out2.str();
    verdict(7, same && c1 == kExitPass && c2 == kExitPass,
            "run-all --seed 0 twice: " + std::string(same ? "byte-identical" : "differs") + " (" +
                std::to_string(out1.str().size()) + " bytes), exit " + std::to_string(c1) + "/" + std::to_string(c2));
}

}  // namespace

int main() {
    counterexample_suite();
    car_suite();
    dimension_table();
    independence_iff_product();
    holistic_witnesses();
    cross_module();
    determinism();
    return failures == 0 ? 0 : 1;
}
