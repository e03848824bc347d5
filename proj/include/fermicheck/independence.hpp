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

// Operational independence versus independent preparation for bipartite
// states, with the parity twirl and the two separability tests used to
// tell the two notions apart.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fermicheck/fermion.hpp"
#include "fermicheck/linops.hpp"
#include "fermicheck/report.hpp"

namespace fermicheck {

/// Finite group of unitaries, averaged with uniform weights.
class TwirlGroup {
   public:
    explicit TwirlGroup(std::vector<Matrix> elements, double tol = kPredicateTol) : elements_(std::move(elements)) {
        if (elements_.empty()) {
            throw std::invalid_argument("TwirlGroup: empty element list");
        }
        const std::size_t n = elements_.front().rows();
        for (const auto &u : elements_) {
            if (!u.is_square() || u.rows() != n) {
                throw DimensionError("TwirlGroup: elements must be square of equal size");
            }
            const Matrix id = Matrix::identity(n, u.field());
            if ((u * u.adjoint() - id).max_abs() > tol) {
                throw std::invalid_argument("TwirlGroup: element is not unitary");
            }
        }
        for (const auto &a : elements_) {
            for (const auto &b : elements_) {
                const Matrix ab = a * b;
                bool found = false;
                for (const auto &c : elements_) {
                    if ((ab - c).max_abs() <= tol) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw std::invalid_argument("TwirlGroup: element set is not closed under products");
                }
            }
        }
    }

    const std::vector<Matrix> &elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    std::size_t dimension() const { return elements_.front().rows(); }

   private:
    std::vector<Matrix> elements_;
};

/// {Pi_A^x Pi_B^y : x, y in {0, 1}} on the full Fock space.
inline TwirlGroup parity_twirl_group(const ModeSystem &ms, const ModeSet &a, const ModeSet &b) {
    const Matrix pa = ms.parity(a);
    const Matrix pb = ms.parity(b);
    return TwirlGroup({Matrix::identity(ms.dimension(), pa.field()), pa, pb, pa * pb});
}

/// Group average (1/|G|) sum_U U s U^dag.
inline QuantumState twirl(const QuantumState &s, const TwirlGroup &g) {
    if (s.side() != g.dimension()) {
        throw DimensionError("twirl: state and group act on different spaces");
    }
    Matrix acc = Matrix::zeros(s.side(), s.side(), s.op().field());
    for (const auto &u : g.elements()) {
        acc += u * s.op() * u.adjoint();
    }
    acc *= 1.0 / static_cast<double>(g.size());
    return QuantumState(std::move(acc), s.dims());
}

struct OperationalIndependence {
    bool independent = false;
    double max_residual = 0.0;
    /// (index in basis A, index in basis B) of the largest deviation; lowest pair on ties.
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    std::string witness_label;
};

namespace detail {

inline void require_bipartite(const QuantumState &s, const char *what) {
    if (s.dims().size() != 2) {
        throw DimensionError(std::string(what) + ": state must have exactly two subsystems");
    }
}

inline Matrix kron_promoted(const Matrix &a, const Matrix &b) {
    if (a.field() == b.field()) {
        return kron(a, b);
    }
    return kron(a.as_complex(), b.as_complex());
}

}  // namespace detail

/// Largest |Tr[(a (x) b) s] - Tr[a s_A] Tr[b s_B]| over all basis pairs.
///
/// Probabilities are bilinear in the effects, so a verdict on spanning bases
/// extends to every effect in their span.
inline OperationalIndependence is_operationally_independent(const QuantumState &s, const EffectBasis &basis_a,
                                                            const EffectBasis &basis_b, double tol = kPredicateTol) {
    detail::require_bipartite(s, "is_operationally_independent");
    if (basis_a.dimension() != s.dims()[0] || basis_b.dimension() != s.dims()[1]) {
        throw DimensionError("is_operationally_independent: basis dimension does not match subsystem");
    }
    const Matrix marginal_a = partial_trace(s.op(), s.dims(), 0);
    const Matrix marginal_b = partial_trace(s.op(), s.dims(), 1);
    std::vector<cplx> pb(basis_b.size());
    for (std::size_t j = 0; j < basis_b.size(); ++j) {
        pb[j] = hs_inner(basis_b.elements[j], marginal_b);
    }
    OperationalIndependence out;
    double worst = -1.0;
    for (std::size_t i = 0; i < basis_a.size(); ++i) {
        const cplx pa = hs_inner(basis_a.elements[i], marginal_a);
        for (std::size_t j = 0; j < basis_b.size(); ++j) {
            const Matrix joint_effect = detail::kron_promoted(basis_a.elements[i], basis_b.elements[j]);
            const double delta = std::abs(hs_inner(joint_effect, s.op()) - pa * pb[j]);
            if (delta > worst) {
                worst = delta;
                out.witness = std::make_pair(i, j);
            }
        }
    }
    out.max_residual = std::max(worst, 0.0);
    out.independent = out.max_residual <= tol;
    if (out.witness) {
        const auto label = [](const EffectBasis &b, std::size_t k) {
            return k < b.labels.size() ? b.labels[k] : std::to_string(k);
        };
        out.witness_label = "(" + label(basis_a, out.witness->first) + "," + label(basis_b, out.witness->second) + ")";
    }
    return out;
}

/// ||s - s_A (x) s_B||_F.
inline double product_residual(const QuantumState &s) {
    detail::require_bipartite(s, "product_residual");
    const Matrix a = partial_trace(s.op(), s.dims(), 0);
    const Matrix b = partial_trace(s.op(), s.dims(), 1);
    return (s.op() - detail::kron_promoted(a, b)).frobenius_norm();
}

/// A bipartite state is a product iff it equals the product of its own marginals.
inline bool is_product(const QuantumState &s, double tol = kPredicateTol) { return product_residual(s) <= tol; }

using ModePartition = std::pair<ModeSet, ModeSet>;

/// Reinterprets a Fock-space state as bipartite across `partition`.
///
/// The first block must be the leading modes 0..k-1 and the second block the
/// remaining modes; in the Jordan-Wigner ordering this is a plain Kronecker split.
inline QuantumState split_modes(const ModeSystem &ms, const QuantumState &s, const ModePartition &partition) {
    const auto &[a, b] = partition;
    if (a.empty() || b.empty() || !a.disjoint(b) || (a | b) != ModeSet::all(ms.n_modes())) {
        throw std::invalid_argument("partition must split all modes into two disjoint nonempty blocks");
    }
    if (a != ModeSet::range(0, a.size())) {
        throw std::invalid_argument("partition must place the leading modes in the first block");
    }
    if (s.side() != ms.dimension()) {
        throw DimensionError("split_modes: state does not live on the mode system's Fock space");
    }
    return s.with_dims({std::size_t{1} << a.size(), std::size_t{1} << b.size()});
}

/// Product of two local states that each commute with their local parity.
inline bool is_independently_preparable_fit(const ModeSystem &ms, const QuantumState &s,
                                            const ModePartition &partition, double tol = kPredicateTol) {
    const QuantumState split = split_modes(ms, s, partition);
    if (!is_product(split, tol)) {
        return false;
    }
    const Matrix pa = detail::local_parity(partition.first.size());
    const Matrix pb = detail::local_parity(partition.second.size());
    return commutator_norm(partial_trace(split.op(), split.dims(), 0), pa) <= tol &&
           commutator_norm(partial_trace(split.op(), split.dims(), 1), pb) <= tol;
}

/// Smallest eigenvalue of the partial transpose on the second subsystem.
inline double ppt_min_eigenvalue(const QuantumState &s) {
    detail::require_bipartite(s, "ppt");
    const auto &d = s.dims();
    const bool conclusive = (d[0] == 2 && d[1] == 2) || (d[0] == 2 && d[1] == 3) || (d[0] == 3 && d[1] == 2);
    if (!conclusive) {
        throw DimensionError("ppt: criterion is only conclusive for 2x2 and 2x3 systems");
    }
    return herm_eigen(partial_transpose(s.op(), s.dims(), 1)).front();
}

/// Peres-Horodecki test; necessary and sufficient for two qubits.
inline bool ppt_separable_2x2(const QuantumState &s, double tol = kPredicateTol) {
    return ppt_min_eigenvalue(s) >= -tol;
}

inline double max_offdiagonal(const Matrix &m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (r != c) {
                worst = std::max(worst, std::abs(m(r, c)));
            }
        }
    }
    return worst;
}

/// Membership in the convex hull of products of single-mode SSR states.
///
/// Single-mode SSR states are diagonal, so that hull is exactly the set of
/// diagonal two-mode states.
inline bool is_ssr_separable_two_modes(const ModeSystem &ms, const QuantumState &s, double tol = kPredicateTol) {
    if (ms.n_modes() != 2) {
        throw std::invalid_argument("is_ssr_separable_two_modes: requires exactly two modes");
    }
    if (s.side() != 4) {
        throw DimensionError("is_ssr_separable_two_modes: state must be 4x4");
    }
    return max_offdiagonal(s.op()) <= tol;
}

struct IndependenceVerdict {
    bool operationally_independent = false;
    bool product_state = false;
    bool independently_preparable = false;
    double max_residual = 0.0;
    std::optional<std::string> witness;
};

/// Parity-restricted effect bases for the two blocks of a partition.
inline std::pair<EffectBasis, EffectBasis> parity_bases(const ModeSystem &ms, const ModePartition &partition) {
    return {allowed_effect_basis(ms, partition.first), allowed_effect_basis(ms, partition.second)};
}

inline IndependenceVerdict assess_independence(const ModeSystem &ms, const QuantumState &s,
                                               const ModePartition &partition, double tol = kPredicateTol) {
    const QuantumState split = split_modes(ms, s, partition);
    const auto [ba, bb] = parity_bases(ms, partition);
    const auto oi = is_operationally_independent(split, ba, bb, tol);
    IndependenceVerdict v;
    v.operationally_independent = oi.independent;
    v.product_state = is_product(split, tol);
    v.independently_preparable = is_independently_preparable_fit(ms, s, partition, tol);
    v.max_residual = oi.max_residual;
    if (oi.witness) {
        v.witness = oi.witness_label;
    }
    return v;
}

/// 1/2 (|phi+><phi+| + |psi+><psi+|) on two modes.
///
/// Each Bell projector is formed as 1/2 v v^T with an unnormalized 0/1 vector,
/// so every entry is an exact dyadic rational.
inline QuantumState counterexample_state() {
    const Matrix phi = Matrix::column({1, 0, 0, 1}, Field::Real);
    const Matrix psi = Matrix::column({0, 1, 1, 0}, Field::Real);
    const Matrix phi_proj = 0.5 * (phi * phi.transpose());
    const Matrix psi_proj = 0.5 * (psi * psi.transpose());
    return QuantumState(0.5 * (phi_proj + psi_proj), {2, 2});
}

inline EffectBasis qubit_pauli_basis() { return allowed_effect_basis(build_modes(1), ModeSet{0}, Superselection::Unrestricted); }

/// Runs the eight checks that separate operational independence from
/// independent preparation on the two-mode mixed Bell state.
///
/// A nonzero `perturbation` adds that multiple of X (x) I and projects back
/// onto the state space before testing.
inline Report counterexample_scenario(double tol = kPredicateTol, double perturbation = 0.0) {
    const ModeSystem ms = build_modes(2);
    const ModePartition partition{ModeSet{0}, ModeSet{1}};
    QuantumState rho = counterexample_state();
    if (perturbation != 0.0) {
        rho = project_to_state(rho.op() + perturbation * kron(pauli::X(), pauli::I()), {2, 2});
    }

    Report r;
    r.scenario = "counterexample";
    r.tol = tol;

    const double ssr = commutator_norm(rho.op(), ms.total_parity());
    r.add("ssr_valid", ssr <= tol, ssr, "[rho, Pi_A Pi_B]");

    const QuantumState twirled = twirl(rho, parity_twirl_group(ms, partition.first, partition.second));
    const double twirl_gap = (twirled.op() - Matrix::identity(4) * 0.25).max_abs();
    r.add("twirl_is_maximally_mixed", twirl_gap <= tol, twirl_gap);

    const auto [ba, bb] = parity_bases(ms, partition);
    const auto restricted = is_operationally_independent(rho, ba, bb, tol);
    r.add("operationally_independent_parity_bases", restricted.independent, restricted.max_residual,
          restricted.witness_label);

    const EffectBasis paulis = qubit_pauli_basis();
    const auto unrestricted = is_operationally_independent(rho, paulis, paulis, tol);
    r.add("not_operationally_independent_unrestricted", !unrestricted.independent, unrestricted.max_residual,
          unrestricted.witness_label);

    const double prod = product_residual(rho);
    r.add("not_product", prod > tol, prod, "||rho - rho_A (x) rho_B||_F");

    const bool preparable = is_independently_preparable_fit(ms, rho, partition, tol);
    r.add("not_independently_preparable", !preparable, prod);

    const double ppt = ppt_min_eigenvalue(rho);
    r.add("ppt_separable", ppt >= -tol, std::max(0.0, -ppt), "min eig of partial transpose = " + json::number(ppt));

    const double off = max_offdiagonal(rho.op());
    r.add("not_ssr_separable", !is_ssr_separable_two_modes(ms, rho, tol), off, "largest off-diagonal entry");
    return r;
}

}  // namespace fermicheck
