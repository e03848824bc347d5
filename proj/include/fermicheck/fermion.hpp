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

// Fermionic Fock space of n modes in the Jordan-Wigner representation.
//
// Mode 0 is the leftmost tensor factor. The lowering operator of mode j
// carries a Z string on every lower-indexed mode:
//     f_j = Z^{(x)j} (x) sigma^- (x) I^{(x)(n-j-1)},   sigma^- = |0><1|.
// An occupation string (b_0 ... b_{n-1}) is the basis vector with index
// sum_j b_j 2^{n-1-j}.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "fermicheck/linops.hpp"
#include "fermicheck/report.hpp"

namespace fermicheck {

inline constexpr int kMaxModes = 10;

/// Set of mode indices (0-based) stored as a bit mask.
class ModeSet {
   public:
    constexpr ModeSet() = default;
    ModeSet(std::initializer_list<int> modes) {
        for (int m : modes) {
            insert(m);
        }
    }

    static ModeSet all(int n) {
        ModeSet s;
        for (int m = 0; m < n; ++m) {
            s.insert(m);
        }
        return s;
    }

    static ModeSet range(int first, int last_exclusive) {
        ModeSet s;
        for (int m = first; m < last_exclusive; ++m) {
            s.insert(m);
        }
        return s;
    }

    void insert(int mode) {
        if (mode < 0 || mode >= kMaxModes) {
            throw std::out_of_range("ModeSet: mode index out of range");
        }
        bits_ |= std::uint32_t{1} << mode;
    }

    bool contains(int mode) const { return mode >= 0 && mode < 32 && ((bits_ >> mode) & 1U) != 0; }
    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }
    std::uint32_t bits() const { return bits_; }
    int highest() const { return empty() ? -1 : 31 - std::countl_zero(bits_); }

    std::vector<int> modes() const {
        std::vector<int> out;
        for (int m = 0; m < 32; ++m) {
            if (contains(m)) {
                out.push_back(m);
            }
        }
        return out;
    }

    bool disjoint(const ModeSet &o) const { return (bits_ & o.bits_) == 0; }
    friend ModeSet operator|(ModeSet a, ModeSet b) {
        a.bits_ |= b.bits_;
        return a;
    }
    bool operator==(const ModeSet &) const = default;

   private:
    std::uint32_t bits_ = 0;
};

/// Dense amplitude column over the 2^n occupation basis.
struct FockVector {
    int n_modes;
    Matrix amplitudes;  // 2^n x 1

    static std::size_t basis_index(const std::vector<int> &occupations) {
        std::size_t idx = 0;
        for (int b : occupations) {
            if (b != 0 && b != 1) {
                throw std::invalid_argument("FockVector: occupations must be 0 or 1");
            }
            idx = (idx << 1) | static_cast<std::size_t>(b);
        }
        return idx;
    }

    /// Occupation-number basis state, e.g. {1, 0} is |10>.
    static FockVector basis(const std::vector<int> &occupations) {
        const int n = static_cast<int>(occupations.size());
        if (n < 1 || n > kMaxModes) {
            throw std::invalid_argument("FockVector: mode count out of range");
        }
        return {n, Matrix::ket(std::size_t{1} << n, basis_index(occupations))};
    }

    static FockVector vacuum(int n) { return basis(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    cplx amplitude(const std::vector<int> &occupations) const { return amplitudes(basis_index(occupations), 0); }

    cplx inner(const FockVector &o) const { return hs_inner(amplitudes, o.amplitudes); }

    friend FockVector operator*(const Matrix &op, const FockVector &v) { return {v.n_modes, op * v.amplitudes}; }
};

/// Mode operators f_j, f_j^dag and parity operators for n fermionic modes.
class ModeSystem {
   public:
    /// Takes the lowering operators as given, without checking the CAR.
    static ModeSystem from_lowering_operators(std::vector<Matrix> lowering) {
        if (lowering.empty() || static_cast<int>(lowering.size()) > kMaxModes) {
            throw std::invalid_argument("ModeSystem: mode count out of range");
        }
        const std::size_t dim = std::size_t{1} << lowering.size();
        for (const auto &f : lowering) {
            if (!f.is_square() || f.rows() != dim) {
                throw DimensionError("ModeSystem: lowering operator has the wrong dimension");
            }
        }
        return ModeSystem(std::move(lowering));
    }

    int n_modes() const { return static_cast<int>(lowering_.size()); }
    std::size_t dimension() const { return lowering_.front().rows(); }

    const Matrix &lowering(int j) const { return lowering_.at(static_cast<std::size_t>(j)); }
    const Matrix &raising(int j) const { return raising_.at(static_cast<std::size_t>(j)); }

    /// Parity of a single mode, I - 2 f_j^dag f_j.
    const Matrix &mode_parity(int j) const { return parity_.at(static_cast<std::size_t>(j)); }

    /// Product of single-mode parities over `subset`; identity for the empty set.
    Matrix parity(const ModeSet &subset) const {
        require_in_range(subset);
        Matrix p = Matrix::identity(dimension(), lowering_.front().field());
        for (int m : subset.modes()) {
            p = p * parity_[static_cast<std::size_t>(m)];
        }
        return p;
    }

    Matrix total_parity() const { return parity(ModeSet::all(n_modes())); }

    void require_in_range(const ModeSet &subset) const {
        if (subset.highest() >= n_modes()) {
            throw std::out_of_range("ModeSystem: mode index beyond system size");
        }
    }

   private:
    explicit ModeSystem(std::vector<Matrix> lowering) : lowering_(std::move(lowering)) {
        const Matrix id = Matrix::identity(dimension(), lowering_.front().field());
        for (const auto &f : lowering_) {
            raising_.push_back(f.adjoint());
            parity_.push_back(id - 2.0 * (raising_.back() * f));
        }
    }

    std::vector<Matrix> lowering_;
    std::vector<Matrix> raising_;
    std::vector<Matrix> parity_;
};

/// Jordan-Wigner mode system with 1 <= n <= 10 modes.
inline ModeSystem build_modes(int n) {
    if (n < 1 || n > kMaxModes) {
        throw std::invalid_argument("build_modes: mode count must lie in [1, 10]");
    }
    std::vector<Matrix> lowering;
    lowering.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Matrix f = j == 0 ? pauli::lowering() : pauli::Z();
        for (int k = 1; k < n; ++k) {
            if (k < j) {
                f = kron(f, pauli::Z());
            } else if (k == j) {
                f = kron(f, pauli::lowering());
            } else {
                f = kron(f, pauli::I());
            }
        }
        lowering.push_back(std::move(f));
    }
    return ModeSystem::from_lowering_operators(std::move(lowering));
}

/// Verifies {f_i, f_j^dag} = delta_ij I and {f_i, f_j} = 0 for all pairs.
inline Report check_car(const ModeSystem &ms, double tol = kExactTol) {
    const int n = ms.n_modes();
    const Matrix id = Matrix::identity(ms.dimension(), ms.lowering(0).field());
    double worst_mixed = 0.0;
    double worst_pure = 0.0;
    std::string where_mixed = "none";
    std::string where_pure = "none";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Matrix mixed = anticommutator(ms.lowering(i), ms.raising(j));
            if (i == j) {
                mixed -= id;
            }
            const double rm = mixed.frobenius_norm();
            if (rm > worst_mixed) {
                worst_mixed = rm;
                where_mixed = "{f" + std::to_string(i) + ",f" + std::to_string(j) + "^dag}";
            }
            const double rp = anticommutator(ms.lowering(i), ms.lowering(j)).frobenius_norm();
            if (rp > worst_pure) {
                worst_pure = rp;
                where_pure = "{f" + std::to_string(i) + ",f" + std::to_string(j) + "}";
            }
        }
    }
    Report r;
    r.scenario = "car-check n=" + std::to_string(n);
    r.tol = tol;
    r.add("anticommutator_f_fdag", worst_mixed <= tol, worst_mixed, where_mixed);
    r.add("anticommutator_f_f", worst_pure <= tol, worst_pure, where_pure);
    return r;
}

/// Parity superselection: [rho, Pi_subset] = 0 within tol.
inline bool is_ssr_state(const ModeSystem &ms, const QuantumState &s, const ModeSet &subset,
                         double tol = kPredicateTol) {
    if (s.side() != ms.dimension()) {
        throw DimensionError("is_ssr_state: state does not live on the mode system's Fock space");
    }
    return commutator_norm(s.op(), ms.parity(subset)) <= tol;
}

/// Hermitian operators spanning a party's local effect space.
struct EffectBasis {
    std::vector<Matrix> elements;
    std::vector<std::string> labels;

    std::size_t size() const { return elements.size(); }
    std::size_t dimension() const { return elements.empty() ? 0 : elements.front().rows(); }
};

enum class Superselection { ParityRestricted, Unrestricted };

namespace detail {

inline std::string occupation_label(std::size_t index, int k) {
    std::string s(static_cast<std::size_t>(k), '0');
    for (int b = 0; b < k; ++b) {
        if ((index >> (k - 1 - b)) & 1U) {
            s[static_cast<std::size_t>(b)] = '1';
        }
    }
    return s;
}

inline std::string pauli_label(std::size_t code, int k) {
    static constexpr char names[4] = {'I', 'X', 'Y', 'Z'};
    std::string s(static_cast<std::size_t>(k), 'I');
    for (int b = k - 1; b >= 0; --b) {
        s[static_cast<std::size_t>(b)] = names[code % 4];
        code /= 4;
    }
    return s;
}

inline Matrix pauli_string(std::size_t code, int k) {
    const Matrix single[4] = {pauli::I().as_complex(), pauli::X().as_complex(), pauli::Y(),
                              pauli::Z().as_complex()};
    std::vector<std::size_t> digits(static_cast<std::size_t>(k));
    for (int b = k - 1; b >= 0; --b) {
        digits[static_cast<std::size_t>(b)] = code % 4;
        code /= 4;
    }
    Matrix out = single[digits[0]];
    for (int b = 1; b < k; ++b) {
        out = kron(out, single[digits[static_cast<std::size_t>(b)]]);
    }
    return out;
}

inline Matrix local_parity(int k) {
    Matrix p = pauli::Z();
    for (int b = 1; b < k; ++b) {
        p = kron(p, pauli::Z());
    }
    return p;
}

}  // namespace detail

/// Hermitian basis of the operators a party holding `subset` may measure,
/// acting on the 2^|subset| local factor.
///
/// ParityRestricted: the commutant of the local parity, spanned by the
/// projectors |a><a| and the symmetric / antisymmetric coherences between
/// occupation strings of equal parity (2^(2k-1) elements). Unrestricted:
/// the 4^k Pauli strings.
inline EffectBasis allowed_effect_basis(const ModeSystem &ms, const ModeSet &subset,
                                        Superselection rule = Superselection::ParityRestricted) {
    if (subset.empty()) {
        throw std::invalid_argument("allowed_effect_basis: empty mode subset");
    }
    ms.require_in_range(subset);
    const int k = subset.size();
    const std::size_t dim = std::size_t{1} << k;
    EffectBasis basis;

    if (rule == Superselection::Unrestricted) {
        const std::size_t count = dim * dim;
        for (std::size_t code = 0; code < count; ++code) {
            basis.elements.push_back(detail::pauli_string(code, k));
            basis.labels.push_back(detail::pauli_label(code, k));
        }
        return basis;
    }

    const Matrix parity = detail::local_parity(k);
    auto same_parity = [](std::size_t a, std::size_t b) { return std::popcount(a ^ b) % 2 == 0; };
    bool needs_complex = false;
    for (std::size_t a = 0; a < dim && !needs_complex; ++a) {
        for (std::size_t b = a + 1; b < dim; ++b) {
            if (same_parity(a, b)) {
                needs_complex = true;
                break;
            }
        }
    }
    const Field field = needs_complex ? Field::Complex : Field::Real;

    for (std::size_t a = 0; a < dim; ++a) {
        Matrix proj(dim, dim, field);
        proj.set(a, a, 1.0);
        basis.elements.push_back(std::move(proj));
        basis.labels.push_back("|" + detail::occupation_label(a, k) + "><" + detail::occupation_label(a, k) + "|");
    }
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = a + 1; b < dim; ++b) {
            if (!same_parity(a, b)) {
                continue;
            }
            const std::string pair = detail::occupation_label(a, k) + "," + detail::occupation_label(b, k);
            Matrix sym(dim, dim, Field::Complex);
            sym.set(a, b, 1.0);
            sym.set(b, a, 1.0);
            Matrix asym(dim, dim, Field::Complex);
            asym.set(a, b, cplx{0.0, -1.0});
            asym.set(b, a, cplx{0.0, 1.0});
            basis.elements.push_back(std::move(sym));
            basis.labels.push_back("sym(" + pair + ")");
            basis.elements.push_back(std::move(asym));
            basis.labels.push_back("asym(" + pair + ")");
        }
    }
    for (const auto &e : basis.elements) {
        if (commutator_norm(e, parity) != 0.0) {
            throw std::logic_error("allowed_effect_basis: element does not commute with local parity");
        }
    }
    return basis;
}

/// Two-mode sign probe: the mode operator O_B = f_B + f_B^dag applied to
/// f_A^dag f_B^dag |Omega> in the Jordan-Wigner representation, compared with
/// the naive factor-wise action |1>_A (x) (sigma^- + sigma^+)|1>_B.
inline Report footnote_check(const ModeSystem &ms, double tol = kExactTol) {
    if (ms.n_modes() != 2) {
        throw std::invalid_argument("footnote_check: requires exactly two modes");
    }
    const Matrix &fB = ms.lowering(1);
    const FockVector vacuum = FockVector::vacuum(2);
    const FockVector v1 = (fB + ms.raising(1)) * (ms.raising(0) * (ms.raising(1) * vacuum));

    const Matrix one = Matrix::ket(2, 1);
    const FockVector v2{2, kron(one, (pauli::lowering() + pauli::raising()) * one)};

    const FockVector ket10 = FockVector::basis({1, 0});
    const double r1 = (v1.amplitudes + ket10.amplitudes).max_abs();
    const double r2 = (v2.amplitudes - ket10.amplitudes).max_abs();
    const double r3 = (v1.amplitudes + v2.amplitudes).max_abs();
    const cplx overlap = v1.inner(v2);
    const double r4 = std::abs(overlap - cplx{-1.0, 0.0});

    Report r;
    r.scenario = "footnote";
    r.tol = tol;
    r.add("jw_action_is_minus_10", r1 <= tol, r1, "v1 = (f_B + f_B^dag) f_A^dag f_B^dag |Omega>");
    r.add("factorwise_action_is_plus_10", r2 <= tol, r2, "v2 = |1>_A (x) (f + f^dag)|1>_B");
    r.add("v1_equals_minus_v2", r3 <= tol, r3);
    r.add("overlap_is_minus_one", r4 <= tol, r4, "<v1,v2> = " + json::number(overlap.real()));
    return r;
}

}  // namespace fermicheck
