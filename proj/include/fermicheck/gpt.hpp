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

// Generalized probabilistic theories on finite-dimensional real vector spaces.
//
// A system is described by coordinates in R^d: states are vectors, effects
// are covectors evaluated by the Euclidean pairing e(w) = e . w. The three
// built-in instances realize their spaces as real spans of Hermitian
// operators, with coordinates taken in an orthonormal (Hilbert-Schmidt)
// Hermitian basis so that the Euclidean pairing is Tr(E w).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermicheck/fermion.hpp"
#include "fermicheck/linops.hpp"
#include "fermicheck/matrix_json.hpp"
#include "fermicheck/report.hpp"

namespace fermicheck {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Relative singular-value threshold for every rank decision.
inline constexpr double kRankTol = 1e-8;

inline Vec kron_vec(const Vec &a, const Vec &b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Number of singular values above rel_tol times the largest one.
inline int numerical_rank(const Mat &m, double rel_tol = kRankTol) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        r += sv(i) > rel_tol * sv(0) ? 1 : 0;
    }
    return r;
}

namespace detail {

inline double operator_pairing(const Matrix &a, const Matrix &b) { return hs_inner(a, b).real(); }

inline void check_orthonormal(const std::vector<Matrix> &basis, const char *what) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!is_hermitian(basis[i], kExactTol)) {
            throw std::invalid_argument(std::string(what) + ": operator basis element is not Hermitian");
        }
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(hs_inner(basis[i], basis[j]) - cplx{expect, 0.0}) > 1e-10) {
                throw std::invalid_argument(std::string(what) + ": operator basis is not orthonormal");
            }
        }
    }
}

inline Matrix combine(const std::vector<Matrix> &basis, const Vec &coords) {
    if (basis.empty()) {
        throw std::logic_error("no operator realization for this system");
    }
    if (static_cast<std::size_t>(coords.size()) != basis.size()) {
        throw DimensionError("to_operator: coordinate count does not match basis");
    }
    Matrix out = Matrix::zeros(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (coords(static_cast<Eigen::Index>(k)) != 0.0) {
            out += basis[k] * coords(static_cast<Eigen::Index>(k));
        }
    }
    return out;
}

inline Vec coordinates(const std::vector<Matrix> &basis, const Matrix &op) {
    if (basis.empty()) {
        throw std::logic_error("no operator realization for this system");
    }
    Vec out(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out(static_cast<Eigen::Index>(k)) = operator_pairing(basis[k], op);
    }
    return out;
}

}  // namespace detail

/// One GPT system: ambient space R^d, generating states and effects, unit effect.
class GPTSystem {
   public:
    GPTSystem(std::string name, std::vector<Vec> state_generators, std::vector<Vec> effect_generators, Vec unit_effect,
              std::vector<Matrix> operator_basis = {}, double tol = kPredicateTol)
        : name_(std::move(name)),
          states_(std::move(state_generators)),
          effects_(std::move(effect_generators)),
          unit_(std::move(unit_effect)),
          basis_(std::move(operator_basis)) {
        const Eigen::Index d = unit_.size();
        if (d <= 0) {
            throw DimensionError("GPTSystem: ambient dimension must be positive");
        }
        if (states_.empty() || effects_.empty()) {
            throw std::invalid_argument("GPTSystem: generator sets must be nonempty");
        }
        for (const auto &w : states_) {
            if (w.size() != d) {
                throw DimensionError("GPTSystem: state generator has the wrong dimension");
            }
            if (std::abs(unit_.dot(w) - 1.0) > tol) {
                throw std::invalid_argument("GPTSystem: state generator is not normalized");
            }
            for (const auto &e : effects_) {
                if (e.size() != d) {
                    throw DimensionError("GPTSystem: effect generator has the wrong dimension");
                }
                const double p = e.dot(w);
                if (p < -tol || p > 1.0 + tol) {
                    throw std::invalid_argument("GPTSystem: effect assigns a probability outside [0, 1]");
                }
            }
        }
        if (!basis_.empty()) {
            if (static_cast<Eigen::Index>(basis_.size()) != d) {
                throw DimensionError("GPTSystem: operator basis size differs from ambient dimension");
            }
            detail::check_orthonormal(basis_, "GPTSystem");
        }
    }

    const std::string &name() const { return name_; }
    int ambient_dim() const { return static_cast<int>(unit_.size()); }
    const std::vector<Vec> &state_generators() const { return states_; }
    const std::vector<Vec> &effect_generators() const { return effects_; }
    const Vec &unit_effect() const { return unit_; }
    const std::vector<Matrix> &operator_basis() const { return basis_; }
    bool has_operator_form() const { return !basis_.empty(); }

    Matrix to_operator(const Vec &v) const { return detail::combine(basis_, v); }
    Vec from_operator(const Matrix &op) const { return detail::coordinates(basis_, op); }

    /// Rank of the effect generators; equals ambient_dim iff effects separate states.
    int effect_rank() const {
        Mat m(static_cast<Eigen::Index>(effects_.size()), ambient_dim());
        for (std::size_t i = 0; i < effects_.size(); ++i) {
            m.row(static_cast<Eigen::Index>(i)) = effects_[i].transpose();
        }
        return numerical_rank(m);
    }

   private:
    std::string name_;
    std::vector<Vec> states_;
    std::vector<Vec> effects_;
    Vec unit_;
    std::vector<Matrix> basis_;
};

/// Bipartite GPT: two local systems and a bilinear composition into R^D.
///
/// Composition is linear on A (x) B: w [x] v = state_compose * kron(w, v) and
/// e [x] f = effect_compose * kron(e, f).
class CompositeModel {
   public:
    /// Distance of a composite vector from the state space; zero inside.
    using StateViolation = std::function<double(const Vec &)>;

    CompositeModel(std::string name, GPTSystem a, GPTSystem b, Mat state_compose, Mat effect_compose,
                   std::vector<Vec> extra_states, StateViolation violation, std::vector<Matrix> composite_basis = {},
                   double tol = kPredicateTol)
        : name_(std::move(name)),
          a_(std::move(a)),
          b_(std::move(b)),
          state_compose_(std::move(state_compose)),
          effect_compose_(std::move(effect_compose)),
          violation_(std::move(violation)),
          basis_(std::move(composite_basis)) {
        const Eigen::Index local = static_cast<Eigen::Index>(a_.ambient_dim()) * b_.ambient_dim();
        if (state_compose_.cols() != local || effect_compose_.cols() != local ||
            state_compose_.rows() != effect_compose_.rows() || state_compose_.rows() <= 0) {
            throw DimensionError("CompositeModel: composition maps have inconsistent shapes");
        }
        if (!basis_.empty()) {
            if (static_cast<Eigen::Index>(basis_.size()) != state_compose_.rows()) {
                throw DimensionError("CompositeModel: operator basis size differs from composite dimension");
            }
            detail::check_orthonormal(basis_, "CompositeModel");
        }
        for (const auto &w : a_.state_generators()) {
            for (const auto &v : b_.state_generators()) {
                const Vec s = compose_states(w, v);
                if (violation_(s) > tol) {
                    throw std::invalid_argument("CompositeModel: product of states is not a valid state");
                }
                composite_states_.push_back(s);
                for (const auto &e : a_.effect_generators()) {
                    for (const auto &f : b_.effect_generators()) {
                        const double joint = compose_effects(e, f).dot(s);
                        if (std::abs(joint - e.dot(w) * f.dot(v)) > tol) {
                            throw std::invalid_argument("CompositeModel: composition does not factorize probabilities");
                        }
                    }
                }
            }
        }
        for (auto &s : extra_states) {
            if (s.size() != state_compose_.rows() || violation_(s) > tol) {
                throw std::invalid_argument("CompositeModel: composite state generator is invalid");
            }
            composite_states_.push_back(std::move(s));
        }
    }

    const std::string &name() const { return name_; }
    const GPTSystem &system_a() const { return a_; }
    const GPTSystem &system_b() const { return b_; }
    int composite_dim() const { return static_cast<int>(state_compose_.rows()); }
    const Mat &state_compose() const { return state_compose_; }
    const Mat &effect_compose() const { return effect_compose_; }
    /// Products of local generators first, then the additional composite states.
    const std::vector<Vec> &composite_state_generators() const { return composite_states_; }

    Vec compose_states(const Vec &w, const Vec &v) const { return state_compose_ * kron_vec(w, v); }
    Vec compose_effects(const Vec &e, const Vec &f) const { return effect_compose_ * kron_vec(e, f); }
    Vec unit_effect() const { return compose_effects(a_.unit_effect(), b_.unit_effect()); }

    double state_violation(const Vec &s) const {
        require_composite(s);
        return violation_(s);
    }
    bool is_valid_state(const Vec &s, double tol = kPredicateTol) const { return state_violation(s) <= tol; }

    bool has_operator_form() const { return !basis_.empty(); }
    const std::vector<Matrix> &operator_basis() const { return basis_; }
    Matrix to_operator(const Vec &s) const { return detail::combine(basis_, s); }
    Vec from_operator(const Matrix &op) const { return detail::coordinates(basis_, op); }

    void require_composite(const Vec &s) const {
        if (s.size() != composite_dim()) {
            throw DimensionError("CompositeModel: vector is not in the composite space");
        }
    }

   private:
    std::string name_;
    GPTSystem a_;
    GPTSystem b_;
    Mat state_compose_;
    Mat effect_compose_;
    StateViolation violation_;
    std::vector<Matrix> basis_;
    std::vector<Vec> composite_states_;
};

enum class InstanceKind { ComplexQubitPair, RealQubitPair, FermiTwoModes };

inline constexpr InstanceKind kAllInstances[] = {InstanceKind::ComplexQubitPair, InstanceKind::RealQubitPair,
                                                 InstanceKind::FermiTwoModes};

inline std::string_view instance_name(InstanceKind k) {
    switch (k) {
        case InstanceKind::ComplexQubitPair: return "complex-qubit-pair";
        case InstanceKind::RealQubitPair: return "real-qubit-pair";
        case InstanceKind::FermiTwoModes: return "fermi-two-modes";
    }
    return "unknown";
}

inline std::optional<InstanceKind> parse_instance(std::string_view name) {
    for (auto k : kAllInstances) {
        if (instance_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

namespace detail {

// Pauli by index 0..3 = I, X, Y, Z; real field whenever the entries are real.
inline Matrix pauli_by_index(int k) {
    switch (k) {
        case 0: return pauli::I();
        case 1: return pauli::X();
        case 2: return pauli::Y();
        default: return pauli::Z();
    }
}

inline Matrix demote_if_real(const Matrix &m) {
    for (const auto &z : m.entries()) {
        if (z.imag() != 0.0) {
            return m;
        }
    }
    std::vector<cplx> entries;
    entries.reserve(m.size());
    for (const auto &z : m.entries()) {
        entries.emplace_back(z.real(), 0.0);
    }
    return Matrix(m.rows(), m.cols(), Field::Real, std::move(entries));
}

inline Matrix pauli_pair(int i, int j) {
    return demote_if_real(kron(pauli_by_index(i).as_complex(), pauli_by_index(j).as_complex()) * 0.5);
}

inline Matrix projector(const Matrix &ket) { return ket * ket.adjoint(); }

inline double density_violation(const Matrix &op) {
    const Matrix herm = (op + op.adjoint()) * 0.5;
    const double herm_defect = (op - herm).frobenius_norm();
    const double trace_defect = std::abs(op.trace() - cplx{1.0, 0.0});
    const double negativity = std::max(0.0, -herm_eigen(herm).front());
    return herm_defect + trace_defect + negativity;
}

// c[k][(i, j)] = Tr(K_k (B_i (x) B_j)) for orthonormal Hermitian bases.
inline Mat kronecker_compose(const std::vector<Matrix> &composite, const std::vector<Matrix> &a,
                             const std::vector<Matrix> &b) {
    Mat c = Mat::Zero(static_cast<Eigen::Index>(composite.size()), static_cast<Eigen::Index>(a.size() * b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Matrix prod = kron(a[i].as_complex(), b[j].as_complex());
            for (std::size_t k = 0; k < composite.size(); ++k) {
                c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i * b.size() + j)) =
                    operator_pairing(composite[k], prod);
            }
        }
    }
    return c;
}

inline GPTSystem operator_system(std::string name, std::vector<Matrix> basis, const std::vector<Matrix> &states,
                                 const std::vector<Matrix> &effects) {
    std::vector<Vec> sv;
    std::vector<Vec> ev;
    for (const auto &s : states) {
        sv.push_back(coordinates(basis, s));
    }
    for (const auto &e : effects) {
        ev.push_back(coordinates(basis, e));
    }
    const std::size_t side = basis.front().rows();
    Vec unit = coordinates(basis, Matrix::identity(side));
    return GPTSystem(std::move(name), std::move(sv), std::move(ev), std::move(unit), std::move(basis));
}

inline CompositeModel operator_composite(std::string name, const GPTSystem &a, const GPTSystem &b,
                                         std::vector<Matrix> composite_basis, const std::vector<Matrix> &extra) {
    const Mat compose = kronecker_compose(composite_basis, a.operator_basis(), b.operator_basis());
    std::vector<Vec> extra_coords;
    for (const auto &op : extra) {
        extra_coords.push_back(coordinates(composite_basis, op));
    }
    const auto basis_copy = composite_basis;
    auto violation = [basis_copy](const Vec &s) { return density_violation(combine(basis_copy, s)); };
    return CompositeModel(std::move(name), a, b, compose, compose, std::move(extra_coords), violation,
                          std::move(composite_basis));
}

inline std::vector<Matrix> bell_projectors() {
    const double h = 0.5;
    const Matrix phi_p = Matrix::column({1, 0, 0, 1}, Field::Real);
    const Matrix phi_m = Matrix::column({1, 0, 0, -1}, Field::Real);
    const Matrix psi_p = Matrix::column({0, 1, 1, 0}, Field::Real);
    const Matrix psi_m = Matrix::column({0, 1, -1, 0}, Field::Real);
    return {h * projector(phi_p), h * projector(phi_m), h * projector(psi_p), h * projector(psi_m)};
}

}  // namespace detail

/// Builds one of the three reference instances.
///
/// Local and composite coordinates use normalized Pauli (products): the
/// composite basis lists sigma_i (x) sigma_j / 2 in lexicographic (I, X, Y, Z)
/// order, keeping only the products that lie in the instance's composite space.
inline CompositeModel build_instance(InstanceKind kind) {
    using detail::projector;
    const double r2 = std::sqrt(0.5);
    const Matrix k0 = Matrix::ket(2, 0);
    const Matrix k1 = Matrix::ket(2, 1);
    const Matrix kp = Matrix::column({r2, r2}, Field::Real);
    const Matrix km = Matrix::column({r2, -r2}, Field::Real);
    const Matrix kpi = Matrix::column({r2, cplx{0.0, r2}}, Field::Complex);
    const Matrix kmi = Matrix::column({r2, cplx{0.0, -r2}}, Field::Complex);

    switch (kind) {
        case InstanceKind::ComplexQubitPair: {
            std::vector<Matrix> local;
            for (int k = 0; k < 4; ++k) {
                local.push_back(detail::pauli_by_index(k) * r2);
            }
            std::vector<Matrix> states = {projector(k0), projector(k1), projector(kp),
                                          projector(km), projector(kpi), projector(kmi)};
            std::vector<Matrix> effects = states;
            effects.push_back(Matrix::identity(2));
            const GPTSystem side = detail::operator_system("complex-qubit", local, states, effects);
            std::vector<Matrix> composite;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    composite.push_back(detail::pauli_pair(i, j));
                }
            }
            return detail::operator_composite(std::string(instance_name(kind)), side, side, std::move(composite),
                                              detail::bell_projectors());
        }
        case InstanceKind::RealQubitPair: {
            const std::vector<Matrix> local = {pauli::I() * r2, pauli::X() * r2, pauli::Z() * r2};
            std::vector<Matrix> states = {projector(k0), projector(k1), projector(kp), projector(km)};
            std::vector<Matrix> effects = states;
            effects.push_back(Matrix::identity(2));
            const GPTSystem side = detail::operator_system("real-qubit", local, states, effects);
            std::vector<Matrix> composite;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    // real symmetric products: neither factor is Y, or both are
                    if ((i == 2) == (j == 2)) {
                        composite.push_back(detail::pauli_pair(i, j));
                    }
                }
            }
            return detail::operator_composite(std::string(instance_name(kind)), side, side, std::move(composite),
                                              detail::bell_projectors());
        }
        case InstanceKind::FermiTwoModes: {
            const ModeSystem mode = build_modes(1);
            const EffectBasis allowed = allowed_effect_basis(mode, ModeSet{0});
            const std::vector<Matrix> local = {projector(k0), projector(k1)};
            std::vector<Matrix> effects = allowed.elements;
            effects.push_back(Matrix::identity(2));
            const GPTSystem side = detail::operator_system("fermi-mode", local, local, effects);
            const Matrix parity = build_modes(2).total_parity();
            std::vector<Matrix> composite;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    Matrix p = detail::pauli_pair(i, j);
                    if (commutator_norm(p, parity) == 0.0) {
                        composite.push_back(std::move(p));
                    }
                }
            }
            return detail::operator_composite(std::string(instance_name(kind)), side, side, std::move(composite),
                                              detail::bell_projectors());
        }
    }
    throw std::invalid_argument("build_instance: unknown instance");
}

/// Marginals (. [x] u^B)(s) and (u^A [x] .)(s), in local coordinates.
inline std::pair<Vec, Vec> marginals(const CompositeModel &cm, const Vec &s) {
    cm.require_composite(s);
    const int da = cm.system_a().ambient_dim();
    const int db = cm.system_b().ambient_dim();
    Vec sa(da);
    Vec sb(db);
    for (int i = 0; i < da; ++i) {
        sa(i) = cm.compose_effects(Vec::Unit(da, i), cm.system_b().unit_effect()).dot(s);
    }
    for (int j = 0; j < db; ++j) {
        sb(j) = cm.compose_effects(cm.system_a().unit_effect(), Vec::Unit(db, j)).dot(s);
    }
    return {sa, sb};
}

enum class SubspaceKind { ProductSpan, Holistic };

/// Orthonormal basis of a subspace of the composite space.
struct SubspaceBasis {
    std::vector<Vec> vectors;
    SubspaceKind kind;

    int dimension() const { return static_cast<int>(vectors.size()); }
};

namespace detail {

inline Mat product_generator_matrix(const CompositeModel &cm) {
    const auto &sa = cm.system_a().state_generators();
    const auto &sb = cm.system_b().state_generators();
    Mat g(cm.composite_dim(), static_cast<Eigen::Index>(sa.size() * sb.size()));
    Eigen::Index col = 0;
    for (const auto &w : sa) {
        for (const auto &v : sb) {
            g.col(col++) = cm.compose_states(w, v);
        }
    }
    return g;
}

// Gram-Schmidt on the images of the coordinate axes under `projector`, in
// axis order. Deterministic and independent of the SVD's choice of basis.
inline std::vector<Vec> canonical_basis(const Mat &projector, int rank) {
    std::vector<Vec> out;
    const Eigen::Index d = projector.rows();
    for (Eigen::Index k = 0; k < d && static_cast<int>(out.size()) < rank; ++k) {
        Vec v = projector.col(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &q : out) {
                v -= q.dot(v) * q;
            }
        }
        const double n = v.norm();
        if (n > 1e-6) {
            out.push_back(v / n);
        }
    }
    if (static_cast<int>(out.size()) != rank) {
        throw std::logic_error("canonical_basis: could not extract a basis of the expected rank");
    }
    return out;
}

struct SpanSplit {
    int rank;
    Mat span_projector;
};

inline SpanSplit split_product_span(const CompositeModel &cm) {
    const Mat g = product_generator_matrix(cm);
    const int rank = numerical_rank(g);
    if (rank == 0) {
        throw std::invalid_argument("product_span: generator set is degenerate (rank 0)");
    }
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU);
    const Mat u = svd.matrixU().leftCols(rank);
    return {rank, u * u.transpose()};
}

}  // namespace detail

/// Span{w [x] v : w in S_A, v in S_B}.
inline SubspaceBasis product_span(const CompositeModel &cm) {
    const auto split = detail::split_product_span(cm);
    return {detail::canonical_basis(split.span_projector, split.rank), SubspaceKind::ProductSpan};
}

/// Hilbert-Schmidt orthogonal complement of the product span.
inline SubspaceBasis holistic_subspace(const CompositeModel &cm) {
    const auto split = detail::split_product_span(cm);
    const Mat complement = Mat::Identity(cm.composite_dim(), cm.composite_dim()) - split.span_projector;
    return {detail::canonical_basis(complement, cm.composite_dim() - split.rank), SubspaceKind::Holistic};
}

/// Rows e_A [x] e_B for every pair of effect generators.
inline Mat local_effect_functionals(const CompositeModel &cm) {
    const auto &ea = cm.system_a().effect_generators();
    const auto &eb = cm.system_b().effect_generators();
    Mat m(static_cast<Eigen::Index>(ea.size() * eb.size()), cm.composite_dim());
    Eigen::Index row = 0;
    for (const auto &e : ea) {
        for (const auto &f : eb) {
            m.row(row++) = cm.compose_effects(e, f).transpose();
        }
    }
    return m;
}

/// Largest |(e_A [x] e_B)(v)| over effect-generator pairs.
inline double max_local_visibility(const CompositeModel &cm, const Vec &v) {
    cm.require_composite(v);
    return (local_effect_functionals(cm) * v).cwiseAbs().maxCoeff();
}

/// Local effects separate composite states iff their functionals span the dual.
inline bool is_locally_tomographic(const CompositeModel &cm, double rel_tol = kRankTol) {
    return numerical_rank(local_effect_functionals(cm), rel_tol) == cm.composite_dim();
}

/// max |(e [x] f)(s) - e(s_A) f(s_B)| over effect-generator pairs.
inline double independence_residual(const CompositeModel &cm, const Vec &s) {
    const auto [sa, sb] = marginals(cm, s);
    double worst = 0.0;
    for (const auto &e : cm.system_a().effect_generators()) {
        for (const auto &f : cm.system_b().effect_generators()) {
            worst = std::max(worst, std::abs(cm.compose_effects(e, f).dot(s) - e.dot(sa) * f.dot(sb)));
        }
    }
    return worst;
}

/// || s - s_A [x] s_B ||.
inline double product_residual(const CompositeModel &cm, const Vec &s) {
    const auto [sa, sb] = marginals(cm, s);
    return (s - cm.compose_states(sa, sb)).norm();
}

struct StateClassification {
    bool operationally_independent;
    bool product;
    double independence_residual;
    double product_residual;
};

inline StateClassification classify_state(const CompositeModel &cm, const Vec &s, double tol = kPredicateTol) {
    const double ir = independence_residual(cm, s);
    const double pr = product_residual(cm, s);
    return {ir <= tol, pr <= tol, ir, pr};
}

namespace detail {

// mt19937_64 is fully specified by the standard; the conversion to [0, 1) is
// done here so sampled values do not depend on the library's distributions.
class SplitRng {
   public:
    explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

   private:
    std::mt19937_64 engine_;
};

// Flat Dirichlet weights over a random subset (or all) of the generators.
inline Vec random_mixture(const std::vector<Vec> &generators, SplitRng &rng, std::size_t terms) {
    Vec out = Vec::Zero(generators.front().size());
    std::vector<std::pair<std::size_t, double>> picks;
    double total = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
        const std::size_t idx = terms >= generators.size() ? t : rng.index(generators.size());
        const double w = -std::log(1.0 - rng.uniform());
        picks.emplace_back(idx, w);
        total += w;
    }
    for (const auto &[idx, w] : picks) {
        out += (w / total) * generators[idx];
    }
    return out;
}

}  // namespace detail

inline Vec random_product_state(const CompositeModel &cm, std::uint64_t seed) {
    detail::SplitRng rng(seed);
    const auto &ga = cm.system_a().state_generators();
    const auto &gb = cm.system_b().state_generators();
    const Vec w = detail::random_mixture(ga, rng, ga.size());
    const Vec v = detail::random_mixture(gb, rng, gb.size());
    return cm.compose_states(w, v);
}

/// Mixture of one to three randomly chosen composite state generators.
inline Vec random_composite_state(const CompositeModel &cm, std::uint64_t seed) {
    detail::SplitRng rng(seed);
    const std::size_t terms = 1 + rng.index(3);
    return detail::random_mixture(cm.composite_state_generators(), rng, terms);
}

enum class Prop1Sampling { Mixed, ProductOnly };

/// On a locally tomographic model, checks on seeded random states that
/// operational independence holds exactly when the state is the product of
/// its marginals. Trial k uses seed + k; with Mixed sampling even trials draw
/// product states and odd trials draw general mixtures.
inline Report prop1_check(const CompositeModel &cm, int trials, std::uint64_t seed, double tol = kPredicateTol,
                          Prop1Sampling sampling = Prop1Sampling::Mixed) {
    if (!is_locally_tomographic(cm)) {
        throw std::domain_error("prop1_check: model is not locally tomographic");
    }
    if (trials <= 0) {
        throw std::invalid_argument("prop1_check: trial count must be positive");
    }
    int products = 0;
    int disagreements = 0;
    double forward_worst = 0.0;
    double reverse_worst = 0.0;
    bool forward_ok = true;
    bool reverse_ok = true;
    for (int k = 0; k < trials; ++k) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(k);
        const bool draw_product = sampling == Prop1Sampling::ProductOnly || k % 2 == 0;
        const Vec s = draw_product ? random_product_state(cm, trial_seed) : random_composite_state(cm, trial_seed);
        const auto c = classify_state(cm, s, tol);
        if (c.product) {
            ++products;
            forward_worst = std::max(forward_worst, c.independence_residual);
            forward_ok = forward_ok && c.operationally_independent;
        }
        if (c.operationally_independent) {
            reverse_worst = std::max(reverse_worst, c.product_residual);
            reverse_ok = reverse_ok && c.product;
        }
        disagreements += c.operationally_independent != c.product ? 1 : 0;
    }
    Report r;
    r.scenario = "prop1 " + cm.name();
    r.tol = tol;
    r.seed = seed;
    r.add("product_implies_independent", forward_ok, forward_worst);
    r.add("independent_implies_product", reverse_ok, reverse_worst);
    r.add("biconditional_all_trials", disagreements == 0, static_cast<double>(disagreements),
          "trials=" + std::to_string(trials) + " product=" + std::to_string(products) +
              " non_product=" + std::to_string(trials - products));
    return r;
}

struct Prop2Result {
    bool found = false;
    Vec witness;    // s + t h
    Vec direction;  // h (unit norm)
    double scale = 0.0;
    Report report;
};

inline constexpr int kWitnessGridSteps = 1024;

/// Adds a holistic direction to a product state and checks that the result
/// is a valid state that is operationally independent yet not a product.
///
/// Holistic basis vectors are tried in order; for each, t runs over the grid
/// {k / 1024 : k = -1024..1024, k != 0} and the largest t giving a valid
/// state is kept.
inline Prop2Result prop2_witness(const CompositeModel &cm, const Vec &base_product, double tol = kPredicateTol) {
    cm.require_composite(base_product);
    const SubspaceBasis holistic = holistic_subspace(cm);
    if (holistic.dimension() == 0) {
        throw std::domain_error("prop2_witness: holistic subspace is empty");
    }
    if (!cm.is_valid_state(base_product, tol) || product_residual(cm, base_product) > tol) {
        throw std::invalid_argument("prop2_witness: base state must be a valid product state");
    }

    Prop2Result out;
    out.report.scenario = "prop2-witness " + cm.name();
    out.report.tol = tol;
    std::size_t which = 0;
    for (std::size_t idx = 0; idx < holistic.vectors.size() && !out.found; ++idx) {
        const Vec &h = holistic.vectors[idx];
        for (int k = kWitnessGridSteps; k >= -kWitnessGridSteps; --k) {
            if (k == 0) {
                continue;
            }
            const double t = static_cast<double>(k) / kWitnessGridSteps;
            const Vec candidate = base_product + t * h;
            if (cm.is_valid_state(candidate, tol)) {
                out.found = true;
                out.scale = t;
                out.direction = h;
                out.witness = candidate;
                which = idx;
                break;
            }
        }
    }
    Report &r = out.report;
    if (!out.found) {
        r.add("witness_found", false, 0.0, "no valid s + t h on the scaling grid");
        return out;
    }
    r.add("witness_found", true, out.scale,
          "t=" + json::number(out.scale) + " along holistic[" + std::to_string(which) + "]");

    const Vec &w = out.witness;
    const double violation = cm.state_violation(w);
    r.add("valid_state", violation <= tol, violation);
    const double norm_gap = std::abs(cm.unit_effect().dot(w) - 1.0);
    r.add("normalized", norm_gap <= tol, norm_gap, "u(s + h) = 1");

    const Mat functionals = local_effect_functionals(cm);
    const double stats_gap = (functionals * (w - base_product)).cwiseAbs().maxCoeff();
    r.add("identical_local_statistics", stats_gap <= tol, stats_gap);

    const auto [sa, sb] = marginals(cm, base_product);
    const auto [wa, wb] = marginals(cm, w);
    const double marg_gap = std::max((sa - wa).norm(), (sb - wb).norm());
    r.add("identical_marginals", marg_gap <= tol, marg_gap);

    const auto c = classify_state(cm, w, tol);
    r.add("operationally_independent", c.operationally_independent, c.independence_residual);
    r.add("not_product", !c.product, c.product_residual);
    return out;
}

/// Basis vectors of a subspace in operator form, as Matrix JSON objects.
inline nlohmann::json subspace_to_json(const CompositeModel &cm, const SubspaceBasis &basis) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &v : basis.vectors) {
        out.push_back(matrix_to_json(cm.to_operator(v)));
    }
    return out;
}

}  // namespace fermicheck
