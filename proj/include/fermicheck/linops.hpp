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

// Dense operators on small Hilbert spaces.
//
// Conventions used throughout the library:
//  * row-major storage, computational basis |0...0> first;
//  * subsystem 0 is the leftmost Kronecker factor (most significant digit);
//  * the inner product on operator spaces is Hilbert-Schmidt, <a, b> = Tr(a^dag b).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fermicheck {

/// Default tolerance for validity predicates.
inline constexpr double kPredicateTol = 1e-9;
/// Tolerance for identities that hold exactly by construction.
inline constexpr double kExactTol = 1e-12;

using cplx = std::complex<double>;

enum class Field { Real, Complex };

inline const char *field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct FieldError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotHermitianError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidStateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense rows x cols matrix over the reals or the complex numbers.
///
/// Entries are always stored as complex numbers; a Real matrix keeps every
/// imaginary part at exactly zero.
class Matrix {
   public:
    Matrix(std::size_t rows, std::size_t cols, Field field = Field::Complex)
        : rows_(rows), cols_(cols), field_(field), data_(rows * cols, cplx{0.0, 0.0}) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("Matrix: dimensions must be positive");
        }
    }

    Matrix(std::size_t rows, std::size_t cols, Field field, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), field_(field), data_(std::move(entries)) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("Matrix: dimensions must be positive");
        }
        if (data_.size() != rows * cols) {
            throw DimensionError("Matrix: entry count does not match rows*cols");
        }
        if (field_ == Field::Real) {
            for (const auto &z : data_) {
                if (z.imag() != 0.0) {
                    throw FieldError("Matrix: real matrix with nonzero imaginary entry");
                }
            }
        }
    }

    static Matrix identity(std::size_t n, Field field = Field::Real) {
        Matrix m(n, n, field);
        for (std::size_t i = 0; i < n; ++i) {
            m.data_[i * n + i] = 1.0;
        }
        return m;
    }

    static Matrix zeros(std::size_t rows, std::size_t cols, Field field = Field::Real) {
        return Matrix(rows, cols, field);
    }

    static Matrix diagonal(std::span<const double> values) {
        Matrix m(values.size(), values.size(), Field::Real);
        for (std::size_t i = 0; i < values.size(); ++i) {
            m.data_[i * values.size() + i] = values[i];
        }
        return m;
    }

    static Matrix diagonal(std::initializer_list<double> values) {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    static Matrix real(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<cplx> entries;
        entries.reserve(r * c);
        for (const auto &row : rows) {
            if (row.size() != c) {
                throw DimensionError("Matrix::real: ragged rows");
            }
            for (double v : row) {
                entries.emplace_back(v, 0.0);
            }
        }
        return Matrix(r, c, Field::Real, std::move(entries));
    }

    static Matrix complex(std::initializer_list<std::initializer_list<cplx>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<cplx> entries;
        entries.reserve(r * c);
        for (const auto &row : rows) {
            if (row.size() != c) {
                throw DimensionError("Matrix::complex: ragged rows");
            }
            entries.insert(entries.end(), row.begin(), row.end());
        }
        return Matrix(r, c, Field::Complex, std::move(entries));
    }

    /// Column vector with the given amplitudes.
    static Matrix column(std::vector<cplx> amplitudes, Field field = Field::Complex) {
        const std::size_t n = amplitudes.size();
        return Matrix(n, 1, field, std::move(amplitudes));
    }

    /// Computational basis ket |index> in dimension dim.
    static Matrix ket(std::size_t dim, std::size_t index, Field field = Field::Real) {
        if (index >= dim) {
            throw DimensionError("Matrix::ket: index out of range");
        }
        Matrix m(dim, 1, field);
        m.data_[index] = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    Field field() const { return field_; }
    bool is_square() const { return rows_ == cols_; }

    cplx operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void set(std::size_t r, std::size_t c, cplx value) {
        if (r >= rows_ || c >= cols_) {
            throw DimensionError("Matrix::set: index out of range");
        }
        if (field_ == Field::Real && value.imag() != 0.0) {
            throw FieldError("Matrix::set: complex value in a real matrix");
        }
        data_[r * cols_ + c] = value;
    }

    std::span<const cplx> entries() const { return data_; }

    Matrix as_complex() const {
        Matrix m = *this;
        m.field_ = Field::Complex;
        return m;
    }

    Matrix adjoint() const {
        Matrix m(cols_, rows_, field_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                m.data_[c * rows_ + r] = std::conj(data_[r * cols_ + c]);
            }
        }
        return m;
    }

    Matrix transpose() const {
        Matrix m(cols_, rows_, field_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                m.data_[c * rows_ + r] = data_[r * cols_ + c];
            }
        }
        return m;
    }

    cplx trace() const {
        if (!is_square()) {
            throw DimensionError("Matrix::trace: matrix is not square");
        }
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) {
            t += data_[i * cols_ + i];
        }
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto &z : data_) {
            s += std::norm(z);
        }
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto &z : data_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    Matrix &operator+=(const Matrix &o) {
        require_same_shape(o, "operator+=");
        field_ = promote(field_, o.field_);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }

    Matrix &operator-=(const Matrix &o) {
        require_same_shape(o, "operator-=");
        field_ = promote(field_, o.field_);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }

    Matrix &operator*=(double s) {
        for (auto &z : data_) {
            z *= s;
        }
        return *this;
    }

    Matrix &operator*=(cplx s) {
        if (s.imag() != 0.0) {
            field_ = Field::Complex;
            for (auto &z : data_) {
                z *= s;
            }
            return *this;
        }
        return *this *= s.real();
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator-(Matrix a) { return a *= -1.0; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator/(Matrix a, double s) { return a *= 1.0 / s; }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) {
            throw DimensionError("Matrix product: inner dimensions differ");
        }
        Matrix m(a.rows_, b.cols_, promote(a.field_, b.field_));
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a.data_[i * a.cols_ + k];
                if (aik == cplx{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    m.data_[i * b.cols_ + j] += aik * b.data_[k * b.cols_ + j];
                }
            }
        }
        m.scrub();
        return m;
    }

    bool operator==(const Matrix &o) const = default;

    static Field promote(Field a, Field b) {
        return (a == Field::Real && b == Field::Real) ? Field::Real : Field::Complex;
    }

   private:
    void require_same_shape(const Matrix &o, const char *what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError(std::string("Matrix ") + what + ": shape mismatch");
        }
    }

    // Products of real entries stored as complex numbers carry +-0 imaginary
    // parts; normalize them so a Real matrix holds exact zeros.
    void scrub() {
        if (field_ == Field::Real) {
            for (auto &z : data_) {
                z = cplx{z.real(), 0.0};
            }
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    Field field_;
    std::vector<cplx> data_;

    friend Matrix kron(const Matrix &a, const Matrix &b);
};

/// Kronecker product a (x) b. Both factors must carry the same field tag.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    if (a.field() != b.field()) {
        throw FieldError("kron: field mismatch");
    }
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    Matrix m(rows, cols, a.field());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx x = a(ar, ac);
            if (x == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    m.data_[(ar * b.rows() + br) * cols + ac * b.cols() + bc] = x * b(br, bc);
                }
            }
        }
    }
    m.scrub();
    return m;
}

inline Matrix kron(std::initializer_list<Matrix> factors) {
    if (factors.size() == 0) {
        throw DimensionError("kron: empty factor list");
    }
    auto it = factors.begin();
    Matrix out = *it;
    for (++it; it != factors.end(); ++it) {
        out = kron(out, *it);
    }
    return out;
}

/// Hilbert-Schmidt inner product Tr(a^dag b).
inline cplx hs_inner(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hs_inner: shape mismatch");
    }
    cplx s{0.0, 0.0};
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        s += std::conj(ea[i]) * eb[i];
    }
    return s;
}

inline Matrix commutator(const Matrix &a, const Matrix &b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix &a, const Matrix &b) { return a * b + b * a; }

/// Frobenius norm of [a, b].
inline double commutator_norm(const Matrix &a, const Matrix &b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionError("commutator_norm: operands must be square of equal size");
    }
    return commutator(a, b).frobenius_norm();
}

inline double hermiticity_defect(const Matrix &m) {
    if (!m.is_square()) {
        throw DimensionError("hermiticity_defect: matrix is not square");
    }
    return (m - m.adjoint()).frobenius_norm();
}

inline bool is_hermitian(const Matrix &m, double tol = kPredicateTol) {
    return m.is_square() && hermiticity_defect(m) <= tol;
}

namespace detail {

inline Eigen::MatrixXcd to_eigen(const Matrix &m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(r, c) = m(r, c);
        }
    }
    return out;
}

inline Matrix from_eigen(const Eigen::MatrixXcd &m, Field field) {
    std::vector<cplx> entries(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            cplx z = m(r, c);
            if (field == Field::Real) {
                z = cplx{z.real(), 0.0};
            }
            entries[static_cast<std::size_t>(r * m.cols() + c)] = z;
        }
    }
    return Matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), field,
                  std::move(entries));
}

}  // namespace detail

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k belongs to values[k]
};

/// Spectral decomposition of a Hermitian matrix; eigenvalues ascending.
inline EigenSystem herm_eigensystem(const Matrix &m, double tol = kPredicateTol) {
    if (!m.is_square()) {
        throw DimensionError("herm_eigen: matrix is not square");
    }
    if (hermiticity_defect(m) > tol * std::max(1.0, m.frobenius_norm())) {
        throw NotHermitianError("herm_eigen: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("herm_eigen: eigensolver did not converge");
    }
    const auto &ev = solver.eigenvalues();
    std::vector<double> values(ev.data(), ev.data() + ev.size());
    return {std::move(values), detail::from_eigen(solver.eigenvectors(), Field::Complex)};
}

inline std::vector<double> herm_eigen(const Matrix &m, double tol = kPredicateTol) {
    return herm_eigensystem(m, tol).values;
}

inline double min_eigenvalue(const Matrix &m) { return herm_eigen(m).front(); }

inline bool is_density(const Matrix &m, double tol = kPredicateTol) {
    if (!m.is_square() || !is_hermitian(m, tol)) {
        return false;
    }
    if (std::abs(m.trace() - cplx{1.0, 0.0}) > tol) {
        return false;
    }
    return herm_eigen(m, tol).front() >= -tol;
}

inline bool is_effect(const Matrix &m, double tol = kPredicateTol) {
    if (!m.is_square() || !is_hermitian(m, tol)) {
        return false;
    }
    const auto spectrum = herm_eigen(m, tol);
    return spectrum.front() >= -tol && spectrum.back() <= 1.0 + tol;
}

namespace detail {

inline std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline std::size_t stride_of(std::span<const std::size_t> dims, std::size_t k) {
    std::size_t s = 1;
    for (std::size_t p = k + 1; p < dims.size(); ++p) {
        s *= dims[p];
    }
    return s;
}

inline void check_dims(const Matrix &m, std::span<const std::size_t> dims, const char *what) {
    if (dims.empty()) {
        throw DimensionError(std::string(what) + ": empty subsystem list");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw DimensionError(std::string(what) + ": zero subsystem dimension");
        }
    }
    if (!m.is_square() || m.rows() != product(dims)) {
        throw DimensionError(std::string(what) + ": subsystem dimensions do not match operator");
    }
}

}  // namespace detail

/// Reduced operator on subsystem `keep`, tracing out every other factor.
inline Matrix partial_trace(const Matrix &m, std::span<const std::size_t> dims, std::size_t keep) {
    detail::check_dims(m, dims, "partial_trace");
    if (keep >= dims.size()) {
        throw DimensionError("partial_trace: subsystem index out of range");
    }
    const std::size_t n = m.rows();
    const std::size_t dk = dims[keep];
    const std::size_t stride = detail::stride_of(dims, keep);
    Matrix out(dk, dk, m.field());
    std::vector<cplx> acc(dk * dk, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = (i / stride) % dk;
        const std::size_t rest = i - a * stride;
        for (std::size_t b = 0; b < dk; ++b) {
            acc[a * dk + b] += m(i, rest + b * stride);
        }
    }
    for (std::size_t a = 0; a < dk; ++a) {
        for (std::size_t b = 0; b < dk; ++b) {
            out.set(a, b, m.field() == Field::Real ? cplx{acc[a * dk + b].real(), 0.0} : acc[a * dk + b]);
        }
    }
    return out;
}

/// Partial transpose on subsystem `which`.
inline Matrix partial_transpose(const Matrix &m, std::span<const std::size_t> dims, std::size_t which) {
    detail::check_dims(m, dims, "partial_transpose");
    if (which >= dims.size()) {
        throw DimensionError("partial_transpose: subsystem index out of range");
    }
    const std::size_t n = m.rows();
    const std::size_t dk = dims[which];
    const std::size_t stride = detail::stride_of(dims, which);
    std::vector<cplx> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t di = (i / stride) % dk;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t dj = (j / stride) % dk;
            const std::size_t src_i = i - di * stride + dj * stride;
            const std::size_t src_j = j - dj * stride + di * stride;
            entries[i * n + j] = m(src_i, src_j);
        }
    }
    return Matrix(n, n, m.field(), std::move(entries));
}

/// Positive-semidefinite, unit-trace operator with subsystem structure.
class QuantumState {
   public:
    QuantumState(Matrix op, std::vector<std::size_t> dims, double tol = kPredicateTol)
        : op_(std::move(op)), dims_(std::move(dims)) {
        detail::check_dims(op_, dims_, "QuantumState");
        if (!is_density(op_, tol)) {
            throw InvalidStateError("QuantumState: operator is not a density matrix");
        }
    }

    /// Single-system state with dims = {side}.
    explicit QuantumState(Matrix op, double tol = kPredicateTol)
        : QuantumState(op, std::vector<std::size_t>{op.rows()}, tol) {}

    /// |psi><psi| for a normalized column vector psi.
    static QuantumState pure(const Matrix &psi, std::vector<std::size_t> dims) {
        if (psi.cols() != 1) {
            throw DimensionError("QuantumState::pure: expected a column vector");
        }
        return QuantumState(psi * psi.adjoint(), std::move(dims));
    }

    const Matrix &op() const { return op_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    std::size_t side() const { return op_.rows(); }

    /// Same operator viewed with a different factorization of the space.
    QuantumState with_dims(std::vector<std::size_t> dims) const {
        detail::check_dims(op_, dims, "QuantumState::with_dims");
        QuantumState s = *this;
        s.dims_ = std::move(dims);
        return s;
    }

   private:
    QuantumState(Matrix op, std::vector<std::size_t> dims, std::nullptr_t)
        : op_(std::move(op)), dims_(std::move(dims)) {}

    Matrix op_;
    std::vector<std::size_t> dims_;

    friend QuantumState partial_trace(const QuantumState &, std::size_t);
    friend QuantumState project_to_state(const Matrix &, std::vector<std::size_t>);
};

/// Marginal state on subsystem `keep`.
inline QuantumState partial_trace(const QuantumState &s, std::size_t keep) {
    if (s.dims().size() < 2) {
        throw DimensionError("partial_trace: state has a single subsystem");
    }
    if (keep >= s.dims().size()) {
        throw DimensionError("partial_trace: subsystem index out of range");
    }
    Matrix reduced = partial_trace(s.op(), s.dims(), keep);
    return QuantumState(std::move(reduced), {s.dims()[keep]}, nullptr);
}

/// Nearest state in spectral sense: symmetrize, clip negative eigenvalues, renormalize.
inline QuantumState project_to_state(const Matrix &m, std::vector<std::size_t> dims) {
    detail::check_dims(m, dims, "project_to_state");
    const Matrix herm = (m + m.adjoint()) * 0.5;
    const auto es = herm_eigensystem(herm);
    Matrix out(m.rows(), m.cols(), Field::Complex);
    double total = 0.0;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        const double w = std::max(es.values[k], 0.0);
        if (w == 0.0) {
            continue;
        }
        total += w;
        Matrix v(m.rows(), 1, Field::Complex);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            v.set(r, 0, es.vectors(r, k));
        }
        out += (v * v.adjoint()) * w;
    }
    if (total <= 0.0) {
        throw InvalidStateError("project_to_state: operator has no positive part");
    }
    out *= 1.0 / total;
    if (m.field() == Field::Real) {
        std::vector<cplx> entries;
        entries.reserve(out.size());
        for (const auto &z : out.entries()) {
            entries.emplace_back(z.real(), 0.0);
        }
        out = Matrix(m.rows(), m.cols(), Field::Real, std::move(entries));
    }
    return QuantumState(std::move(out), std::move(dims), nullptr);
}

/// Hermitian operator with spectrum in [0, 1].
class Effect {
   public:
    explicit Effect(Matrix op, double tol = kPredicateTol) : op_(std::move(op)) {
        if (!is_effect(op_, tol)) {
            throw std::invalid_argument("Effect: operator spectrum outside [0, 1]");
        }
    }
    const Matrix &op() const { return op_; }

    /// Born probability Tr(E rho).
    double probability(const QuantumState &s) const { return hs_inner(op_, s.op()).real(); }

   private:
    Matrix op_;
};

namespace pauli {

inline Matrix I() { return Matrix::identity(2); }
inline Matrix X() { return Matrix::real({{0, 1}, {1, 0}}); }
inline Matrix Y() { return Matrix::complex({{0, cplx{0, -1}}, {cplx{0, 1}, 0}}); }
inline Matrix Z() { return Matrix::real({{1, 0}, {0, -1}}); }
/// sigma^- = |0><1|, lowers an occupied mode to the vacuum.
inline Matrix lowering() { return Matrix::real({{0, 1}, {0, 0}}); }
inline Matrix raising() { return Matrix::real({{0, 0}, {1, 0}}); }

}  // namespace pauli

}  // namespace fermicheck
