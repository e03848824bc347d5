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


#include "fermicheck/linops.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "fermicheck/matrix_json.hpp"
#include "test_util.hpp"

using namespace fermicheck;

namespace {

// 1/2 (|phi+><phi+| + |psi+><psi+|) written out entry by entry.
Matrix mixed_bell() {
    return Matrix::real({{0.25, 0, 0, 0.25}, {0, 0.25, 0.25, 0}, {0, 0.25, 0.25, 0}, {0.25, 0, 0, 0.25}});
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_EQ(kron(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4));
}

TEST(Kron, ProjectorTimesProjector) {
    EXPECT_EQ(kron(Matrix::diagonal({1, 0}), Matrix::diagonal({1, 0})), Matrix::diagonal({1, 0, 0, 0}));
}

TEST(Kron, ZTimesZ) {
    // hand expansion: diag(1,-1) (x) diag(1,-1) = diag(1*1, 1*-1, -1*1, -1*-1)
    EXPECT_EQ(kron(pauli::Z(), pauli::Z()), Matrix::diagonal({1, -1, -1, 1}));
}

TEST(Kron, RejectsFieldMismatch) { EXPECT_THROW(kron(pauli::X(), pauli::Y()), FieldError); }

TEST(Kron, RectangularShapes) {
    const Matrix col = Matrix::column({1, 2}, Field::Real);
    const Matrix row = Matrix::real({{3, 4, 5}});
    const Matrix k = kron(col, row);
    ASSERT_EQ(k.rows(), 2u);
    ASSERT_EQ(k.cols(), 3u);
    EXPECT_EQ(k(1, 2), cplx(10, 0));
}

TEST(KronProperty, AssociativeAndTraceMultiplicative) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = fctest::ginibre(rng, 2, 2);
        const Matrix b = fctest::ginibre(rng, 3, 3);
        const Matrix c = fctest::ginibre(rng, 2, 2);
        EXPECT_LT(fctest::max_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
        EXPECT_LT(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 1e-12);
    }
}

TEST(KronProperty, Bilinear) {
    std::mt19937_64 rng(8);
    const Matrix a1 = fctest::ginibre(rng, 2, 2);
    const Matrix a2 = fctest::ginibre(rng, 2, 2);
    const Matrix b = fctest::ginibre(rng, 3, 3);
    EXPECT_LT(fctest::max_diff(kron(a1 * 2.0 + a2, b), kron(a1, b) * 2.0 + kron(a2, b)), 1e-12);
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
    const Matrix v = Matrix::column({1, 0, 0, 1}, Field::Real);
    const QuantumState phi(0.5 * (v * v.transpose()), {2, 2});
    EXPECT_EQ(partial_trace(phi, 0).op(), Matrix::identity(2) * 0.5);
    EXPECT_EQ(partial_trace(phi, 1).op(), Matrix::identity(2) * 0.5);
}

TEST(PartialTrace, MixedBellStateAgainstHandTraceOut) {
    const Matrix rho = mixed_bell();
    // trace out A by hand: out(b, b') = sum_a rho(2a + b, 2a + b')
    Matrix oracle(2, 2, Field::Real);
    for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t bp = 0; bp < 2; ++bp) {
            oracle.set(b, bp, rho(b, bp) + rho(2 + b, 2 + bp));
        }
    }
    const QuantumState s(rho, {2, 2});
    EXPECT_EQ(partial_trace(s, 1).op(), oracle);
    EXPECT_EQ(oracle, Matrix::identity(2) * 0.5);
}

TEST(PartialTrace, ErrorPaths) {
    const QuantumState single(Matrix::identity(2) * 0.5);
    EXPECT_THROW(partial_trace(single, 0), DimensionError);
    const QuantumState pair(Matrix::identity(4) * 0.25, {2, 2});
    EXPECT_THROW(partial_trace(pair, 2), DimensionError);
}

TEST(PartialTraceProperty, ProductFactorization) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t da = 2 + trial % 2;
        const std::size_t db = 2 + (trial / 2) % 3;
        const Matrix ra = fctest::random_density(rng, da);
        const Matrix rb = fctest::random_density(rng, db);
        const QuantumState s(kron(ra, rb), {da, db});
        EXPECT_LT(fctest::max_diff(partial_trace(s, 0).op(), ra), 1e-12);
        EXPECT_LT(fctest::max_diff(partial_trace(s, 1).op(), rb), 1e-12);
        EXPECT_NEAR(partial_trace(s, 0).op().trace().real(), 1.0, 1e-12);
    }
}

TEST(PartialTrace, ThreeParties) {
    std::mt19937_64 rng(12);
    const Matrix a = fctest::random_density(rng, 2);
    const Matrix b = fctest::random_density(rng, 3);
    const Matrix c = fctest::random_density(rng, 2);
    const std::vector<std::size_t> dims = {2, 3, 2};
    const Matrix abc = kron({a, b, c});
    EXPECT_LT(fctest::max_diff(partial_trace(abc, dims, 1), b), 1e-12);
    EXPECT_LT(fctest::max_diff(partial_trace(abc, dims, 2), c), 1e-12);
}

TEST(IsDensity, Examples) {
    EXPECT_TRUE(is_density(Matrix::identity(4) * 0.25));
    EXPECT_TRUE(is_density(mixed_bell()));
    EXPECT_FALSE(is_density(pauli::Z()));
    EXPECT_FALSE(is_density(Matrix::real({{1, 0, 0}})));
    EXPECT_FALSE(is_density(Matrix::real({{0.5, 0.5}, {0, 0.5}})));
    EXPECT_FALSE(is_density(Matrix::identity(2)));
}

TEST(IsEffect, Examples) {
    EXPECT_TRUE(is_effect(Matrix::diagonal({1, 0})));
    EXPECT_FALSE(is_effect(Matrix::identity(2) * 2.0));
    // (I + Pi)/2 with Pi = diag(1, -1) is diag(1, 0), spectrum {0, 1}
    const Matrix e = (Matrix::identity(2) + pauli::Z()) * 0.5;
    EXPECT_EQ(e, Matrix::diagonal({1, 0}));
    EXPECT_TRUE(is_effect(e));
    EXPECT_NO_THROW(Effect{e});
    EXPECT_THROW(Effect{pauli::X()}, std::invalid_argument);
}

TEST(HermEigen, Examples) {
    EXPECT_EQ(herm_eigen(Matrix::diagonal({3, 1, 2})), (std::vector<double>{1, 2, 3}));
    const auto x = herm_eigen(pauli::X());
    EXPECT_NEAR(x[0], -1.0, 1e-12);
    EXPECT_NEAR(x[1], 1.0, 1e-12);
}

TEST(HermEigen, MixedBellSpectrum) {
    // rho^2 = rho / 2 forces every eigenvalue into {0, 1/2}; trace 1 forces two halves.
    const Matrix rho = mixed_bell();
    EXPECT_EQ(rho * rho, rho * 0.5);
    EXPECT_EQ(rho.trace(), cplx(1.0, 0.0));
    const auto spec = herm_eigen(rho);
    const double expected[4] = {0.0, 0.0, 0.5, 0.5};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(spec[k], expected[k], 1e-12);
    }
}

TEST(HermEigen, RejectsNonHermitian) {
    EXPECT_THROW(herm_eigen(Matrix::real({{0, 1}, {0, 0}})), NotHermitianError);
    EXPECT_THROW(herm_eigen(Matrix::real({{0, 1, 2}})), DimensionError);
}

TEST(HermEigenProperty, Reconstruction) {
    std::mt19937_64 rng(21);
    for (std::size_t n = 1; n <= 16; ++n) {
        const Matrix h = fctest::random_hermitian(rng, n);
        const auto es = herm_eigensystem(h);
        ASSERT_TRUE(std::is_sorted(es.values.begin(), es.values.end()));
        Matrix rebuilt = Matrix::zeros(n, n, Field::Complex);
        for (std::size_t k = 0; k < n; ++k) {
            Matrix v(n, 1, Field::Complex);
            for (std::size_t r = 0; r < n; ++r) {
                v.set(r, 0, es.vectors(r, k));
            }
            rebuilt += (v * v.adjoint()) * es.values[k];
        }
        EXPECT_LT((rebuilt - h).frobenius_norm(), 1e-9) << "n=" << n;
    }
}

TEST(CommutatorNorm, Examples) {
    EXPECT_EQ(commutator_norm(pauli::Z(), pauli::Z()), 0.0);
    // [X, Z] = -2i Y
    const Matrix c = commutator(pauli::X(), pauli::Z());
    EXPECT_EQ(fctest::max_diff(c, pauli::Y() * cplx(0, -2)), 0.0);
    EXPECT_NEAR(commutator_norm(pauli::X(), pauli::Z()), 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(commutator_norm(Matrix::diagonal({1.5, -2}), Matrix::diagonal({0.25, 7})), 0.0);
    EXPECT_THROW(commutator_norm(pauli::X(), Matrix::identity(4)), DimensionError);
}

TEST(DensityProperty, ClosedUnderKron) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix a = fctest::random_density(rng, 2, 1 + trial % 2);
        const Matrix b = fctest::random_density(rng, 3, 1 + trial % 3);
        ASSERT_TRUE(is_density(a));
        ASSERT_TRUE(is_density(b));
        EXPECT_TRUE(is_density(kron(a, b)));
    }
}

TEST(MatrixField, RealMatricesRejectImaginaryEntries) {
    EXPECT_THROW(Matrix(1, 1, Field::Real, {cplx(0, 1)}), FieldError);
    Matrix m = Matrix::identity(2);
    EXPECT_THROW(m.set(0, 1, cplx(0, 1)), FieldError);
    EXPECT_THROW(Matrix(2, 2, Field::Real, {1, 2, 3}), DimensionError);
    EXPECT_THROW(Matrix(0, 2), DimensionError);
    EXPECT_EQ((pauli::X() * pauli::Z()).field(), Field::Real);
    EXPECT_EQ((pauli::X() * pauli::Y()).field(), Field::Complex);
}

TEST(QuantumStateType, ValidatesOnConstruction) {
    EXPECT_THROW(QuantumState(pauli::Z()), InvalidStateError);
    EXPECT_THROW(QuantumState(Matrix::identity(4) * 0.25, {2, 3}), DimensionError);
    const QuantumState s(Matrix::identity(4) * 0.25, {2, 2});
    EXPECT_EQ(s.dims(), (std::vector<std::size_t>{2, 2}));
}

TEST(ProjectToState, ClipsNegativeEigenvalues) {
    const QuantumState s = project_to_state(Matrix::diagonal({0.75, -0.25, 0.5}), {3});
    EXPECT_LT(fctest::max_diff(s.op(), Matrix::diagonal({0.6, 0.0, 0.4})), 1e-12);
}

TEST(PartialTranspose, BellStateIsHalfSwap) {
    const Matrix v = Matrix::column({1, 0, 0, 1}, Field::Real);
    const Matrix phi = 0.5 * (v * v.transpose());
    const Matrix swap = Matrix::real({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
    const std::vector<std::size_t> dims = {2, 2};
    EXPECT_EQ(partial_transpose(phi, dims, 1), swap * 0.5);
    EXPECT_EQ(partial_transpose(phi, dims, 0), swap * 0.5);
}

TEST(MatrixJson, SchemaAndErrors) {
    const auto j = matrix_to_json(pauli::Y());
    EXPECT_EQ(j.at("rows"), 2);
    EXPECT_EQ(j.at("cols"), 2);
    EXPECT_EQ(j.at("field"), "complex");
    ASSERT_EQ(j.at("data").size(), 4u);
    EXPECT_EQ(j.at("data")[1][1], -1.0);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"rows":1,"cols":1,"field":"quaternion","data":[[1,0]]})")),
                 FieldError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"rows":2,"cols":1,"field":"real","data":[[1,0]]})")),
                 DimensionError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"rows":1,"cols":1,"field":"real","data":[[1,0.5]]})")),
                 FieldError);
}

TEST(MatrixJsonProperty, BitExactRoundTrip) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t r = 1 + trial % 5;
        const std::size_t c = 1 + (trial / 5) % 5;
        Matrix m = fctest::ginibre(rng, r, c) * std::pow(10.0, trial - 12);
        const Matrix back = matrix_from_json_string(matrix_to_json_string(m));
        ASSERT_EQ(back, m);
        const Matrix real_m(r, c, Field::Real, std::vector<cplx>(r * c, cplx(1.0 / 3.0, 0.0)));
        ASSERT_EQ(matrix_from_json_string(matrix_to_json_string(real_m)), real_m);
    }
}
