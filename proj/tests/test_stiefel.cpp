// Copyright 2026 The qecopt Authors
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

#include <gtest/gtest.h>

#include "qecopt/errors.hpp"
#include "qecopt/stiefel.hpp"
#include "support.hpp"

namespace qecopt {
namespace {

using testing::Rng;

Matrix random_tangent(Rng& rng, const Matrix& u) {
    return stiefel::project_tangent(u, rng.matrix(u.rows(), u.cols()));
}

// f(U) = tr(H U U^dagger) for Hermitian H; Euclidean gradient 2 H U.
double quadratic(const Matrix& h, const Matrix& u) { return (h * u * u.adjoint()).trace().real(); }

TEST(ProjectTangent, KillsBasePoint) {
    Rng rng(60);
    const Matrix u = rng.isometry(6, 2);
    EXPECT_LT(stiefel::project_tangent(u, u).norm(), 1e-12);
}

TEST(ProjectTangent, IdempotentTangentAndOrthogonalSplit) {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = rng.integer(1, 8);
        const Index d = rng.integer(1, static_cast<int>(n));
        const Matrix u = rng.isometry(n, d);
        const Matrix x = rng.matrix(n, d);
        const Matrix p = stiefel::project_tangent(u, x);
        EXPECT_LT(stiefel::tangency_deviation(u, p), 1e-10);
        EXPECT_LT((p.adjoint() * u + u.adjoint() * p).norm(), 1e-10);
        EXPECT_LT((stiefel::project_tangent(u, p) - p).norm(), 1e-10);
        EXPECT_NEAR(stiefel::canonical_inner(u, p, x - p), 0.0, 1e-10 * (1.0 + x.squaredNorm()));
    }
}

TEST(ProjectTangent, LeavesTangentVectorsAlone) {
    Rng rng(62);
    const Matrix u = rng.isometry(5, 2);
    const Matrix x = random_tangent(rng, u);
    EXPECT_LT((stiefel::project_tangent(u, x) - x).norm(), 1e-12);
}

TEST(CanonicalInner, OffSupportIsEuclidean) {
    const Matrix u = Matrix::Identity(3, 1);
    Matrix e2 = Matrix::Zero(3, 1);
    e2(1, 0) = 1.0;
    EXPECT_NEAR(stiefel::canonical_inner(u, e2, e2), 1.0, 1e-15);
}

TEST(CanonicalInner, MatchesDefinition) {
    Rng rng(63);
    const Matrix u = rng.isometry(5, 3);
    const Matrix x = rng.matrix(5, 3);
    const Matrix y = rng.matrix(5, 3);
    const Matrix g = Matrix::Identity(5, 5) - 0.5 * u * u.adjoint();
    EXPECT_NEAR(stiefel::canonical_inner(u, x, y), (x.adjoint() * g * y).trace().real(), 1e-12);
}

TEST(CanonicalInner, SymmetricAndPositiveOnTangentSpace) {
    Rng rng(64);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = rng.integer(2, 7);
        const Index d = rng.integer(1, static_cast<int>(n));
        const Matrix u = rng.isometry(n, d);
        const Matrix x = random_tangent(rng, u);
        const Matrix y = random_tangent(rng, u);
        EXPECT_NEAR(stiefel::canonical_inner(u, x, y), stiefel::canonical_inner(u, y, x), 1e-12);
        EXPECT_GT(stiefel::canonical_inner(u, x, x), 0.0);
        EXPECT_NEAR(stiefel::canonical_norm(u, x), std::sqrt(stiefel::canonical_inner(u, x, x)), 1e-12);
    }
    const Matrix u = rng.isometry(4, 2);
    EXPECT_EQ(stiefel::canonical_inner(u, Matrix::Zero(4, 2), Matrix::Zero(4, 2)), 0.0);
}

TEST(CanonicalInner, InvariantUnderLeftUnitaries) {
    Rng rng(65);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix u = rng.isometry(6, 2);
        const Matrix x = random_tangent(rng, u);
        const Matrix y = random_tangent(rng, u);
        const Matrix w = rng.unitary(6);
        EXPECT_NEAR(stiefel::canonical_inner(w * u, w * x, w * y), stiefel::canonical_inner(u, x, y),
                    1e-12);
    }
}

TEST(RiemannianGrad, Examples) {
    Rng rng(66);
    const Matrix u = rng.isometry(6, 2);
    EXPECT_LT(stiefel::riemannian_grad(u, u).norm(), 1e-12);
    // Normal to the code space: G - U G^dagger U leaves G alone.
    const Matrix normal = (Matrix::Identity(6, 6) - u * u.adjoint()) * rng.matrix(6, 2);
    EXPECT_LT((stiefel::riemannian_grad(u, normal) - normal).norm(), 1e-12);
    // A skew-Hermitian U^dagger G = S is doubled: U G^dagger U = -U S.
    const Matrix s = rng.skew_hermitian(2);
    EXPECT_LT((stiefel::riemannian_grad(u, u * s + normal) - (2.0 * u * s + normal)).norm(), 1e-12);
    const Matrix r = stiefel::riemannian_grad(u, rng.matrix(6, 2));
    EXPECT_LT((r.adjoint() * u + u.adjoint() * r).norm(), 1e-10);
}

TEST(RiemannianGrad, MatchesDirectionalDerivatives) {
    Rng rng(67);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix h = rng.hermitian(6);
        const Matrix u = rng.isometry(6, 2);
        const Matrix grad = stiefel::riemannian_grad(u, 2.0 * h * u);
        for (int dir = 0; dir < 10; ++dir) {
            const Matrix x = random_tangent(rng, u);
            const double t = 1e-5;
            const double fd = (quadratic(h, stiefel::exp_map(u, t * x)) -
                               quadratic(h, stiefel::exp_map(u, -t * x))) /
                              (2 * t);
            const double analytic = stiefel::canonical_inner(u, grad, x);
            EXPECT_NEAR(fd, analytic, 1e-5 * std::max(1.0, std::abs(analytic)));
        }
    }
}

TEST(ExpMap, ZeroAndCircle) {
    Rng rng(68);
    const Matrix u = rng.isometry(5, 2);
    EXPECT_EQ(stiefel::exp_map(u, Matrix::Zero(5, 2)), u);
    const double theta = 0.7;
    const Matrix one = Matrix::Constant(1, 1, 1.0);
    const Matrix out = stiefel::exp_map(one, Matrix::Constant(1, 1, Complex(0, theta)));
    EXPECT_LT(std::abs(out(0, 0) - std::exp(Complex(0, theta))), 1e-14);
}

TEST(ExpMap, StaysOnManifoldAndStartsAlongX) {
    Rng rng(69);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = rng.integer(2, 8);
        const Index d = rng.integer(1, static_cast<int>(n));
        const Matrix u = rng.isometry(n, d);
        const Matrix x = random_tangent(rng, u);
        EXPECT_LT(linalg::isometry_deviation(stiefel::exp_map(u, x)), 1e-9);
        EXPECT_LT(linalg::isometry_deviation(stiefel::exp_map(u, 3.0 * x)), 1e-9);
        const double t = 1e-4;
        EXPECT_LT((stiefel::exp_map(u, t * x) - (u + t * x)).norm(), 1e-7 * (1.0 + x.squaredNorm()));
        const double h = 1e-6;
        const Matrix velocity = (stiefel::exp_map(u, h * x) - stiefel::exp_map(u, -h * x)) / (2 * h);
        EXPECT_LT((velocity - x).norm(), 1e-5 * (1.0 + x.norm()));
    }
}

TEST(QrRetract, ZeroAndManifold) {
    Rng rng(71);
    const Matrix u = rng.isometry(6, 3);
    EXPECT_LT((stiefel::qr_retract(u, Matrix::Zero(6, 3)) - u).norm(), 1e-12);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = rng.integer(2, 8);
        const Index d = rng.integer(1, static_cast<int>(n));
        const Matrix v = rng.isometry(n, d);
        const Matrix x = random_tangent(rng, v);
        EXPECT_LT(linalg::isometry_deviation(stiefel::qr_retract(v, x)), 1e-10);
    }
}

TEST(QrRetract, AgreesWithExpToSecondOrder) {
    Rng rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u = rng.isometry(8, 2);
        const Matrix x = random_tangent(rng, u);
        auto gap = [&](double t) {
            return (stiefel::qr_retract(u, t * x) - stiefel::exp_map(u, t * x)).norm();
        };
        const double ratio = gap(1e-2) / gap(1e-3);
        EXPECT_GE(ratio, 50.0);
        EXPECT_LE(ratio, 200.0);
    }
}

TEST(QrRetract, RankDeficientStepIsNumericalError) {
    const Matrix u = Matrix::Identity(3, 1);
    EXPECT_THROW(stiefel::qr_retract(u, -u), NumericalError);
}

TEST(Retract, DispatchesOnKind) {
    Rng rng(73);
    const Matrix u = rng.isometry(5, 2);
    const Matrix x = random_tangent(rng, u);
    EXPECT_EQ(stiefel::retract(stiefel::Retraction::kQr, u, x), stiefel::qr_retract(u, x));
    EXPECT_EQ(stiefel::retract(stiefel::Retraction::kExp, u, x), stiefel::exp_map(u, x));
}

TEST(Renormalize, Examples) {
    Rng rng(74);
    const Matrix u = rng.isometry(6, 2);
    EXPECT_LT((stiefel::renormalize(u) - u).norm(), 1e-12);
    Eigen::VectorXcd stretch(2);
    stretch << 1.001, 0.999;
    EXPECT_LT((stiefel::renormalize(u * stretch.asDiagonal()) - u).norm(), 1e-12);
}

TEST(Renormalize, RepairsSmallPerturbations) {
    Rng rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix u = rng.isometry(7, 3);
        Matrix e = rng.matrix(7, 3);
        e /= e.norm();
        const Matrix polar = stiefel::renormalize(u + 1e-6 * e);
        EXPECT_LT((polar - u).norm(), 2e-6);
        EXPECT_LT(linalg::isometry_deviation(polar), 1e-12);
        const Matrix qr = stiefel::renormalize(u + 1e-6 * e, stiefel::Repair::kQr);
        EXPECT_LT(linalg::isometry_deviation(qr), 1e-12);
    }
}

TEST(Renormalize, RankDeficientInputIsNumericalError) {
    Matrix u = Matrix::Zero(4, 2);
    u(0, 0) = 1.0;
    u(0, 1) = 1.0;
    EXPECT_THROW(stiefel::renormalize(u), NumericalError);
}

TEST(HaarIsometry, SeededAndIsometric) {
    const Matrix a = stiefel::haar_isometry(8, 3, 7);
    EXPECT_EQ(a, stiefel::haar_isometry(8, 3, 7));
    EXPECT_NE(a, stiefel::haar_isometry(8, 3, 8));
    EXPECT_LT(linalg::isometry_deviation(a), 1e-12);
}

TEST(HaarIsometry, FirstColumnIsUniformOnTheSphere) {
    // E|u_0|^2 = 1/n for the first column of a Haar isometry.
    double mean = 0.0;
    const int draws = 4000;
    for (int s = 0; s < draws; ++s) mean += std::norm(stiefel::haar_isometry(4, 2, s)(0, 0));
    mean /= draws;
    EXPECT_NEAR(mean, 0.25, 0.02);
}

}  // namespace
}  // namespace qecopt
