/*
 * Copyright 2026 The sal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <doctest.h>

#include <Eigen/Cholesky>

#include "oracles.hpp"
#include "sal/kernel.hpp"
#include "sal/optim.hpp"
#include "sal/rng.hpp"

using namespace sal;

namespace {

KernelConfig make_kernel(KernelKind kind, double l = 0.1, double sigma0 = 1.0) {
    KernelConfig k;
    k.kind = kind;
    k.length_scale = l;
    k.sigma0 = sigma0;
    return k;
}

PointMatrix random_points(Rng& rng, Index n, Index d) {
    PointMatrix x(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < d; ++k) x(i, k) = rng.uniform();
    return x;
}

} // namespace

TEST_CASE("kernel examples") {
    const Vector a{{0.3, 0.7}};
    CHECK(kernel_eval(make_kernel(KernelKind::rbf, 3.7), a, a) == 1.0);
    CHECK(kernel_eval(make_kernel(KernelKind::matern52, 0.2), a, a) == 1.0);
    CHECK(kernel_eval(make_kernel(KernelKind::rbf, 1.0), Vector{{0.0}}, Vector{{1.0}}) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(kernel_eval(make_kernel(KernelKind::cubic, 0.1, 0.0), Vector{{1.0}}, Vector{{1.0}}) == 1.0);
    CHECK_THROWS_AS(kernel_eval(make_kernel(KernelKind::rbf), Vector{{1.0}}, a), ValidationError);
}

TEST_CASE("kernel tokens") {
    for (auto k : {KernelKind::rbf, KernelKind::matern52, KernelKind::cubic}) CHECK(parse_kernel_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_kernel_kind("linear"), ValidationError);
}

TEST_CASE("kernel agrees with the reference formulas") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a{rng.uniform(), rng.uniform(), rng.uniform()};
        std::vector<double> b{rng.uniform(), rng.uniform(), rng.uniform()};
        const double l = rng.uniform(0.05, 2.0);
        const Eigen::Map<const Vector> va(a.data(), 3), vb(b.data(), 3);
        CHECK(std::abs(kernel_eval(make_kernel(KernelKind::rbf, l), va, vb) - oracle::kernel(oracle::Kernel::rbf, l, a, b)) <
              1e-14);
        CHECK(std::abs(kernel_eval(make_kernel(KernelKind::matern52, l), va, vb) -
                       oracle::kernel(oracle::Kernel::matern52, l, a, b)) < 1e-14);
    }
}

TEST_CASE("gram matrices are symmetric and factor with jitter") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const Index n = 1 + static_cast<Index>(rng.below(30));
        const PointMatrix x = random_points(rng, n, 1 + static_cast<Index>(rng.below(4)));
        for (auto kind : {KernelKind::rbf, KernelKind::matern52}) {
            const Matrix K = gram(make_kernel(kind, rng.uniform(0.05, 1.0)), x);
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j) REQUIRE(K(i, j) == K(j, i));
            Eigen::LLT<Matrix> llt(K + 1e-6 * Matrix::Identity(n, n));
            CHECK(llt.info() == Eigen::Success);
        }
        const Matrix C = cross_kernel(make_kernel(KernelKind::matern52), x, x);
        CHECK((C - gram(make_kernel(KernelKind::matern52), x)).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("gram gradients match finite differences") {
    Rng rng(8);
    const PointMatrix x = random_points(rng, 7, 2);
    for (auto kind : {KernelKind::rbf, KernelKind::matern52, KernelKind::cubic}) {
        KernelConfig k = make_kernel(kind, 0.3, 0.7);
        const auto [K, dK] = gram_with_gradients(k, x);
        REQUIRE(dK.size() == 1);
        const Vector theta = k.log_hyper();
        const double h = 1e-6;
        KernelConfig kp = k, km = k;
        kp.set_log_hyper(theta.array() + h);
        km.set_log_hyper(theta.array() - h);
        const Matrix fd = (gram(kp, x) - gram(km, x)) / (2 * h);
        CHECK((fd - dK[0]).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + dK[0].cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("log hyperparameter mapping") {
    KernelConfig k = make_kernel(KernelKind::matern52, 0.1);
    CHECK(k.log_hyper()(0) == doctest::Approx(std::log(0.1)));
    k.set_log_hyper(Vector::Constant(1, std::log(2.0)));
    CHECK(k.length_scale == doctest::Approx(2.0));
    KernelConfig c = make_kernel(KernelKind::cubic, 0.1, 3.0);
    CHECK(c.log_hyper()(0) == doctest::Approx(std::log(3.0)));
    const auto [lo, hi] = c.log_hyper_bounds();
    CHECK(lo(0) == doctest::Approx(std::log(1e-5)));
    CHECK(hi(0) == doctest::Approx(std::log(1e5)));
    KernelConfig bad = make_kernel(KernelKind::rbf, -1.0);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("bounded minimizer: unconstrained quadratic") {
    const Vector target{{1.0, -2.0, 0.5}};
    auto fg = [&](const Vector& x, Vector& g) {
        g = 2.0 * (x - target);
        return (x - target).squaredNorm();
    };
    const auto r = minimize_bounded(fg, Vector::Zero(3), Vector::Constant(3, -10), Vector::Constant(3, 10));
    CHECK(r.converged);
    CHECK((r.x - target).norm() < 1e-5);
}

TEST_CASE("bounded minimizer: active bound") {
    auto fg = [](const Vector& x, Vector& g) {
        g = Vector{{2.0 * (x(0) - 3.0), 2.0 * (x(1) + 1.0)}};
        return (x(0) - 3.0) * (x(0) - 3.0) + (x(1) + 1.0) * (x(1) + 1.0);
    };
    const auto r = minimize_bounded(fg, Vector::Zero(2), Vector{{-1.0, -0.5}}, Vector{{1.0, 1.0}});
    CHECK(r.x(0) == doctest::Approx(1.0));
    CHECK(r.x(1) == doctest::Approx(-0.5));
}

TEST_CASE("bounded minimizer: Rosenbrock never increases f") {
    auto fg = [](const Vector& x, Vector& g) {
        const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
        g = Vector{{-2.0 * a - 400.0 * x(0) * b, 200.0 * b}};
        return a * a + 100.0 * b * b;
    };
    const Vector x0{{-1.2, 1.0}};
    Vector g0;
    const double f0 = fg(x0, g0);
    BoundedMinimizerOptions opt;
    opt.max_iterations = 1000;
    const auto r = minimize_bounded(fg, x0, Vector::Constant(2, -5), Vector::Constant(2, 5), opt);
    CHECK(r.value <= f0);
    CHECK((r.x - Vector{{1.0, 1.0}}).norm() < 1e-3);
}

TEST_CASE("bounded minimizer: non-finite start is an error") {
    auto fg = [](const Vector&, Vector& g) {
        g = Vector::Zero(1);
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK_THROWS_AS(minimize_bounded(fg, Vector::Zero(1), Vector::Constant(1, -1), Vector::Constant(1, 1)), NumericalError);
}
