#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/regress/pca.hpp"
#include "cellbench/regress/pipeline.hpp"
#include "cellbench/regress/ridge.hpp"

using namespace cellbench;
using namespace cellbench::regress;

namespace {

Matrix gaussian(Rng &rng, Eigen::Index n, Eigen::Index d) {
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
    return m;
}

// Eigen-decomposition of the sample covariance, largest first.
Eigen::VectorXd covariance_eigenvalues(const Matrix &x) {
    const Matrix c = x.rowwise() - x.colwise().mean();
    const Matrix cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    return es.eigenvalues().reverse();
}

double ridge_loss(const Matrix &z, const Matrix &y, const Matrix &w, double alpha) {
    return (y - z * w).squaredNorm() + alpha * w.squaredNorm();
}

} // namespace

TEST_SUITE("regress") {

TEST_CASE("pca on rank-1 data") {
    Matrix x(6, 3);
    for (int i = 0; i < 6; ++i) x.row(i) << i, 2.0 * i, -1.0 * i;
    const auto m = pca_fit(x, 3);
    CHECK(m.components.rows() == 1);
    CHECK(m.capped);
    CHECK(m.explained_variance_ratio(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(variance_explained_first2(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pca ratios follow the covariance eigenvalues, also with duplicated columns") {
    Matrix x(3, 4);
    x << 1, 2, 2, 0.5, -1, 0, 0, 3, 4, 1, 1, -2; // columns 1 and 2 are equal
    const auto m = pca_fit(x, 4);
    const auto ev = covariance_eigenvalues(x);
    const double total = ev.sum();
    REQUIRE(m.components.rows() == 2);
    for (Eigen::Index k = 0; k < 2; ++k)
        CHECK(m.explained_variance_ratio(k) == doctest::Approx(ev(k) / total).epsilon(1e-10));
}

TEST_CASE("pca invariants on random data") {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.below(40)), d = 2 + static_cast<Eigen::Index>(rng.below(30));
        const Matrix x = gaussian(rng, n, d);
        const auto m = pca_fit(x, 256);
        const auto k = m.components.rows();
        CHECK(k == std::min(n - 1, d));
        CHECK((m.components * m.components.transpose() - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-8);
        for (Eigen::Index i = 1; i < k; ++i) CHECK(m.explained_variance_ratio(i) <= m.explained_variance_ratio(i - 1) + 1e-15);
        CHECK(m.explained_variance_ratio.sum() <= 1.0 + 1e-9);
        CHECK(m.explained_variance_ratio.minCoeff() >= 0.0);
        const Matrix z = pca_transform(m, x);
        CHECK(z.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
        // Largest-magnitude coordinate of every axis is positive.
        for (Eigen::Index c = 0; c < k; ++c) {
            Eigen::Index arg;
            m.components.row(c).cwiseAbs().maxCoeff(&arg);
            CHECK(m.components(c, arg) > 0);
        }
        // Reconstruction error does not grow with more components.
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t c = 1; c <= static_cast<std::size_t>(k); ++c) {
            const auto mc = pca_fit(x, c);
            const Matrix rec = (pca_transform(mc, x) * mc.components).rowwise() + mc.mean.transpose();
            const double err = (rec - x).squaredNorm();
            CHECK(err <= prev + 1e-9);
            prev = err;
        }
    }
}

TEST_CASE("pca transform: mean row, full-rank round-trip, projection oracle") {
    Rng rng(5);
    const Matrix x = gaussian(rng, 5, 3);
    const auto m = pca_fit(x, 3);
    CHECK(pca_transform(m, x.colwise().mean()).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix rec = (pca_transform(m, x) * m.components).rowwise() + m.mean.transpose();
    CHECK((rec - x).cwiseAbs().maxCoeff() <= 1e-8);

    // Independent projection: covariance eigenvectors, same sign rule.
    const Matrix c = x.rowwise() - x.colwise().mean();
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.transpose() * c);
    Matrix axes = es.eigenvectors().rowwise().reverse().transpose();
    for (Eigen::Index r = 0; r < axes.rows(); ++r) {
        Eigen::Index arg;
        axes.row(r).cwiseAbs().maxCoeff(&arg);
        if (axes(r, arg) < 0) axes.row(r) *= -1.0;
    }
    CHECK((pca_transform(m, x) - c * axes.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THROWS_AS(pca_transform(m, Matrix::Zero(2, 4)), DataError);
}

TEST_CASE("variance explained by two axes") {
    Rng rng(7);
    Matrix planar(50, 5);
    const Matrix basis = gaussian(rng, 2, 5);
    for (Eigen::Index i = 0; i < 50; ++i) planar.row(i) = rng.normal() * basis.row(0) + rng.normal() * basis.row(1);
    CHECK(variance_explained_first2(planar) == doctest::Approx(1.0).epsilon(1e-9));
    const Matrix iso = gaussian(rng, 10000, 10);
    const auto ev = covariance_eigenvalues(iso);
    const double oracle = (ev(0) + ev(1)) / ev.sum();
    CHECK(variance_explained_first2(iso) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(variance_explained_first2(iso) - 0.2) <= 0.02);
    CHECK_THROWS(variance_explained_first2(Matrix::Zero(2, 3)));
}

TEST_CASE("ridge worked examples") {
    Matrix z(2, 1), y(2, 1);
    z << 1, 1;
    y << 1, 1;
    // (z'z + 1) w = z'y  ->  3 w = 2
    CHECK(ridge_fit(z, y, 1.0, false).weights(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const Matrix id = Matrix::Identity(2, 2);
    Matrix y2(2, 1);
    y2 << 1, 2;
    const auto m = ridge_fit(id, y2, 0.0, false);
    CHECK(m.weights(0, 0) == doctest::Approx(1.0));
    CHECK(m.weights(1, 0) == doctest::Approx(2.0));
    CHECK_FALSE(m.min_norm);
    CHECK_THROWS_AS(ridge_fit(id, y2, -1.0), ConfigError);
}

TEST_CASE("ridge equals the normal-equation solution") {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        const Matrix z = gaussian(rng, 30, 6), y = gaussian(rng, 30, 3);
        const double alpha = 0.1 * (t + 1);
        const auto m = ridge_fit(z, y, alpha, true);
        const Matrix zc = z.rowwise() - z.colwise().mean();
        const Matrix yc = y.rowwise() - y.colwise().mean();
        const Matrix w = (zc.transpose() * zc + alpha * Matrix::Identity(6, 6)).ldlt().solve(zc.transpose() * yc);
        CHECK((m.weights - w).cwiseAbs().maxCoeff() <= 1e-10);
        const Vector b = y.colwise().mean().transpose() - w.transpose() * z.colwise().mean().transpose();
        CHECK((m.intercepts - b).cwiseAbs().maxCoeff() <= 1e-10);
        const Matrix pred = ridge_predict(m, z);
        CHECK((pred - ((z * w).rowwise() + b.transpose())).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("ridge: shrinkage, optimality, minimum norm") {
    Rng rng(11);
    const Matrix z = gaussian(rng, 20, 4), y = gaussian(rng, 20, 1);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.0, 0.1, 1.0, 10.0, 100.0, 1e4, 1e8}) {
        const double norm = ridge_fit(z, y, alpha, false).weights.norm();
        CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
    CHECK(prev < 1e-6);

    const double alpha = 0.5;
    const auto m = ridge_fit(z, y, alpha, false);
    const double best = ridge_loss(z, y, m.weights, alpha);
    for (int i = 0; i < 100; ++i) {
        const Matrix delta = 1e-3 * gaussian(rng, 4, 1);
        CHECK(best <= ridge_loss(z, y, m.weights + delta, alpha) + 1e-12);
    }

    Matrix zs(3, 2), ys(3, 1);
    zs << 1, 1, 2, 2, 3, 3; // identical columns
    ys << 1, 2, 3;
    const auto mn = ridge_fit(zs, ys, 0.0, false);
    CHECK(mn.min_norm);
    CHECK(mn.weights(0, 0) == doctest::Approx(0.5));
    CHECK(mn.weights(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("pipeline: noiseless linear targets are recovered") {
    Rng rng(13);
    const Matrix x = gaussian(rng, 120, 10), w = gaussian(rng, 10, 4);
    const Matrix y = x * w;
    std::vector<int> folds(120);
    std::vector<std::string> ds(120);
    for (int i = 0; i < 120; ++i) {
        folds[static_cast<std::size_t>(i)] = i % 3;
        ds[static_cast<std::size_t>(i)] = i < 60 ? "A" : "B";
    }
    const auto r = hest_pipeline(x, y, folds, ds, {"g0", "g1", "g2", "g3"}, {16, 1e-8, true});
    CHECK(r.folds.size() == 6);
    for (const auto &f : r.folds)
        for (double p : f.pcc) CHECK(p >= 1.0 - 1e-9);
    CHECK(r.datasets.at("A").mean == doctest::Approx(1.0));
    CHECK(r.global_mean == doctest::Approx(1.0));
}

TEST_CASE("pipeline: shuffled targets score near zero") {
    Rng rng(17);
    double total = 0;
    for (int t = 0; t < 20; ++t) {
        const Matrix x = gaussian(rng, 90, 12);
        Matrix y = x * gaussian(rng, 12, 5);
        for (Eigen::Index i = y.rows(); i > 1; --i) y.row(i - 1).swap(y.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i)))));
        std::vector<int> folds(90);
        for (int i = 0; i < 90; ++i) folds[static_cast<std::size_t>(i)] = i % 3;
        total += hest_pipeline(x, y, folds, std::vector<std::string>(90), {"a", "b", "c", "d", "e"}, {16, 1.0, true})
                     .global_mean;
    }
    CHECK(std::abs(total / 20.0) <= 0.1);
}

TEST_CASE("pipeline: components capped by the training size") {
    Rng rng(19);
    const Matrix x = gaussian(rng, 12, 40), y = gaussian(rng, 12, 2);
    std::vector<int> folds{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
    const auto r = hest_pipeline(x, y, folds, std::vector<std::string>(12), {"a", "b"}, {256, 1.0, true});
    for (const auto &f : r.folds) {
        CHECK(f.pca.capped);
        CHECK(f.pca.components.rows() == 7);
        for (double p : f.pcc)
            if (!std::isnan(p)) CHECK(std::abs(p) <= 1.0);
    }
}

TEST_CASE("pipeline: test rows never influence fitted models") {
    Rng rng(23);
    const Matrix x = gaussian(rng, 40, 8), y = gaussian(rng, 40, 3);
    Matrix x_noise = x, y_noise = y;
    std::vector<int> folds(40);
    for (int i = 0; i < 40; ++i) folds[static_cast<std::size_t>(i)] = i % 4;
    // Fold 0 tests on rows 0, 4, 8, ...; replace them.
    for (int i = 0; i < 40; i += 4) {
        x_noise.row(i) = gaussian(rng, 1, 8);
        y_noise.row(i) = gaussian(rng, 1, 3);
    }
    const std::vector<std::string> ds(40);
    const auto a = hest_pipeline(x, y, folds, ds, {"a", "b", "c"}, {5, 1.0, true});
    const auto b = hest_pipeline(x_noise, y_noise, folds, ds, {"a", "b", "c"}, {5, 1.0, true});
    CHECK(a.folds[0].pca.components == b.folds[0].pca.components);
    CHECK(a.folds[0].pca.mean == b.folds[0].pca.mean);
    CHECK(a.folds[0].ridge.weights == b.folds[0].ridge.weights);
    CHECK(a.folds[0].ridge.intercepts == b.folds[0].ridge.intercepts);
}

TEST_CASE("pipeline: undefined correlations are excluded") {
    Rng rng(29);
    const Matrix x = gaussian(rng, 9, 3);
    Matrix y = gaussian(rng, 9, 2);
    y.col(1).setConstant(4.0);
    std::vector<int> folds{0, 0, 0, 1, 1, 1, 2, 2, 2};
    const auto r = hest_pipeline(x, y, folds, std::vector<std::string>(9), {"var", "flat"}, {4, 1.0, true});
    for (const auto &f : r.folds) {
        CHECK(std::isnan(f.pcc[1]));
        CHECK(f.mean_pcc() == f.pcc[0]);
    }
}

} // TEST_SUITE
