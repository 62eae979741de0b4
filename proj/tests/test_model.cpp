#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>

#include "doctest.h"
#include "ipsae/eval.hpp"
#include "ipsae/model.hpp"
#include "test_util.hpp"

using namespace ipsae;
using namespace ipsae::test;
namespace fs = std::filesystem;

namespace {

ZslDataset noiseless_dataset() {
    SyntheticConfig cfg;
    cfg.d = 10;
    cfg.k = 5;
    cfg.n_per_class = 6;
    cfg.c_seen = 6;
    cfg.c_unseen = 3;
    cfg.noise_sigma = 0.0;
    cfg.seed = 42;
    return generate_synthetic(cfg);
}

}  // namespace

TEST_CASE("build_system: identity data") {
    const Matrix id2 = Matrix::identity(2);
    const SylvesterSystem sys = build_system(id2, id2, 1.0);
    CHECK(sys.A == id2);
    CHECK(sys.B == id2);
    CHECK(sys.C == scale(id2, 2.0));
}

TEST_CASE("build_system: scalar data") {
    const double lambda = 0.7;
    const SylvesterSystem sys =
        build_system(Matrix(1, 1, {3.0}), Matrix(1, 1, {2.0}), lambda);
    CHECK(sys.A(0, 0) == doctest::Approx(4.0));
    CHECK(sys.B(0, 0) == doctest::Approx(9.0 * lambda));
    CHECK(sys.C(0, 0) == doctest::Approx((1.0 + lambda) * 6.0));
}

TEST_CASE("build_system outputs are PSD up to roundoff") {
    Rng rng(14);
    const Matrix xp = random_matrix(rng, 6, 12);
    const Matrix s = random_matrix(rng, 4, 12);
    const SylvesterSystem sys = build_system(xp, s, 2.0);
    CHECK(symmetry_defect(sys.A) == 0.0);
    CHECK(symmetry_defect(sys.B) == 0.0);
    for (const Matrix* m : {&sys.A, &sys.B}) {
        const auto eig = sym_eigendecompose(*m);
        double trace = 0.0;
        for (std::size_t i = 0; i < m->rows(); ++i) trace += (*m)(i, i);
        CHECK(eig.values.back() >= -1e-10 * trace);
    }
}

TEST_CASE("build_system rejects bad inputs") {
    const Matrix id2 = Matrix::identity(2);
    CHECK_THROWS_AS(build_system(id2, Matrix(2, 3), 1.0), DimensionMismatch);
    CHECK_THROWS_AS(build_system(id2, id2, 0.0), NonPositiveLambda);
    CHECK_THROWS_AS(build_system(id2, id2, -1.0), NonPositiveLambda);
}

TEST_CASE("fit: noiseless recovery in the enriched space (up to scale)") {
    // With a planted orthonormal map the enriched training matrix is X′ = T·S
    // with TᵀT = 2I, so the Sylvester optimum encodes every training sample to
    // an exact positive multiple of its attribute vector: WX′ = γS with
    // γ = 2(1+λ)/(1+2λ). Classification is cosine-based, so the scale is
    // immaterial; recovery is exact in direction.
    const ZslDataset ds = noiseless_dataset();
    const auto train = seen_sample_indices(ds);
    const double lambda = 1.0;
    const IpSaeModel model = fit(ds, train, lambda, SpaceMode::kEnriched);

    Matrix x(ds.visual_dim(), train.size());
    for (std::size_t j = 0; j < train.size(); ++j) {
        x.set_col(j, ds.features.col(train[j]));
    }
    const Matrix s = sample_attributes_for(ds, train);
    const Matrix xp = enrich(x, s);
    const Matrix encoded = encode(model, xp);

    const double gamma = 2.0 * (1.0 + lambda) / (1.0 + 2.0 * lambda);
    const Matrix expected = scale(s, gamma);
    CHECK(frobenius_norm(subtract(encoded, expected)) <= 1e-6 * frobenius_norm(expected));
}

TEST_CASE("fit: shape contract for both space modes") {
    const ZslDataset ds = noiseless_dataset();
    const auto train = seen_sample_indices(ds);
    const IpSaeModel enriched = fit(ds, train, 1.0, SpaceMode::kEnriched);
    const IpSaeModel original = fit(ds, train, 1.0, SpaceMode::kOriginal);
    CHECK(enriched.W.rows() == ds.semantic_dim());
    CHECK(enriched.W.cols() == ds.visual_dim() + ds.semantic_dim());
    CHECK(original.W.cols() == ds.visual_dim());
}

TEST_CASE("fit: single-class training set succeeds with nullified modes") {
    ZslDataset ds = noiseless_dataset();
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        if (ds.labels[i] == 0) train.push_back(i);
    }
    const IpSaeModel model = fit(ds, train, 1.0, SpaceMode::kEnriched);
    CHECK(model.nullified_modes > 0);  // rank-1 S leaves zero eigen-sums
}

TEST_CASE("fit rejects unseen labels and empty training sets") {
    const ZslDataset ds = noiseless_dataset();
    CHECK_THROWS_AS(fit(ds, {}, 1.0, SpaceMode::kEnriched), InvariantViolation);
    const auto unseen = unseen_sample_indices(ds);
    CHECK_THROWS_AS(fit(ds, {unseen.front()}, 1.0, SpaceMode::kEnriched),
                    UnseenLabelInTraining);
}

TEST_CASE("encode/decode: linearity and shape") {
    const ZslDataset ds = noiseless_dataset();
    const auto train = seen_sample_indices(ds);
    const IpSaeModel model = fit(ds, train, 1.0, SpaceMode::kEnriched);
    const std::size_t m = model.input_dim();

    Rng rng(19);
    const Matrix xp = random_matrix(rng, m, 3);
    CHECK(frobenius_norm(encode(model, Matrix(m, 2))) == 0.0);
    CHECK(max_abs_diff(encode(model, scale(xp, 2.5)), scale(encode(model, xp), 2.5)) <= 1e-12);
    const Matrix sum = encode(model, add(xp, xp));
    CHECK(max_abs_diff(sum, scale(encode(model, xp), 2.0)) <= 1e-12);

    const Matrix s_cols = random_matrix(rng, ds.semantic_dim(), 4);
    CHECK(decode(model, s_cols).cols() == 4);
    CHECK(frobenius_norm(decode(model, Matrix(ds.semantic_dim(), 1))) == 0.0);
    CHECK_THROWS_AS(encode(model, Matrix(m + 1, 2)), DimensionMismatch);
    CHECK_THROWS_AS(decode(model, Matrix(ds.semantic_dim() + 1, 2)), DimensionMismatch);
}

TEST_CASE("hubness_bound: identity and limit cases") {
    const Matrix id2 = Matrix::identity(2);
    const HubnessBound hb = hubness_bound(id2, 1.0);
    CHECK(hb.alpha == doctest::Approx(1.0));
    CHECK(hb.bound == doctest::Approx(0.5));
    CHECK(hb.lhs == doctest::Approx(0.5));

    const HubnessBound large = hubness_bound(id2, 1e6);
    CHECK(large.bound == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("hubness_bound: lhs equals the closed form on seeded input") {
    Rng rng(23);
    const Matrix s = random_matrix(rng, 3, 8);
    const HubnessBound hb = hubness_bound(s, 0.7);
    CHECK(std::abs(hb.lhs - hb.bound) <= 1e-6 * hb.bound);
    CHECK(hb.bound < 1.0);
}

TEST_CASE("ridge cross-check: ||W_ridge S||_2 <= ||Xp||_2") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix xp = random_matrix(rng, 6, 15);
        const Matrix s = random_matrix(rng, 3, 15);
        const double lambda = 0.1 + rng.next_double() * 5.0;
        const Matrix w = ridge_solve(xp, s, lambda);
        CHECK(spectral_norm(matmul(w, s)) <= spectral_norm(xp) * (1.0 + 1e-10));
    }
}

TEST_CASE("model serialization round trip is value-identical") {
    const ZslDataset ds = noiseless_dataset();
    const auto train = seen_sample_indices(ds);
    const fs::path file = fs::temp_directory_path() / "ipsae_test_model.bin";

    for (SpaceMode mode : {SpaceMode::kEnriched, SpaceMode::kOriginal}) {
        const IpSaeModel model = fit(ds, train, 1.5, mode);
        save_model(model, file);
        const IpSaeModel back = load_model(file);
        CHECK(back.W == model.W);
        CHECK(back.lambda == model.lambda);
        CHECK(back.space_mode == model.space_mode);
        CHECK(back.visual_dim == model.visual_dim);
        CHECK(back.semantic_dim == model.semantic_dim);
    }
    fs::remove(file);
    CHECK_THROWS_AS(load_model(file), MissingFile);
}
