#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mocap/likelihood.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace mocap;

TEST_CASE("a perfect match scores its own overlap count") {
    CHECK(weight_from_counts({7, 0, 0}) == 7.0);
    CHECK(weight_from_counts({0, 0, 0}) == 0.0);

    // The same mask against itself: zero denominator, weight = overlap.
    SilhouetteImage mask = testutil::mask_from_rows({
        ".##.",
        ".##.",
        "....",
    });
    CHECK(silhouette_weight(mask, mask) == 4.0);
}

TEST_CASE("disjoint silhouettes score zero") {
    SilhouetteImage observed = testutil::mask_from_rows({
        "##..",
        "....",
    });
    SilhouetteImage model = testutil::mask_from_rows({
        "..##",
        "....",
    });
    PixelCounts c = pixel_counts(observed, model);
    CHECK(c.n_common == 0);
    CHECK(c.n_sil_only == 2);
    CHECK(c.n_model_only == 2);
    CHECK(silhouette_weight(observed, model) == 0.0);
}

TEST_CASE("balanced overlap scores one half") {
    CHECK(weight_from_counts({50, 50, 50}) == 0.5);
    CHECK(weight_from_counts({10, 0, 40}) == 0.25);
    CHECK(weight_from_counts({0, 3, 1}) == 0.0);
}

TEST_CASE("two empty masks score zero through the sentinel path") {
    SilhouetteImage a(6, 4);
    SilhouetteImage b(6, 4);
    CHECK(silhouette_weight(a, b) == 0.0);
}

TEST_CASE("pixel counting matches the reference on random masks") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        SilhouetteImage observed = testutil::random_mask(rng, 24, 18, 0.3);
        SilhouetteImage model = testutil::random_mask(rng, 24, 18, 0.3);
        PixelCounts expected = oracles::reference_pixel_counts(observed, model);
        PixelCounts actual = pixel_counts(observed, model);
        CHECK(actual.n_common == expected.n_common);
        CHECK(actual.n_sil_only == expected.n_sil_only);
        CHECK(actual.n_model_only == expected.n_model_only);
        CHECK(silhouette_weight(observed, model) ==
              oracles::reference_weight(observed, model));
    }
}

TEST_CASE("pixel counting rejects mismatched dimensions") {
    SilhouetteImage a(4, 4);
    SilhouetteImage b(4, 5);
    CHECK_THROWS_AS(pixel_counts(a, b), DimensionError);
    CHECK_THROWS_AS(silhouette_weight(a, b), DimensionError);
}

TEST_CASE("camera combination averages per-view weights") {
    const double ws2[] = {0.0, 1.0};
    CHECK(combine_cameras(ws2) == 0.5);

    const double ws3[] = {0.2, 0.4, 0.9};
    CHECK(combine_cameras(ws3) == (0.2 + 0.4 + 0.9) / 3.0);
}

TEST_CASE("camera combination is exact for identical views") {
    // Equal weights must come back bit-for-bit, not via a lossy mean.
    const double ws1[] = {0.1};
    CHECK(combine_cameras(ws1) == 0.1);
    const double ws3[] = {0.1, 0.1, 0.1};
    CHECK(combine_cameras(ws3) == 0.1);
}

TEST_CASE("camera combination requires at least one view") {
    CHECK_THROWS_AS(combine_cameras({}), Error);
}
