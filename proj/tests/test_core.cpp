#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gssr/core/image.hpp"
#include "gssr/core/parallel.hpp"
#include "gssr/core/rng.hpp"
#include "gssr/core/stats.hpp"
#include "gssr/core/types.hpp"

#include <cmath>
#include <vector>

using namespace gssr;

TEST_CASE("rng streams are reproducible and restorable") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    const auto snapshot = a.state();
    std::vector<double> first;
    for (int i = 0; i < 16; ++i) first.push_back(a.normal());
    a.restore(snapshot);
    for (int i = 0; i < 16; ++i) CHECK(a.normal() == first[i]);

    Rng c(43);
    CHECK(c.next_u64() != b.next_u64());
}

TEST_CASE("rng uniform and below stay in range") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(7) < 7);
    }
}

TEST_CASE("rng normal passes a chi-square goodness-of-fit test") {
    // Bin 20k standard-normal draws into 8 equal-probability bins; the
    // resulting counts should be consistent with uniform bin occupancy.
    Rng rng(2024);
    const int kBins = 8;
    const int kDraws = 20000;
    // Bin edges such that each bin has probability 1/8 under N(0, 1).
    const double edges[kBins - 1] = {-1.1503493803760083, -0.6744897501960817, -0.3186393639643751, 0.0,
                                     0.3186393639643751,  0.6744897501960817,  1.1503493803760083};
    std::vector<double> observed(kBins, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        const double x = rng.normal();
        int bin = 0;
        while (bin < kBins - 1 && x > edges[bin]) ++bin;
        observed[bin] += 1.0;
    }
    const std::vector<double> expected(kBins, double(kDraws) / kBins);
    CHECK(chi_square_gof_pvalue(observed, expected) > 0.01);
}

TEST_CASE("multinomial_draw respects weights") {
    Rng rng(9);
    const std::vector<double> weights = {0.0, 1.0, 3.0, 0.0, 1.0};
    std::vector<double> counts(weights.size(), 0.0);
    const auto draws = multinomial_draw(rng, weights, 20000);
    for (size_t idx : draws) {
        REQUIRE(idx < weights.size());
        counts[idx] += 1.0;
    }
    CHECK(counts[0] == 0.0);
    CHECK(counts[3] == 0.0);
    // Chi-square against the 1:3:1 ratio over the three live bins.
    const std::vector<double> obs = {counts[1], counts[2], counts[4]};
    const std::vector<double> exp = {4000.0, 12000.0, 4000.0};
    CHECK(chi_square_gof_pvalue(obs, exp) > 0.01);
}

TEST_CASE("chi_square_pvalue matches reference values") {
    // Reference values computed from the chi-square survival function.
    CHECK(chi_square_pvalue(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_pvalue(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_pvalue(2.0, 5) == doctest::Approx(0.8491450360846096).epsilon(1e-9));
    CHECK(chi_square_pvalue(0.0, 3) == 1.0);
}

TEST_CASE("image indexing and bilinear sampling") {
    Image<double> img(4, 3, 2);
    img(1, 2, 0) = 5.0;
    img(1, 2, 1) = -1.0;
    CHECK(img.data[(2 * 4 + 1) * 2 + 0] == 5.0);
    CHECK(img.data[(2 * 4 + 1) * 2 + 1] == -1.0);

    // Bilinear over the plane f(x, y) = 2x + 3y + 1 must be exact.
    Image<double> plane(5, 5, 1);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) plane(x, y) = 2.0 * x + 3.0 * y + 1.0;
    double v = 0;
    REQUIRE(bilinear_sample(plane, 1.25, 2.75, 0, &v));
    CHECK(v == doctest::Approx(2.0 * 1.25 + 3.0 * 2.75 + 1.0));
    double dx = 0, dy = 0;
    REQUIRE(bilinear_sample_grad(plane, 1.25, 2.75, 0, &v, &dx, &dy));
    CHECK(dx == doctest::Approx(2.0));
    CHECK(dy == doctest::Approx(3.0));
    CHECK_FALSE(bilinear_sample(plane, 4.5, 2.0, 0, &v));
    CHECK_FALSE(bilinear_sample(plane, -0.5, 2.0, 0, &v));
}

TEST_CASE("to_grayscale uses Rec.601 weights") {
    Image<float> rgb(1, 1, 3);
    rgb(0, 0, 0) = 1.0f;
    rgb(0, 0, 1) = 0.5f;
    rgb(0, 0, 2) = 0.25f;
    const auto gray = to_grayscale(rgb);
    CHECK(gray(0, 0) == doctest::Approx(0.299 + 0.587 * 0.5 + 0.114 * 0.25));
}

TEST_CASE("parallel_reduce is independent of worker count") {
    std::vector<double> x(10007);
    Rng rng(3);
    for (auto& v : x) v = rng.uniform(-1, 1);
    const auto body = [&](size_t b, size_t e) {
        double acc = 0;
        for (size_t i = b; i < e; ++i) acc += std::sin(x[i]);
        return acc;
    };
    set_worker_count(1);
    const double r1 = parallel_reduce(x.size(), 256, body);
    set_worker_count(4);
    const double r4 = parallel_reduce(x.size(), 256, body);
    set_worker_count(1);
    CHECK(r1 == r4);  // bitwise equal: chunk merges are ordered
}

TEST_CASE("sigmoid and logit are inverses") {
    for (double x : {-5.0, -1.0, 0.0, 0.25, 3.0}) CHECK(logit(sigmoid(x)) == doctest::Approx(x).epsilon(1e-12));
}
