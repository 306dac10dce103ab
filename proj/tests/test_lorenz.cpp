#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "setler/lorenz.hpp"

using namespace setler;

namespace {
const LorenzParams kClassic{10.0, 28.0, 8.0 / 3.0};
}

TEST_CASE("lorenz_field values") {
    const Vec3 origin = lorenz_field({0.0, 0.0, 0.0}, kClassic);
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
    CHECK(origin[2] == 0.0);

    const Vec3 at111 = lorenz_field({1.0, 1.0, 1.0}, kClassic);
    CHECK(at111[0] == 0.0);
    CHECK(at111[1] == 26.0);
    CHECK(at111[2] == 1.0 - 8.0 / 3.0);

    // wing centers C+- = (+-sqrt(beta (rho-1)), same, rho-1)
    const double w = std::sqrt(kClassic.beta_l * (kClassic.rho - 1.0));
    for (double sign : {1.0, -1.0}) {
        const Vec3 f = lorenz_field({sign * w, sign * w, kClassic.rho - 1.0}, kClassic);
        CHECK(std::abs(f[0]) < 1e-12);
        CHECK(std::abs(f[1]) < 1e-12);
        CHECK(std::abs(f[2]) < 1e-12);
    }
    CHECK_THROWS_AS(LorenzParams(10.0, 28.0, 0.0), std::invalid_argument);
}

TEST_CASE("lorenz fixed points vanish for random parameters") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> us(1.0, 20.0);
    std::uniform_real_distribution<double> ur(1.5, 50.0);
    std::uniform_real_distribution<double> ub(0.5, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        const LorenzParams p{us(rng), ur(rng), ub(rng)};
        const double w = std::sqrt(p.beta_l * (p.rho - 1.0));
        for (double sign : {1.0, -1.0}) {
            const Vec3 f = lorenz_field({sign * w, sign * w, p.rho - 1.0}, p);
            for (double v : f) CHECK(std::abs(v) < 1e-12);
        }
        const Vec3 f0 = lorenz_field({0.0, 0.0, 0.0}, p);
        for (double v : f0) CHECK(v == 0.0);
    }
}

TEST_CASE("lorenz divergence is the constant -(sigma + 1 + beta)") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const double h = 0.5;  // field is linear along each own axis, any h works
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 s{u(rng), u(rng), u(rng)};
        double div = 0.0;
        for (int j = 0; j < 3; ++j) {
            Vec3 up = s, dn = s;
            up[j] += h;
            dn[j] -= h;
            div += (lorenz_field(up, kClassic)[j] - lorenz_field(dn, kClassic)[j]) /
                   (2.0 * h);
        }
        const double expected = -(kClassic.sigma + 1.0 + kClassic.beta_l);
        CHECK(std::abs(div - expected) < 1e-10);
    }
}

TEST_CASE("attractor_sample: classical bounds and determinism") {
    const PointCloud cloud =
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, {0.0, 100.0, 0.01}, 10.0);
    CHECK(!cloud.points.empty());
    const Extents e = bounding_box(cloud);
    CHECK(e.min[0] >= -25.0);
    CHECK(e.max[0] <= 25.0);
    CHECK(e.min[1] >= -30.0);
    CHECK(e.max[1] <= 30.0);
    CHECK(e.min[2] >= 0.0);
    CHECK(e.max[2] <= 55.0);

    const PointCloud again =
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, {0.0, 100.0, 0.01}, 10.0);
    REQUIRE(again.points.size() == cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(cloud.points[i][j] == again.points[i][j]);
}

TEST_CASE("attractor_sample: transient window arithmetic") {
    const TimeGrid grid{0.0, 1.0, 0.1};
    const PointCloud cloud =
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, grid, 1.0 - 0.1);
    CHECK(cloud.points.size() == 1);  // exactly the final sample
    CHECK_THROWS_AS(
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, grid, 1.0),
        std::invalid_argument);
}

TEST_CASE("attractor_sample: setler cloud is finite cartesian") {
    const SetlerParams p{0.5, 8.0 / 3.0, 28.0 / 3.0, 10.0, 0.1};
    const PointCloud cloud =
        attractor_sample(p, SphericalState{0.1, 0.2, 4.24}, {0.0, 200.0, 0.01}, 20.0);
    CHECK(!cloud.points.empty());
    for (const Vec3& pt : cloud.points)
        for (double v : pt) CHECK(std::isfinite(v));
    CHECK(cloud.meta.system == "setler");
}

TEST_CASE("compare_attractors: self comparison is symmetric") {
    const PointCloud cloud =
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, {0.0, 60.0, 0.01}, 10.0);
    const ComparisonReport rep = compare_attractors(cloud, cloud);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep.bbox_a.min[i] == rep.bbox_b.min[i]);
        CHECK(rep.bbox_a.max[i] == rep.bbox_b.max[i]);
    }
    CHECK(rep.largest_lyapunov_a == rep.largest_lyapunov_b);
}

TEST_CASE("compare_attractors: chaotic vs sub-critical Lorenz") {
    const PointCloud chaotic =
        attractor_sample(kClassic, {1.0, 1.0, 1.0}, {0.0, 120.0, 0.01}, 20.0);
    const LorenzParams stable{10.0, 0.5, 8.0 / 3.0};
    const PointCloud contracting =
        attractor_sample(stable, {1.0, 1.0, 1.0}, {0.0, 120.0, 0.01}, 20.0);
    const ComparisonReport rep = compare_attractors(chaotic, contracting);
    CHECK(rep.largest_lyapunov_a > 0.0);
    CHECK(rep.largest_lyapunov_b <= 0.0);
    CHECK(!rep.lobe_note.empty());
}
