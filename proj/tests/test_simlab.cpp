#include <doctest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"
#include "trajkit/error.hpp"
#include "trajkit/simlab.hpp"

using namespace trajkit;

TEST_CASE("gen_random_box support and determinism") {
    Rng a(1), b(1);
    const auto t1 = gen_random_box(500, a);
    const auto t2 = gen_random_box(500, b);
    for (int i = 0; i < 500; ++i) {
        CHECK(t1.positions[i] == t2.positions[i]);
        for (int c = 0; c < 3; ++c) {
            CHECK(t1.positions[i][c] >= -0.5);
            CHECK(t1.positions[i][c] <= 0.5);
        }
    }

    // component means near 0 over many samples
    Rng rng(2);
    Vec3 mean = Vec3::Zero();
    const int n = 100000;
    const auto big = gen_random_box(n, rng);
    for (const auto& p : big.positions) mean += p;
    mean /= n;
    for (int c = 0; c < 3; ++c) CHECK(std::abs(mean[c]) < 0.01);
}

TEST_CASE("gen_collinear") {
    Rng rng(3);
    const auto t = gen_collinear(100, rng);
    CHECK(t.size() == 100);
    for (int i = 0; i < 100; ++i) {
        CHECK(t.positions[i].x() == doctest::Approx(i));
        CHECK(t.positions[i].y() == 0.0);
        CHECK(t.positions[i].z() == 0.0);
    }
    CHECK((t.positions.back() - t.positions.front()).norm() == doctest::Approx(99.0));
}

TEST_CASE("gen_varying_n cube sides") {
    CHECK(varying_n_side(100, VolumeRule::volume_10n) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(varying_n_side(100, VolumeRule::density_10_per) ==
          doctest::Approx(std::cbrt(10.0)).epsilon(1e-12));

    Rng rng(4);
    const auto t = gen_varying_n(100, rng);
    for (const auto& p : t.positions) {
        for (int c = 0; c < 3; ++c) {
            CHECK(p[c] >= -5.0);
            CHECK(p[c] <= 5.0);
        }
    }
}

TEST_CASE("perturb_trajectory") {
    Rng rng(5);
    const auto gt = gen_random_box(100, rng);

    SUBCASE("zero noise is the identity") {
        Rng prng(6);
        const auto est = perturb_trajectory(gt, 0.0, 0.0, prng);
        for (std::size_t i = 0; i < gt.size(); ++i) {
            CHECK(est.positions[i] == gt.positions[i]);
            CHECK(est.rotations[i].w() == gt.rotations[i].w());
        }
    }

    SUBCASE("only positions move when sigma_r = 0") {
        Rng prng(7);
        const auto est = perturb_trajectory(gt, 0.1, 0.0, prng);
        bool any_moved = false;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            if ((est.positions[i] - gt.positions[i]).norm() > 0.0) any_moved = true;
            CHECK(est.rotations[i].w() == gt.rotations[i].w());
        }
        CHECK(any_moved);
    }

    SUBCASE("per-component noise std matches sigma") {
        Rng gen(8), prng(9);
        const auto big = gen_random_box(10000, gen);
        const auto est = perturb_trajectory(big, 0.1, 0.0, prng);
        double sum_sq = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < big.size(); ++i) {
            const Vec3 d = est.positions[i] - big.positions[i];
            for (int c = 0; c < 3; ++c) {
                sum_sq += d[c] * d[c];
                ++count;
            }
        }
        const double std_hat = std::sqrt(sum_sq / count);
        CHECK(std_hat == doctest::Approx(0.1).epsilon(0.03));
    }
}

TEST_CASE("inject_outliers") {
    Rng rng(10);
    const auto gt = gen_random_box(100, rng);

    SUBCASE("count 0 is the identity") {
        Rng orng(11);
        const auto out = inject_outliers(gt, 0, orng);
        for (std::size_t i = 0; i < gt.size(); ++i) CHECK(out.positions[i] == gt.positions[i]);
    }

    SUBCASE("count n replaces every pose") {
        Rng orng(12);
        const auto out = inject_outliers(gt, 100, orng);
        int replaced = 0;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            if ((out.positions[i] - gt.positions[i]).norm() > 1e-12) ++replaced;
        }
        CHECK(replaced >= 99);  // collision with the old position has measure ~0
    }

    SUBCASE("requested count is applied exactly") {
        Rng orng(13);
        const auto out = inject_outliers(gt, 17, orng);
        int moved = 0;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            if ((out.positions[i] - gt.positions[i]).norm() > 1e-12) ++moved;
        }
        CHECK(moved == 17);
    }

    SUBCASE("outliers fill the 10-unit cube, mostly outside the unit cube") {
        Rng orng(14);
        int outside = 0;
        const int trials = 10000;
        Trajectory one;
        one.positions = {Vec3::Zero()};
        one.rotations = {Rotation()};
        for (int i = 0; i < trials; ++i) {
            const auto out = inject_outliers(one, 1, orng);
            const Vec3& p = out.positions[0];
            for (int c = 0; c < 3; ++c) {
                CHECK(p[c] >= -5.0);
                CHECK(p[c] <= 5.0);
            }
            const bool in_unit = std::abs(p.x()) <= 0.5 && std::abs(p.y()) <= 0.5 &&
                                 std::abs(p.z()) <= 0.5;
            if (!in_unit) ++outside;
        }
        // P(inside unit cube) = (1/10)^3 = 0.001
        CHECK(static_cast<double>(outside) / trials >= 0.99);
    }

    CHECK_THROWS_AS(inject_outliers(gt, 101, rng), Error);
}

TEST_CASE("rotation-only outliers replace rotations") {
    Rng rng(15), orng(16);
    const auto gt = gen_rotations_only(50, rng);
    const auto out = inject_outliers(gt, 50, orng);
    CHECK_FALSE(out.has_positions());
    int changed = 0;
    for (int i = 0; i < 50; ++i) {
        if (angular_distance(gt.rotations[i], out.rotations[i]) > 1e-9) ++changed;
    }
    CHECK(changed == 50);
}

TEST_CASE("perfect-estimate cells score perfectly") {
    for (const auto kind :
         {GeneratorKind::random_box, GeneratorKind::collinear, GeneratorKind::varying_n}) {
        ScenarioConfig cell;
        cell.kind = kind;
        cell.n = 100;
        cell.runs = 3;
        cell.master_seed = 42;
        const auto results = run_grid({cell}, {Metric::tas, Metric::ras, Metric::pas, Metric::ate,
                                               Metric::dte, Metric::dre, Metric::maa});
        for (const auto& [m, values] : results[0].per_run) {
            for (double v : values) {
                if (m == Metric::ate || m == Metric::dte || m == Metric::dre) {
                    CHECK(std::abs(v) <= 1e-12);
                } else {
                    CHECK(std::abs(v - 1.0) <= 1e-12);
                }
            }
        }
        CHECK(results[0].flags.empty());
    }
}

TEST_CASE("run_grid is deterministic and order independent") {
    ScenarioConfig a;
    a.kind = GeneratorKind::random_box;
    a.n = 30;
    a.sigma_t = 0.05;
    a.sigma_r_deg = 3.0;
    a.outliers = 3;
    a.runs = 4;
    a.master_seed = 7;
    ScenarioConfig b = a;
    b.sigma_t = 0.02;

    const std::vector<Metric> metrics = {Metric::tas, Metric::ate, Metric::maa};
    const auto r1 = run_grid({a, b}, metrics);
    const auto r2 = run_grid({a, b}, metrics, /*threads=*/1);
    const auto r3 = run_grid({b, a}, metrics);  // permuted cells

    for (Metric m : metrics) {
        for (int run = 0; run < a.runs; ++run) {
            CHECK(r1[0].per_run.at(m)[run] == r2[0].per_run.at(m)[run]);
            CHECK(r1[0].per_run.at(m)[run] == r3[1].per_run.at(m)[run]);
            CHECK(r1[1].per_run.at(m)[run] == r3[0].per_run.at(m)[run]);
        }
    }
}

TEST_CASE("fewer runs are a prefix of more runs") {
    ScenarioConfig cell;
    cell.kind = GeneratorKind::random_box;
    cell.n = 25;
    cell.sigma_t = 0.03;
    cell.runs = 2;
    cell.master_seed = 11;
    const auto small = run_grid({cell}, {Metric::ate});
    cell.runs = 5;
    const auto large = run_grid({cell}, {Metric::ate});
    for (int run = 0; run < 2; ++run)
        CHECK(small[0].per_run.at(Metric::ate)[run] == large[0].per_run.at(Metric::ate)[run]);
}

TEST_CASE("metric failures are flagged, not fatal") {
    ScenarioConfig cell;
    cell.kind = GeneratorKind::rotation_only;  // no positions
    cell.n = 20;
    cell.sigma_r_deg = 2.0;
    cell.runs = 2;
    const auto results = run_grid({cell}, {Metric::ras, Metric::tas});
    for (double v : results[0].per_run.at(Metric::ras)) CHECK(std::isfinite(v));
    for (double v : results[0].per_run.at(Metric::tas)) CHECK(std::isnan(v));
    CHECK(results[0].flags.size() == 2);
    CHECK(results[0].summary.at(Metric::tas).valid_runs == 0);
}

TEST_CASE("fig2 cell means order correctly with noise") {
    // the Fig. 2 ordering trial: TAS mean at sigma_t = 0.1 is strictly below
    // the mean at sigma_t = 0.01, at zero outliers
    ScenarioConfig lo;
    lo.kind = GeneratorKind::random_box;
    lo.n = 100;
    lo.sigma_t = 0.01;
    lo.sigma_r_deg = 3.0;
    lo.runs = 50;
    lo.master_seed = 1;
    ScenarioConfig hi = lo;
    hi.sigma_t = 0.10;

    const auto results = run_grid({lo, hi}, {Metric::tas});
    CHECK(results[1].summary.at(Metric::tas).mean < results[0].summary.at(Metric::tas).mean);
}

TEST_CASE("built-in grid shapes") {
    const auto fig2 = make_grid("fig2", 2, 1);
    CHECK(fig2.cells.size() == 70);  // 7 outlier counts x 10 noise levels
    CHECK(fig2.metrics.size() == 4);

    const auto fig4 = make_grid("fig4", 1, 1);
    CHECK(fig4.cells.size() == 70);  // 7 n values x 10 noise levels
    for (const auto& c : fig4.cells) CHECK(c.outliers == 0);

    const auto fig5 = make_grid("fig5", 1, 1);
    CHECK(fig5.cells.size() == 70);  // 7 outlier counts x 10 sigma_r
    CHECK(fig5.metrics.size() == 8);
    for (const auto& c : fig5.cells) CHECK(c.kind == GeneratorKind::rotation_only);

    const auto fig6 = make_grid("fig6", 1, 1);
    CHECK(fig6.cells.size() == 50);  // 5 sigma_r x 10 sigma_t
    for (const auto& c : fig6.cells) CHECK(c.outliers == 10);

    const auto fig7a = make_grid("fig7a", 1, 1);
    CHECK(fig7a.cells.size() == 70);
    for (const auto& c : fig7a.cells)
        CHECK(c.sigma_r_deg == doctest::Approx(c.sigma_t * 100.0));

    CHECK(is_builtin_grid("fig7c"));
    CHECK_FALSE(is_builtin_grid("fig9"));
    CHECK_THROWS_AS(make_grid("fig9", 1, 1), Error);
}
