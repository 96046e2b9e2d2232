#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mcbench/graph.hpp"
#include "mcbench/run_matrix.hpp"
#include "mcbench/stats_engine.hpp"

using namespace mcbench;

namespace {

RunMatrix random_matrix(std::mt19937_64& rng, std::size_t runs, std::size_t shots, double scale = 10.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> v(runs * shots);
    for (auto& x : v) x = std::floor(u(rng) * 4) / 4;
    return RunMatrix(runs, shots, std::move(v));
}

/// Column percentile straight from a sort: element ceil(q R / 100) (1-based).
double oracle_percentile(std::vector<double> column, double q) {
    std::sort(column.begin(), column.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(column.size())));
    return column[std::max<std::size_t>(rank, 1) - 1];
}

std::vector<double> column(const BestSoFarMatrix& m, std::size_t s) {
    std::vector<double> c;
    for (std::size_t r = 0; r < m.runs(); ++r) c.push_back(m.at(r, s));
    return c;
}

}  // namespace

TEST_CASE("best-so-far examples") {
    const auto bsf = best_so_far(RunMatrix(2, 4, {1, 3, 2, 5, 4, 1, 1, 6}));
    CHECK(std::vector<double>(bsf.row(0).begin(), bsf.row(0).end()) == std::vector<double>{1, 3, 3, 5});
    CHECK(std::vector<double>(bsf.row(1).begin(), bsf.row(1).end()) == std::vector<double>{4, 4, 4, 6});
}

TEST_CASE("best-so-far is monotone and dominates each shot") {
    std::mt19937_64 rng(3);
    const auto m = random_matrix(rng, 20, 50);
    const auto bsf = best_so_far(m);
    for (std::size_t r = 0; r < m.runs(); ++r) {
        double running = m.at(r, 0);
        for (std::size_t s = 0; s < m.shots(); ++s) {
            running = std::max(running, m.at(r, s));
            CHECK(bsf.at(r, s) == running);
            if (s > 0) CHECK(bsf.at(r, s) >= bsf.at(r, s - 1));
        }
    }
}

TEST_CASE("percentile examples") {
    std::vector<double> v;
    for (int r = 1; r <= 10; ++r) v.push_back(r);
    const BestSoFarMatrix bsf(10, 1, v);
    CHECK(percentile_curve(bsf, 90).points[0] == 9.0);
    CHECK(percentile_curve(bsf, 100).points[0] == 10.0);
    CHECK(percentile_curve(bsf, 1).points[0] == 1.0);
    CHECK(percentile_curve(bsf, 99).points[0] == 10.0);
    CHECK_THROWS_AS(percentile_curve(bsf, 0), ContractError);
    CHECK_THROWS_AS(percentile_curve(bsf, 100.1), ContractError);
    CHECK_FALSE(percentile_curve(bsf, 90).has_bands());
}

TEST_CASE("percentile curves match a sort oracle and are monotone") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto bsf = best_so_far(random_matrix(rng, 1 + rng() % 60, 1 + rng() % 40));
        for (double q : {1.0, 50.0, 90.0, 99.0, 100.0}) {
            const auto curve = percentile_curve(bsf, q);
            for (std::size_t s = 0; s < bsf.shots(); ++s) {
                CHECK(curve.points[s] == oracle_percentile(column(bsf, s), q));
                if (s > 0) CHECK(curve.points[s] >= curve.points[s - 1]);
            }
        }
        const auto p90 = percentile_curve(bsf, 90), p99 = percentile_curve(bsf, 99);
        for (std::size_t s = 0; s < bsf.shots(); ++s) CHECK(p99.points[s] >= p90.points[s]);
    }
}

TEST_CASE("bootstrap on constant data has zero width") {
    const BestSoFarMatrix bsf(50, 3, std::vector<double>(150, 4.0));
    BootstrapConfig config;
    config.replicates = 200;
    const auto curve = bootstrap_ci(bsf, 90, config);
    REQUIRE(curve.has_bands());
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(curve.ci_low[s] == 4.0);
        CHECK(curve.ci_high[s] == 4.0);
    }
}

TEST_CASE("bootstrap is reproducible and worker independent") {
    std::mt19937_64 rng(7);
    const auto bsf = best_so_far(random_matrix(rng, 80, 30));
    BootstrapConfig config;
    config.seed = 17;
    const auto a = bootstrap_ci(bsf, 90, config);
    const auto b = bootstrap_ci(bsf, 90, config);
    config.workers = 4;
    const auto c = bootstrap_ci(bsf, 90, config);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(a.ci_low == c.ci_low);
    CHECK(a.ci_high == c.ci_high);
    CHECK(a.replicates == 1000);
    CHECK(a.level == 0.95);
    for (std::size_t s = 0; s < bsf.shots(); ++s) {
        CHECK(a.ci_low[s] <= a.points[s]);
        CHECK(a.points[s] <= a.ci_high[s]);
    }
}

TEST_CASE("bootstrap argument checks") {
    const BestSoFarMatrix bsf(10, 1, std::vector<double>(10, 1.0));
    BootstrapConfig config;
    config.replicates = 99;
    CHECK_THROWS_AS(bootstrap_ci(bsf, 90, config), ContractError);
    config.replicates = 100;
    config.level = 1.0;
    CHECK_THROWS_AS(bootstrap_ci(bsf, 90, config), ContractError);
}

TEST_CASE("bootstrap bands cover the population percentile") {
    // Single-column matrices of U(0,1) draws; the population p90 is 0.9.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int trials = 100;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> v(200);
        for (auto& x : v) x = u(rng);
        BootstrapConfig config;
        config.seed = static_cast<std::uint64_t>(t);
        const auto curve = bootstrap_ci(BestSoFarMatrix(200, 1, v), 90, config);
        covered += curve.ci_low[0] <= 0.9 && 0.9 <= curve.ci_high[0];
    }
    CHECK(covered >= 85);
}

TEST_CASE("threshold curve examples") {
    const BestSoFarMatrix bsf(2, 2, {1, 3, 2, 2});
    const auto t = threshold_curve(bsf, 1.5, "x");
    CHECK(t.label == "x");
    CHECK(t.fractions == std::vector<double>{50.0, 100.0});
    // Strict comparison: ties with the threshold do not count.
    CHECK(threshold_curve(bsf, 2.0).fractions == std::vector<double>{0.0, 50.0});
}

TEST_CASE("threshold curves are nondecreasing") {
    std::mt19937_64 rng(13);
    const auto bsf = best_so_far(random_matrix(rng, 37, 60));
    const auto t = threshold_curve(bsf, 8.0);
    for (std::size_t s = 0; s < t.fractions.size(); ++s) {
        CHECK(t.fractions[s] >= 0.0);
        CHECK(t.fractions[s] <= 100.0);
        if (s > 0) CHECK(t.fractions[s] >= t.fractions[s - 1]);
    }
}

TEST_CASE("aggregation of one instance is its own normalized curve") {
    std::mt19937_64 rng(17);
    const auto bsf = best_so_far(random_matrix(rng, 40, 20));
    const std::vector<AggregateInput> inputs{{"a", bsf, 10.0, 0.9}};
    const auto result = aggregate_instances(inputs);
    const auto direct = percentile_curve(bsf.normalized(10.0, 20), 90);
    CHECK(result.p90.points == direct.points);
    CHECK(result.instances == 1);
    CHECK(result.shots == 20);
    CHECK(result.min_expected_alpha == 0.9);
    CHECK(result.max_expected_alpha == 0.9);
}

TEST_CASE("aggregation truncates, pools and averages") {
    std::mt19937_64 rng(19);
    const auto a = best_so_far(random_matrix(rng, 30, 25));
    const auto b = best_so_far(random_matrix(rng, 50, 40, 5.0));
    const std::vector<AggregateInput> inputs{{"a", a, 10.0, 0.91}, {"b", b, 5.0, 0.95}};

    const auto pooled = aggregate_instances(inputs);
    CHECK(pooled.shots == 25);
    CHECK(pooled.min_expected_alpha == 0.91);
    CHECK(pooled.max_expected_alpha == 0.95);
    for (std::size_t s = 0; s < 25; ++s) {
        std::vector<double> col;
        for (std::size_t r = 0; r < 30; ++r) col.push_back(a.at(r, s) / 10.0);
        for (std::size_t r = 0; r < 50; ++r) col.push_back(b.at(r, s) / 5.0);
        CHECK(pooled.p90.points[s] == oracle_percentile(col, 90));
        CHECK(pooled.p99.points[s] >= pooled.p90.points[s]);
        CHECK(pooled.p99.points[s] <= 1.0);
    }

    const auto averaged = aggregate_instances(inputs, PoolingMethod::AveragedCurves);
    CHECK(averaged.method == PoolingMethod::AveragedCurves);
    for (std::size_t s = 0; s < 25; ++s) {
        const double expected = (oracle_percentile(column(a, s), 90) / 10.0 + oracle_percentile(column(b, s), 90) / 5.0) / 2;
        CHECK(averaged.p90.points[s] == doctest::Approx(expected).epsilon(1e-14));
    }

    const std::vector<AggregateInput> same{{"a", a, 10.0, 0.9}, {"a2", a, 10.0, 0.9}};
    CHECK(aggregate_instances(same).p90.points == aggregate_instances(std::span(same).first(1)).p90.points);

    CHECK_THROWS_AS(aggregate_instances(std::span<const AggregateInput>{}), ContractError);
    CHECK(parse_pooling_method("averaged") == PoolingMethod::AveragedCurves);
    CHECK(pooling_method_name(PoolingMethod::PooledRuns) == "pooled");
    CHECK_THROWS_AS(parse_pooling_method("median"), ContractError);
}

TEST_CASE("run matrix binary round trip") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> normal;
    std::vector<double> v(7 * 13);
    for (auto& x : v) x = normal(rng);
    const RunMatrix m(7, 13, v, "er_n-12_p-0.500_1", {{"seed", "42"}, {"sampling", "alias"}});
    const auto bytes = encode_run_matrix(m);
    CHECK(bytes.substr(0, 8) == "MCRUNMAT");
    CHECK(decode_run_matrix(bytes) == m);
    CHECK(encode_run_matrix(decode_run_matrix(bytes)) == bytes);

    CHECK_THROWS_AS(decode_run_matrix(bytes.substr(0, bytes.size() - 1)), RunMatrixFormatError);
    CHECK_THROWS_AS(decode_run_matrix(bytes + "x"), RunMatrixFormatError);
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(decode_run_matrix(bad_magic), RunMatrixFormatError);
    auto bad_version = bytes;
    bad_version[8] = 9;
    CHECK_THROWS_AS(decode_run_matrix(bad_version), RunMatrixFormatError);
    CHECK_THROWS_AS(decode_run_matrix(""), RunMatrixFormatError);
}

TEST_CASE("run matrix CSV") {
    const RunMatrix m(2, 3, {1, 2, 3, 4.5, 5, 6});
    CHECK(run_matrix_csv(m) == "run,s1,s2,s3\n0,1,2,3\n1,4.5,5,6\n");
    CHECK_THROWS_AS(RunMatrix(2, 3, {1, 2}), ContractError);
}
