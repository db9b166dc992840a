#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "mtgai/errors.hpp"
#include "mtgai/harness.hpp"
#include "support.hpp"

using namespace mtgai;

namespace {

ExperimentPlan plan_for(const std::string& env_name, std::vector<SelectionRule> rules,
                        std::vector<double> deltas, std::vector<double> epsilons,
                        std::uint64_t reps, std::uint64_t seed = 1) {
    ExperimentPlan plan;
    plan.environment = *bundled_environment(env_name);
    plan.thresholds = *plan.environment.thresholds;
    plan.algorithms = std::move(rules);
    plan.deltas = std::move(deltas);
    plan.epsilons = std::move(epsilons);
    plan.repetitions = reps;
    plan.master_seed = seed;
    plan.threads = 1;
    return plan;
}

RunRecord record(std::uint64_t stop, bool correct = true,
                 OutcomeKind kind = OutcomeKind::arm) {
    return {SelectionRule::tucb, 0.05, 0.005, 0, 0, {kind, 6, stop}, correct};
}

}  // namespace

TEST_CASE("plan validation") {
    auto plan = plan_for("medical", {SelectionRule::tucb}, {0.05}, {0.0}, 1);
    CHECK_NOTHROW(plan.validate());
    auto bad = plan;
    bad.repetitions = 0;
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
    bad = plan;
    bad.max_pulls = 4;
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
    bad = plan;
    bad.deltas = {1.5};
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
    bad = plan;
    bad.thresholds = {0.5};
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
    bad = plan;
    bad.algorithms.clear();
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("record counts and canonical order") {
    const auto one = run_experiment(plan_for("medical", {SelectionRule::tucb}, {0.05}, {0.0}, 1));
    CHECK(one.size() == 1);

    const auto plan = plan_for("medical-degenerate", {SelectionRule::lucb, SelectionRule::apt},
                               {0.05, 0.01}, {0.0, 0.01, 0.02}, 3);
    const auto recs = run_experiment(plan);
    REQUIRE(recs.size() == 2 * 2 * 3 * 3);
    std::size_t j = 0;
    for (auto r : plan.algorithms) {
        for (double d : plan.deltas) {
            for (double e : plan.epsilons) {
                for (std::uint64_t rep = 0; rep < 3; ++rep, ++j) {
                    CHECK(recs[j].algorithm == r);
                    CHECK(recs[j].delta == d);
                    CHECK(recs[j].epsilon == e);
                    CHECK(recs[j].rep == rep);
                    CHECK(recs[j].seed == derive_run_seed(plan.master_seed, r, d, e, rep));
                }
            }
        }
    }
}

TEST_CASE("identical plans give identical records regardless of threads") {
    auto plan = plan_for("medical", {SelectionRule::tucb, SelectionRule::hdoc}, {0.05, 0.1},
                         {0.02}, 12, 99);
    const auto a = run_experiment(plan);
    const auto b = run_experiment(plan);
    plan.threads = 4;
    const auto c = run_experiment(plan);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("zero-noise synthetic runs stop after K + 1 pulls") {
    const auto plan = plan_for("synthetic-degenerate", {SelectionRule::tucb},
                               {0.005, 0.01, 0.05, 0.2}, {0.005}, 3);
    const auto gaps = plan.environment.true_gaps(plan.thresholds);
    for (const auto& r : run_experiment(plan)) {
        CHECK(r.outcome.stop_time == 11);
        REQUIRE(r.outcome.kind == OutcomeKind::arm);
        CHECK(gaps[r.outcome.arm] <= 0.0);
        CHECK(r.correct);
    }
}

TEST_CASE("correctness rule") {
    const std::vector<double> good{0.3, -0.1, 0.05};
    CHECK(is_correct({OutcomeKind::arm, 1, 20}, good, 0.01));
    CHECK(is_correct({OutcomeKind::arm, 2, 20}, good, 0.05));
    CHECK_FALSE(is_correct({OutcomeKind::arm, 2, 20}, good, 0.01));
    CHECK_FALSE(is_correct({OutcomeKind::bottom, 0, 20}, good, 0.01));
    CHECK_FALSE(is_correct({OutcomeKind::timeout, 0, 20}, good, 0.01));

    const std::vector<double> none{0.3, 0.2};
    CHECK(is_correct({OutcomeKind::bottom, 0, 20}, none, 0.1));
    CHECK_FALSE(is_correct({OutcomeKind::arm, 1, 20}, none, 0.1));
    CHECK_FALSE(is_correct({OutcomeKind::timeout, 0, 20}, none, 0.1));

    // Best arm epsilon-good but not good: an epsilon-good arm or bottom.
    const std::vector<double> between{0.3, 0.05};
    CHECK(is_correct({OutcomeKind::arm, 1, 20}, between, 0.1));
    CHECK(is_correct({OutcomeKind::bottom, 0, 20}, between, 0.1));
    CHECK_FALSE(is_correct({OutcomeKind::arm, 0, 20}, between, 0.1));

    // The boundary g = 0 counts as good.
    CHECK_FALSE(is_correct({OutcomeKind::bottom, 0, 20}, std::vector{0.0, 0.3}, 0.0));
}

TEST_CASE("aggregate") {
    CHECK_THROWS_AS(aggregate(std::vector<RunRecord>{}), PreconditionError);

    const std::vector<RunRecord> single{record(11)};
    const auto s = aggregate(single);
    REQUIRE(s.size() == 1);
    CHECK(s[0].mean_stop_time == 11.0);
    CHECK(s[0].std_stop_time == 0.0);
    CHECK(s[0].error_rate == 0.0);
    CHECK(s[0].repetitions == 1);

    const std::vector<RunRecord> pair{record(10), record(20, false)};
    const auto p = aggregate(pair);
    CHECK(p[0].mean_stop_time == 15.0);
    CHECK(p[0].std_stop_time == doctest::Approx(std::sqrt(50.0)).epsilon(1e-15));
    CHECK(p[0].error_rate == 50.0);

    // Large stop times stay exact.
    const std::vector<RunRecord> big{record(199999), record(200000), record(200001)};
    CHECK(aggregate(big)[0].std_stop_time == 1.0);
}

TEST_CASE("aggregate groups cells and ignores record order") {
    const auto plan = plan_for("medical", {SelectionRule::tucb, SelectionRule::apt}, {0.05, 0.1},
                               {0.02, 0.05}, 8, 5);
    auto recs = run_experiment(plan);
    const auto base = aggregate(recs);
    CHECK(base.size() == 8);
    for (const auto& c : base) {
        CHECK(c.repetitions == 8);
        CHECK(c.error_rate >= 0.0);
        CHECK(c.error_rate <= 100.0);
        CHECK(c.std_stop_time >= 0.0);
        CHECK(c.mean_stop_time >= 5.0);
        CHECK(c.mean_stop_time <= static_cast<double>(plan.max_pulls));
    }
    std::mt19937_64 gen(3);
    for (int k = 0; k < 5; ++k) {
        std::shuffle(recs.begin(), recs.end(), gen);
        const auto again = aggregate(recs);
        REQUIRE(again.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(again[i].algorithm == base[i].algorithm);
            CHECK(again[i].delta == base[i].delta);
            CHECK(again[i].epsilon == base[i].epsilon);
            CHECK(again[i].mean_stop_time == base[i].mean_stop_time);
            CHECK(again[i].std_stop_time == base[i].std_stop_time);
            CHECK(again[i].error_rate == base[i].error_rate);
        }
    }
}

TEST_CASE("timeouts") {
    // Arm 7 of the literal grouping sits on the threshold, so a short budget
    // times out.
    auto plan = plan_for("synthetic-literal", {SelectionRule::tucb, SelectionRule::apt}, {0.05},
                         {0.0}, 4);
    plan.max_pulls = 500;
    const auto recs = run_experiment(plan);
    for (const auto& r : recs) {
        CHECK(r.timeout());
        CHECK(r.outcome.stop_time == 500);
        CHECK_FALSE(r.correct);
    }
    const auto cells = aggregate(recs);
    for (const auto& c : cells) {
        CHECK(c.timeouts == 4);
        CHECK(c.error_rate == 100.0);
        CHECK(c.mean_stop_time == 500.0);
    }
}

TEST_CASE("seed isolation") {
    const auto full = plan_for("medical", {SelectionRule::tucb, SelectionRule::hdoc},
                               {0.05, 0.1}, {0.01, 0.02}, 5, 17);
    const auto all = run_experiment(full);

    // Reordered plan: the same cells must produce the same records.
    auto shuffled = full;
    shuffled.algorithms = {SelectionRule::hdoc, SelectionRule::tucb};
    shuffled.deltas = {0.1, 0.05};
    shuffled.threads = 3;
    const auto other = run_experiment(shuffled);
    auto key = [](const RunRecord& r) {
        return std::make_tuple(r.algorithm, r.delta, r.epsilon, r.rep);
    };
    auto sorted_a = all, sorted_b = other;
    std::sort(sorted_a.begin(), sorted_a.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(sorted_b.begin(), sorted_b.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    CHECK(sorted_a == sorted_b);

    // A single-cell plan reproduces that cell of the full plan.
    const auto cell = run_experiment(
        plan_for("medical", {SelectionRule::hdoc}, {0.1}, {0.02}, 5, 17));
    for (const auto& r : cell) {
        CHECK(std::find(all.begin(), all.end(), r) != all.end());
    }

    // A different master seed changes every stream.
    auto reseeded = full;
    reseeded.master_seed = 18;
    const auto moved = run_experiment(reseeded);
    std::set<std::uint64_t> seeds;
    for (const auto& r : all) seeds.insert(r.seed);
    CHECK(seeds.size() == all.size());
    for (const auto& r : moved) CHECK(seeds.count(r.seed) == 0);
}

TEST_CASE("TUCB error rate stays within delta plus slack on bundled environments") {
    struct Case {
        const char* env;
        double delta;
        double epsilon;
        std::uint64_t reps;
    };
    const Case cases[] = {
        {"synthetic", 0.05, 0.005, 60},
        {"synthetic", 0.2, 0.02, 60},
        {"synthetic-degenerate", 0.05, 0.005, 20},
        {"medical", 0.05, 0.005, 300},
        {"medical", 0.2, 0.02, 300},
        {"medical-degenerate", 0.05, 0.0, 20},
    };
    for (const auto& c : cases) {
        CAPTURE(c.env);
        CAPTURE(c.delta);
        auto plan = plan_for(c.env, {SelectionRule::tucb}, {c.delta}, {c.epsilon}, c.reps, 314);
        const auto gaps = plan.environment.true_gaps(plan.thresholds);
        REQUIRE(*std::min_element(gaps.begin(), gaps.end()) < 0.0);
        const auto stats = aggregate(run_experiment(plan))[0];
        const double limit =
            100.0 * (c.delta + 3.0 * std::sqrt(c.delta / static_cast<double>(c.reps)));
        CHECK(stats.error_rate <= limit);
    }
}
