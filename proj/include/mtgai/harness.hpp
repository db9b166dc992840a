#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtgai/environments.hpp"
#include "mtgai/policies.hpp"

namespace mtgai {

inline constexpr std::uint64_t kDefaultMaxPulls = 200000;

struct ExperimentPlan {
    BanditEnvironment environment;
    std::vector<double> thresholds;
    std::vector<SelectionRule> algorithms;
    std::vector<double> deltas;
    std::vector<double> epsilons;
    std::uint64_t repetitions = 1;
    std::uint64_t max_pulls = kDefaultMaxPulls;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency

    // Throws ConfigError before any run starts.
    void validate() const;
};

struct RunRecord {
    SelectionRule algorithm;
    double delta;
    double epsilon;
    std::uint64_t rep;
    std::uint64_t seed;
    RunOutcome outcome;
    bool correct;

    bool timeout() const { return outcome.kind == OutcomeKind::timeout; }
    bool operator==(const RunRecord&) const = default;
};

// Per-run seed: SplitMix64 chained over (master, rule, bits(delta),
// bits(epsilon), rep). Independent of scheduling and of other cells.
std::uint64_t derive_run_seed(std::uint64_t master_seed, SelectionRule rule, double delta,
                              double epsilon, std::uint64_t rep);

// Success criterion for one outcome given the true gaps:
//   a good arm exists      -> output an arm with g <= epsilon;
//   no epsilon-good arm    -> output bottom;
//   best arm in (0, eps]   -> output an epsilon-good arm or bottom.
// Timeouts are never correct.
bool is_correct(const RunOutcome& outcome, std::span<const double> true_gaps, double epsilon);

// Records in canonical order: algorithm, delta, epsilon (as listed in the
// plan), then repetition. Runs execute on plan.threads workers.
std::vector<RunRecord> run_experiment(const ExperimentPlan& plan);

struct CellStats {
    SelectionRule algorithm;
    double delta;
    double epsilon;
    std::uint64_t repetitions;
    double mean_stop_time;   // timeouts contribute max_pulls
    double std_stop_time;    // Bessel-corrected; 0 for a single repetition
    double error_rate;       // percent
    std::uint64_t timeouts;
};

inline constexpr const char* kStdKind = "sample";

// One row per (algorithm, delta, epsilon), sorted by rule, delta, epsilon.
// Exact integer accumulation makes the result independent of record order.
std::vector<CellStats> aggregate(std::span<const RunRecord> records);

}  // namespace mtgai
