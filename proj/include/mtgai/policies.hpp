#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtgai/core.hpp"
#include "mtgai/estimator.hpp"
#include "mtgai/random.hpp"

namespace mtgai {

// Arm selection rules. All four share the same initialization and stopping
// conditions and differ only in the index minimised over the active set.
enum class SelectionRule {
    tucb,  // g_hat - sqrt(2 sigma^2 ln(K M T_i) / T_i)
    hdoc,  // g_hat - sqrt(ln(t) / (2 T_i)), t = current round, no sigma scaling
    lucb,  // g_hat - alpha(T_i, delta)
    apt,   // sqrt(T_i) |g_hat - epsilon|
};

inline constexpr SelectionRule kAllRules[] = {SelectionRule::apt, SelectionRule::hdoc,
                                              SelectionRule::lucb, SelectionRule::tucb};

std::string_view to_string(SelectionRule rule);
std::optional<SelectionRule> parse_rule(std::string_view name);

// Index of one arm under `rule`; `round` is the round about to be played.
double selection_index(SelectionRule rule, double g_hat, std::uint64_t pulls,
                       std::uint64_t round, const ProblemSpec& spec);

struct PolicyState {
    std::vector<std::size_t> active;  // ascending, never re-grown
    std::vector<ArmStatistics> stats;
    std::uint64_t round = 0;          // pulls performed so far
    SelectionRule rule = SelectionRule::tucb;
};

// Active arm with the smallest index for the round after state.round; ties go
// to the lowest arm. Throws std::logic_error on an empty active set.
std::size_t select_arm(const PolicyState& state, const GapEstimate& gaps,
                       const ProblemSpec& spec);

enum class OutcomeKind { arm, bottom, timeout };

struct RunOutcome {
    OutcomeKind kind = OutcomeKind::timeout;
    std::size_t arm = 0;            // 0-based, meaningful only for OutcomeKind::arm
    std::uint64_t stop_time = 0;    // total pulls, initialization included

    bool operator==(const RunOutcome&) const = default;
};

struct TraceRow {
    std::uint64_t round;
    std::size_t arm;
    double g_hat;
    double lower;
    double upper;
    std::size_t active_size;

    bool operator==(const TraceRow&) const = default;
};

// Fills `out` with one reward vector for `arm`.
using RewardSampler = std::function<void(std::size_t arm, Rng& rng, std::vector<double>& out)>;

/*
 * Runs one identification episode.
 *
 * Rounds 1..K pull every arm once in index order with no stopping tests.
 * From round K+1 on, the arm minimising the rule's index over the active set
 * is pulled, its gap estimate refreshed, and then, for that arm only:
 *   1. lower confidence value > 0        -> delete it from the active set,
 *   2. upper confidence value <= epsilon -> stop, output the arm,
 *   3. active set empty                  -> stop, output bottom.
 * If max_pulls rounds pass without stopping the outcome is a timeout with
 * stop_time = max_pulls.
 *
 * Throws ConfigError when max_pulls < K, DimensionError when the sampler
 * returns a vector of the wrong length. When `trace` is non-null one row is
 * appended per round, initialization included.
 */
RunOutcome run_policy(const ProblemSpec& spec, SelectionRule rule,
                      const RewardSampler& sampler, std::uint64_t max_pulls, Rng& rng,
                      std::vector<TraceRow>* trace = nullptr);

}  // namespace mtgai
