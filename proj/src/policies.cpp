#include "mtgai/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mtgai/errors.hpp"

namespace mtgai {

std::string_view to_string(SelectionRule rule) {
    switch (rule) {
        case SelectionRule::tucb: return "tucb";
        case SelectionRule::hdoc: return "hdoc";
        case SelectionRule::lucb: return "lucb";
        case SelectionRule::apt: return "apt";
    }
    return "?";
}

std::optional<SelectionRule> parse_rule(std::string_view name) {
    for (SelectionRule r : kAllRules) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

double selection_index(SelectionRule rule, double g_hat, std::uint64_t pulls,
                       std::uint64_t round, const ProblemSpec& spec) {
    const double n = static_cast<double>(pulls);
    switch (rule) {
        case SelectionRule::tucb:
            return ucb_index(g_hat, pulls, spec.num_arms, spec.num_objectives, spec.sigma);
        case SelectionRule::hdoc:
            return g_hat - std::sqrt(std::log(static_cast<double>(round)) / (2.0 * n));
        case SelectionRule::lucb:
            return g_hat - alpha(pulls, spec.delta, spec.num_arms, spec.num_objectives,
                                 spec.sigma);
        case SelectionRule::apt:
            return std::sqrt(n) * std::abs(g_hat - spec.epsilon);
    }
    throw std::logic_error("unknown selection rule");
}

namespace {

std::size_t argmin_active(std::span<const std::size_t> active, std::span<const double> index) {
    std::size_t best = active.front();
    for (std::size_t i : active) {
        if (index[i] < index[best]) best = i;
    }
    return best;
}

}  // namespace

std::size_t select_arm(const PolicyState& state, const GapEstimate& gaps,
                       const ProblemSpec& spec) {
    if (state.active.empty()) throw std::logic_error("select_arm: active set is empty");
    std::vector<double> index(state.stats.size(), 0.0);
    for (std::size_t i : state.active) {
        if (state.stats[i].pulls() == 0) {
            throw PreconditionError("select_arm: active arm " + std::to_string(i + 1) +
                                    " has not been pulled");
        }
        index[i] = selection_index(state.rule, gaps.g_hat[i], state.stats[i].pulls(),
                                   state.round + 1, spec);
    }
    return argmin_active(state.active, index);
}

RunOutcome run_policy(const ProblemSpec& spec, SelectionRule rule,
                      const RewardSampler& sampler, std::uint64_t max_pulls, Rng& rng,
                      std::vector<TraceRow>* trace) {
    spec.validate();
    const std::size_t k = spec.num_arms;
    const std::size_t m = spec.num_objectives;
    if (max_pulls < k) {
        throw ConfigError("max_pulls (" + std::to_string(max_pulls) +
                          ") must be at least the number of arms (" + std::to_string(k) + ")");
    }

    std::vector<ArmStatistics> stats(k, ArmStatistics(m));
    std::vector<double> g_hat(k, 0.0);
    std::vector<double> index(k, 0.0);
    std::vector<std::size_t> active(k);
    for (std::size_t i = 0; i < k; ++i) active[i] = i;
    std::vector<double> z;
    z.reserve(m);

    auto pull = [&](std::size_t arm) {
        z.clear();
        sampler(arm, rng, z);
        if (z.size() != m) {
            throw DimensionError("sampler returned " + std::to_string(z.size()) +
                                 " reward components, expected " + std::to_string(m));
        }
        stats[arm].record(z);
        g_hat[arm] = stats[arm].gap_estimate(spec.thresholds);
    };

    // Only the pulled arm's statistics change between rounds, so cached
    // indices stay valid for every rule except hdoc, whose index depends on t.
    const bool round_dependent = rule == SelectionRule::hdoc;
    auto refresh_index = [&](std::size_t arm, std::uint64_t next_round) {
        index[arm] = selection_index(rule, g_hat[arm], stats[arm].pulls(), next_round, spec);
    };

    std::uint64_t t = 0;
    for (std::size_t i = 0; i < k; ++i) {
        pull(i);
        ++t;
        if (trace) {
            const auto ci = confidence_bounds(g_hat[i], stats[i].pulls(), spec);
            trace->push_back({t, i, g_hat[i], ci.lower, ci.upper, active.size()});
        }
    }
    for (std::size_t i = 0; i < k; ++i) refresh_index(i, t + 1);

    while (t < max_pulls) {
        const std::uint64_t round = t + 1;
        if (round_dependent) {
            for (std::size_t i : active) refresh_index(i, round);
        }
        const std::size_t arm = argmin_active(active, index);
        pull(arm);
        t = round;
        const auto ci = confidence_bounds(g_hat[arm], stats[arm].pulls(), spec);

        if (ci.lower > 0.0) {
            active.erase(std::find(active.begin(), active.end(), arm));
        }
        if (trace) trace->push_back({t, arm, g_hat[arm], ci.lower, ci.upper, active.size()});
        if (ci.upper <= spec.epsilon) return {OutcomeKind::arm, arm, t};
        if (active.empty()) return {OutcomeKind::bottom, 0, t};

        if (!round_dependent) refresh_index(arm, t + 1);
    }
    return {OutcomeKind::timeout, 0, max_pulls};
}

}  // namespace mtgai
