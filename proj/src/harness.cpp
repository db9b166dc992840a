#include "mtgai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>

#include "mtgai/errors.hpp"

namespace mtgai {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

void ExperimentPlan::validate() const {
    environment.validate();
    if (thresholds.size() != environment.num_objectives) {
        throw ConfigError("plan: thresholds has " + std::to_string(thresholds.size()) +
                          " entries, environment has M = " +
                          std::to_string(environment.num_objectives));
    }
    if (algorithms.empty()) throw ConfigError("plan: no algorithms");
    if (deltas.empty() || epsilons.empty()) throw ConfigError("plan: empty delta or epsilon grid");
    if (repetitions < 1) throw ConfigError("plan: repetitions must be >= 1");
    if (max_pulls < environment.num_arms) {
        throw ConfigError("plan: max_pulls must be >= K = " +
                          std::to_string(environment.num_arms));
    }
    for (double d : deltas) {
        for (double e : epsilons) {
            ProblemSpec spec{environment.num_arms, environment.num_objectives, thresholds, d, e,
                             environment.noise_scale()};
            spec.validate();
        }
    }
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, SelectionRule rule, double delta,
                              double epsilon, std::uint64_t rep) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ static_cast<std::uint64_t>(rule));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(delta));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(epsilon));
    return mix64(h ^ rep);
}

bool is_correct(const RunOutcome& outcome, std::span<const double> true_gaps, double epsilon) {
    if (outcome.kind == OutcomeKind::timeout) return false;
    const double best = *std::min_element(true_gaps.begin(), true_gaps.end());
    if (outcome.kind == OutcomeKind::bottom) return !is_good(best);
    const bool picked_eps_good = is_epsilon_good(true_gaps[outcome.arm], epsilon);
    if (is_good(best)) return picked_eps_good;
    if (best > epsilon) return false;
    return picked_eps_good;
}

std::vector<RunRecord> run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    const auto& env = plan.environment;
    const auto gaps = env.true_gaps(plan.thresholds);

    struct Cell {
        SelectionRule rule;
        double delta;
        double epsilon;
    };
    std::vector<Cell> cells;
    for (SelectionRule r : plan.algorithms) {
        for (double d : plan.deltas) {
            for (double e : plan.epsilons) cells.push_back({r, d, e});
        }
    }

    const std::size_t total = cells.size() * plan.repetitions;
    std::vector<RunRecord> records(total);
    const RewardSampler sampler = [&env](std::size_t arm, Rng& rng, std::vector<double>& out) {
        env.sample(arm, rng, out);
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            try {
                const Cell& c = cells[job / plan.repetitions];
                const std::uint64_t rep = job % plan.repetitions;
                const std::uint64_t seed =
                    derive_run_seed(plan.master_seed, c.rule, c.delta, c.epsilon, rep);
                ProblemSpec spec{env.num_arms, env.num_objectives, plan.thresholds,
                                 c.delta,      c.epsilon,          env.noise_scale()};
                Rng rng(seed);
                const RunOutcome out = run_policy(spec, c.rule, sampler, plan.max_pulls, rng);
                records[job] = {c.rule, c.delta, c.epsilon, rep, seed, out,
                                is_correct(out, gaps, c.epsilon)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = total;
            }
        }
    };

    unsigned n = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, total));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

std::vector<CellStats> aggregate(std::span<const RunRecord> records) {
    if (records.empty()) throw PreconditionError("aggregate: no records");

    struct Acc {
        std::uint64_t n = 0;
        u128 sum = 0;
        u128 sum_sq = 0;
        std::uint64_t errors = 0;
        std::uint64_t timeouts = 0;
    };
    using Key = std::tuple<SelectionRule, double, double>;
    std::map<Key, Acc> cells;
    for (const auto& r : records) {
        Acc& a = cells[{r.algorithm, r.delta, r.epsilon}];
        const auto x = static_cast<u128>(r.outcome.stop_time);
        ++a.n;
        a.sum += x;
        a.sum_sq += x * x;
        if (!r.correct) ++a.errors;
        if (r.timeout()) ++a.timeouts;
    }

    std::vector<CellStats> out;
    out.reserve(cells.size());
    for (const auto& [key, a] : cells) {
        const auto [rule, delta, epsilon] = key;
        const double n = static_cast<double>(a.n);
        const double mean = static_cast<double>(a.sum) / n;
        double sd = 0.0;
        if (a.n > 1) {
            // n * sum_sq - sum^2 is exact and nonnegative.
            const auto num = static_cast<u128>(a.n) * a.sum_sq - a.sum * a.sum;
            sd = std::sqrt(static_cast<double>(num) / (n * (n - 1.0)));
        }
        out.push_back({rule, delta, epsilon, a.n, mean, sd,
                       100.0 * static_cast<double>(a.errors) / n, a.timeouts});
    }
    return out;
}

}  // namespace mtgai
