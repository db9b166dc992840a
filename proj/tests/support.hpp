#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mtgai/core.hpp"
#include "mtgai/environments.hpp"
#include "mtgai/estimator.hpp"
#include "mtgai/random.hpp"

namespace mtgai::test {

inline bool rel_close(double actual, double expected, double tol) {
    return std::abs(actual - expected) <= tol * std::abs(expected);
}

inline BanditEnvironment make_env(std::vector<std::vector<double>> means, double sigma,
                                  RewardFamily family = RewardFamily::gaussian) {
    BanditEnvironment env;
    env.name = "test";
    env.num_arms = means.size();
    env.num_objectives = means.front().size();
    env.means = std::move(means);
    env.sigma = family == RewardFamily::degenerate ? 0.0 : sigma;
    env.family = family;
    return env;
}

// Fraction of `runs` round-robin runs of length `length` in which every arm's
// gap estimate stays within alpha(T_i(s), delta) of its true gap at every
// round s (rounds where the arm has no pulls yet are skipped).
inline double estimator_coverage(const BanditEnvironment& env, const std::vector<double>& xi,
                                 double delta, int runs, int length, std::uint64_t seed) {
    const auto g = env.true_gaps(xi);
    int covered = 0;
    std::vector<double> z;
    for (int r = 0; r < runs; ++r) {
        Rng rng(mix64(seed + static_cast<std::uint64_t>(r)));
        std::vector<ArmStatistics> stats(env.num_arms, ArmStatistics(env.num_objectives));
        bool ok = true;
        for (int s = 0; s < length && ok; ++s) {
            const std::size_t arm = static_cast<std::size_t>(s) % env.num_arms;
            env.sample(arm, rng, z);
            stats[arm].record(z);
            for (std::size_t i = 0; i < env.num_arms; ++i) {
                if (stats[i].pulls() == 0) continue;
                const double radius =
                    alpha(stats[i].pulls(), delta, env.num_arms, env.num_objectives, env.sigma);
                if (std::abs(stats[i].gap_estimate(xi) - g[i]) > radius) {
                    ok = false;
                    break;
                }
            }
        }
        covered += ok ? 1 : 0;
    }
    return static_cast<double>(covered) / runs;
}

}  // namespace mtgai::test
