#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mtgai {

/*
 * Multi-threshold good arm identification: an arm i with mean vector mu_i is
 * good when mu_i >= xi componentwise, and epsilon-good when
 * mu_i >= xi - epsilon. Both are read off the scalar gap
 *
 *     g_i = max_m (xi_m - mu_i^(m)),
 *
 * which is <= 0 exactly for good arms and <= epsilon for epsilon-good arms.
 *
 * Arms are 0-based everywhere in the library; only user-facing output is
 * 1-based.
 */

using MeanVector = std::vector<double>;

struct ProblemSpec {
    std::size_t num_arms = 1;
    std::size_t num_objectives = 1;
    std::vector<double> thresholds;
    double delta = 0.05;
    double epsilon = 0.0;
    double sigma = 1.0;

    // Throws ConfigError naming the first violated constraint.
    void validate() const;
};

// max_m (thresholds[m] - mean[m]); no clamping, negative values are meaningful.
double gap(std::span<const double> mean, std::span<const double> thresholds);

inline bool is_good(double g) { return g <= 0.0; }
inline bool is_epsilon_good(double g, double epsilon) { return g <= epsilon; }

// Confidence radius of the gap estimator after `pulls` observations:
// sqrt(2 sigma^2 ln(pi^2 K M pulls^2 / (3 delta)) / pulls).
double alpha(std::uint64_t pulls, double delta, std::size_t num_arms,
             std::size_t num_objectives, double sigma);

struct ConfidenceInterval {
    double lower;
    double upper;
};

// (g_hat - alpha, g_hat + alpha) with the radius taken from `spec`.
ConfidenceInterval confidence_bounds(double g_hat, std::uint64_t pulls,
                                     const ProblemSpec& spec);

// Optimistic gap index used for arm selection:
// g_hat - sqrt(2 sigma^2 ln(K M pulls) / pulls).
double ucb_index(double g_hat, std::uint64_t pulls, std::size_t num_arms,
                 std::size_t num_objectives, double sigma);

// Bernoulli KL divergence d(x, y) with d(0,0) = d(1,1) = 0 and 0 ln 0 = 0.
// Returns +infinity when y is 0 or 1 and x != y.
double binary_relative_entropy(double x, double y);

}  // namespace mtgai
