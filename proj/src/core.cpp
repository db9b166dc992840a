#include "mtgai/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mtgai/errors.hpp"

namespace mtgai {

void ProblemSpec::validate() const {
    if (num_arms < 1) throw ConfigError("num_arms must be >= 1");
    if (num_objectives < 1) throw ConfigError("num_objectives must be >= 1");
    if (thresholds.size() != num_objectives) {
        throw ConfigError("thresholds has " + std::to_string(thresholds.size()) +
                          " entries, expected num_objectives = " +
                          std::to_string(num_objectives));
    }
    for (std::size_t m = 0; m < thresholds.size(); ++m) {
        if (!(thresholds[m] >= 0.0 && thresholds[m] <= 1.0)) {
            throw ConfigError("threshold " + std::to_string(m + 1) + " must lie in [0,1]");
        }
    }
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0,1]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
}

double gap(std::span<const double> mean, std::span<const double> thresholds) {
    if (mean.size() != thresholds.size()) {
        throw DimensionError("gap: mean has " + std::to_string(mean.size()) +
                             " objectives but thresholds has " +
                             std::to_string(thresholds.size()));
    }
    if (mean.empty()) throw DimensionError("gap: need at least one objective");
    double g = thresholds[0] - mean[0];
    for (std::size_t m = 1; m < mean.size(); ++m) {
        g = std::max(g, thresholds[m] - mean[m]);
    }
    return g;
}

double alpha(std::uint64_t pulls, double delta, std::size_t num_arms,
             std::size_t num_objectives, double sigma) {
    if (pulls == 0) throw PreconditionError("alpha: pull count must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("alpha: delta must lie in (0,1)");
    if (num_arms < 1 || num_objectives < 1) {
        throw PreconditionError("alpha: K and M must be >= 1");
    }
    if (sigma == 0.0) return 0.0;
    const double tau = static_cast<double>(pulls);
    const double km = static_cast<double>(num_arms) * static_cast<double>(num_objectives);
    const double log_term =
        std::log(std::numbers::pi * std::numbers::pi * km * tau * tau / (3.0 * delta));
    return std::sqrt(2.0 * sigma * sigma * log_term / tau);
}

ConfidenceInterval confidence_bounds(double g_hat, std::uint64_t pulls,
                                     const ProblemSpec& spec) {
    const double r =
        alpha(pulls, spec.delta, spec.num_arms, spec.num_objectives, spec.sigma);
    return {g_hat - r, g_hat + r};
}

double ucb_index(double g_hat, std::uint64_t pulls, std::size_t num_arms,
                 std::size_t num_objectives, double sigma) {
    if (pulls == 0) throw PreconditionError("ucb_index: pull count must be >= 1");
    if (num_arms < 1 || num_objectives < 1) {
        throw PreconditionError("ucb_index: K and M must be >= 1");
    }
    const double tau = static_cast<double>(pulls);
    const double km = static_cast<double>(num_arms) * static_cast<double>(num_objectives);
    return g_hat - std::sqrt(2.0 * sigma * sigma * std::log(km * tau) / tau);
}

double binary_relative_entropy(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
        throw PreconditionError("binary_relative_entropy: arguments must lie in [0,1]");
    }
    if (x == y) return 0.0;
    if (y == 0.0 || y == 1.0) return std::numeric_limits<double>::infinity();
    const double head = x == 0.0 ? 0.0 : x * std::log(x / y);
    const double tail = x == 1.0 ? 0.0 : (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    return head + tail;
}

}  // namespace mtgai
