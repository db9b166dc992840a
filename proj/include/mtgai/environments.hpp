#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgai/random.hpp"

namespace mtgai {

enum class RewardFamily { gaussian, degenerate };

// Ground truth for a simulated bandit: K arms, M objectives, one shared noise
// scale. Rewards are not truncated to [0,1].
struct BanditEnvironment {
    std::string name;
    std::size_t num_arms = 0;
    std::size_t num_objectives = 0;
    std::vector<std::vector<double>> means;  // num_arms rows of num_objectives
    double sigma = 0.0;
    RewardFamily family = RewardFamily::gaussian;
    std::optional<std::vector<double>> thresholds;

    // Throws ConfigError naming the offending field.
    void validate() const;

    // Effective noise scale: 0 for the degenerate family.
    double noise_scale() const { return family == RewardFamily::degenerate ? 0.0 : sigma; }

    std::vector<double> true_gaps(std::span<const double> thresholds) const;

    // Gaussian: N(means[arm][m], sigma^2) per component, drawn in pairs, so one
    // call consumes exactly 2 * ceil(M / 2) engine outputs. Degenerate: the
    // mean row, no draws.
    void sample(std::size_t arm, Rng& rng, std::vector<double>& out) const;

    bool operator==(const BanditEnvironment&) const = default;
};

std::vector<double> sample_reward(const BanditEnvironment& env, std::size_t arm, Rng& rng);

// K=10, M=4, sigma=1.2, thresholds (0.6, 0.5, 0.6, 0.5).
BanditEnvironment synthetic_environment();
// Same, with objective 4 grouped 1:4 / 5:8 / 9:10 (arm 7 has gap exactly 0).
BanditEnvironment synthetic_literal_environment();
// K=5, M=2, sigma=1.0, thresholds (0.48, 0.75).
BanditEnvironment medical_environment();

// "synthetic", "synthetic-degenerate", "synthetic-literal", "medical",
// "medical-degenerate".
std::optional<BanditEnvironment> bundled_environment(std::string_view name);
std::vector<std::string> bundled_environment_names();

// JSON document with fields name, K, M, sigma, family, means and optional
// thresholds. Unknown fields are rejected. Throws ParseError.
BanditEnvironment load_environment(std::string_view document);
BanditEnvironment load_environment_file(const std::filesystem::path& path);
std::string save_environment(const BanditEnvironment& env);

}  // namespace mtgai
