#include "mtgai/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mtgai/errors.hpp"

namespace mtgai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t best_arm(std::span<const double> gaps) {
    return static_cast<std::size_t>(std::min_element(gaps.begin(), gaps.end()) - gaps.begin());
}

}  // namespace

std::optional<Regime> detect_regime(std::span<const double> true_gaps, double epsilon) {
    if (true_gaps.empty()) throw PreconditionError("detect_regime: no arms");
    const double best = *std::min_element(true_gaps.begin(), true_gaps.end());
    if (is_good(best)) return Regime::good_arm_exists;
    if (best > epsilon) return Regime::no_eps_good_arm;
    return std::nullopt;
}

double epsilon0_limit(std::span<const double> true_gaps, double epsilon, Regime regime) {
    double limit = kInf;
    for (std::size_t i = 0; i < true_gaps.size(); ++i) {
        const double g = true_gaps[i];
        if (g == epsilon) {
            throw PreconditionError("arm " + std::to_string(i + 1) +
                                    " has g_i == epsilon exactly, so the regime boundary is "
                                    "ambiguous and no epsilon0 is admissible");
        }
        double margin = kInf;
        if (regime == Regime::good_arm_exists && is_good(g)) {
            margin = epsilon - g;
        } else if (g > epsilon) {
            margin = g - epsilon;
        } else if (regime == Regime::no_eps_good_arm) {
            throw PreconditionError("arm " + std::to_string(i + 1) +
                                    " is epsilon-good (g_i <= epsilon); the no-epsilon-good-arm "
                                    "regime does not apply");
        }
        limit = std::min(limit, margin);
    }
    if (!(limit > 0.0)) {
        throw PreconditionError("no admissible epsilon0: some arm has g_i == epsilon or a good "
                                "arm has g_i == epsilon, so the regime boundary is ambiguous");
    }
    if (regime == Regime::good_arm_exists &&
        !is_good(*std::min_element(true_gaps.begin(), true_gaps.end()))) {
        throw PreconditionError("good-arm regime requested but no arm has g_i <= 0");
    }
    return limit;
}

void BoundInputs::validate() const {
    spec.validate();
    if (true_gaps.size() != spec.num_arms) {
        throw DimensionError("bound inputs: " + std::to_string(true_gaps.size()) +
                             " gaps for K = " + std::to_string(spec.num_arms));
    }
    const double limit = epsilon0_limit(true_gaps, spec.epsilon, regime);
    if (!(epsilon0 > 0.0 && epsilon0 < limit)) {
        throw PreconditionError("epsilon0 = " + std::to_string(epsilon0) +
                                " must satisfy 0 < epsilon0 < " + std::to_string(limit));
    }
}

double t_i(double epsilon0, double g_i, const ProblemSpec& spec, Regime arm_class) {
    const double a = arm_class == Regime::good_arm_exists ? spec.epsilon - g_i - epsilon0
                                                          : g_i - spec.epsilon - epsilon0;
    if (!(a > 0.0)) {
        throw PreconditionError(arm_class == Regime::good_arm_exists
                                    ? "t_i: need epsilon - g_i - epsilon0 > 0"
                                    : "t_i: need g_i - epsilon - epsilon0 > 0");
    }
    const double s2 = spec.sigma * spec.sigma;
    if (s2 == 0.0) return 0.0;
    const double a2 = a * a;
    const double km = static_cast<double>(spec.num_arms) * static_cast<double>(spec.num_objectives);
    const double sqrt3_pi = std::numbers::sqrt3 * std::numbers::pi;
    const double inner = std::log(std::max(4.0 * sqrt3_pi * s2 / (3.0 * a2), std::numbers::e));
    const double outer = (8.0 * sqrt3_pi * s2 * km / spec.delta) / (3.0 * a2) * inner;
    return std::max(4.0 * s2 / a2 * std::log(outer), 0.0);
}

std::vector<std::optional<double>> t_values(const BoundInputs& inputs) {
    std::vector<std::optional<double>> out;
    out.reserve(inputs.true_gaps.size());
    for (double g : inputs.true_gaps) {
        if (is_good(g)) {
            out.emplace_back(t_i(inputs.epsilon0, g, inputs.spec, Regime::good_arm_exists));
        } else if (g > inputs.spec.epsilon) {
            out.emplace_back(t_i(inputs.epsilon0, g, inputs.spec, Regime::no_eps_good_arm));
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

double upper_bound_good(const BoundInputs& inputs) {
    if (inputs.regime != Regime::good_arm_exists) {
        throw PreconditionError("upper_bound_good: regime must be good_arm_exists");
    }
    inputs.validate();
    const auto& spec = inputs.spec;
    const auto& g = inputs.true_gaps;
    const std::size_t star = best_arm(g);
    const auto ts = t_values(inputs);

    double t_floor_max = 1.0;
    for (const auto& t : ts) {
        if (t) t_floor_max = std::max(t_floor_max, std::floor(*t));
    }
    const double k = static_cast<double>(spec.num_arms);
    const double m = static_cast<double>(spec.num_objectives);
    const double s2 = spec.sigma * spec.sigma;
    const double e0 = inputs.epsilon0;
    const double log_term = std::log(k * m * t_floor_max);

    double bound = *ts[star];
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i == star) continue;
        const double d = g[i] - g[star] + e0;
        bound += 8.0 * s2 * log_term / (d * d);
    }
    bound += 2.0 * (k + 1.0) * m * s2 / (e0 * e0);
    bound += k * k * k * m / (2.0 * e0 * e0) * std::exp(4.0 * e0 * e0);
    return bound;
}

double upper_bound_no_good(const BoundInputs& inputs) {
    if (inputs.regime != Regime::no_eps_good_arm) {
        throw PreconditionError("upper_bound_no_good: regime must be no_eps_good_arm");
    }
    inputs.validate();
    const auto& spec = inputs.spec;
    double bound = 0.0;
    for (double g : inputs.true_gaps) {
        bound += t_i(inputs.epsilon0, g, spec, Regime::no_eps_good_arm);
    }
    const double km = static_cast<double>(spec.num_arms) * static_cast<double>(spec.num_objectives);
    return bound + km * spec.sigma * spec.sigma / (inputs.epsilon0 * inputs.epsilon0);
}

double upper_bound(const BoundInputs& inputs) {
    return inputs.regime == Regime::good_arm_exists ? upper_bound_good(inputs)
                                                    : upper_bound_no_good(inputs);
}

double asymptotic_constant(const BoundInputs& inputs) {
    inputs.validate();
    const double s2 = inputs.spec.sigma * inputs.spec.sigma;
    auto term = [&](double g) {
        const double d = inputs.spec.epsilon - g - inputs.epsilon0;
        if (std::abs(d) < 1e-300) {
            throw PreconditionError("asymptotic_constant: epsilon - g_i - epsilon0 is zero");
        }
        return 4.0 * s2 / (d * d);
    };
    if (inputs.regime == Regime::good_arm_exists) return term(inputs.true_gaps[best_arm(inputs.true_gaps)]);
    double sum = 0.0;
    for (double g : inputs.true_gaps) sum += term(g);
    return sum;
}

std::vector<double> epsilon0_grid(double limit) {
    if (!(limit > 0.0)) throw PreconditionError("epsilon0_grid: limit must be positive");
    constexpr int kPoints = 20;
    const double lo = 1e-3 * limit;
    const double hi = 0.95 * limit;
    std::vector<double> grid(kPoints);
    for (int j = 0; j < kPoints; ++j) {
        grid[j] = lo * std::pow(hi / lo, static_cast<double>(j) / (kPoints - 1));
    }
    return grid;
}

BestUpperBound best_upper_bound(const ProblemSpec& spec, std::span<const double> true_gaps,
                                Regime regime) {
    const double limit = epsilon0_limit(true_gaps, spec.epsilon, regime);
    const double cap = std::isfinite(limit) ? limit : 1.0;
    BestUpperBound best{0.0, kInf};
    for (double e0 : epsilon0_grid(cap)) {
        BoundInputs in{spec, {true_gaps.begin(), true_gaps.end()}, e0, regime};
        const double v = upper_bound(in);
        if (v < best.value) best = {e0, v};
    }
    return best;
}

double lower_bound(const LowerBoundInputs& inputs, Regime regime) {
    if (!(inputs.delta > 0.0 && inputs.delta < 1.0)) {
        throw PreconditionError("lower_bound: delta must lie in (0,1)");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!std::all_of(inputs.thresholds.begin(), inputs.thresholds.end(), in_unit)) {
        throw PreconditionError("lower_bound: thresholds must lie in [0,1]");
    }
    double d_max = -kInf;
    bool any = false;
    for (std::size_t i = 0; i < inputs.means.size(); ++i) {
        const auto& mu = inputs.means[i];
        if (mu.size() != inputs.thresholds.size()) {
            throw DimensionError("lower_bound: means row " + std::to_string(i + 1) +
                                 " length differs from thresholds");
        }
        if (!std::all_of(mu.begin(), mu.end(), in_unit)) {
            throw PreconditionError("lower_bound: means must lie in [0,1] (Bernoulli instance)");
        }
        if (regime == Regime::good_arm_exists && !is_good(gap(mu, inputs.thresholds))) continue;
        double d_min = kInf;
        for (std::size_t m = 0; m < mu.size(); ++m) {
            d_min = std::min(d_min, binary_relative_entropy(mu[m], inputs.thresholds[m]));
        }
        d_max = std::max(d_max, d_min);
        any = true;
    }
    if (!any) throw PreconditionError("lower_bound: good-arm regime but no good arm");
    if (d_max == 0.0) {
        throw PreconditionError("lower_bound: degenerate instance, an arm matches the "
                                "thresholds in an objective (max-min entropy is 0)");
    }
    if (std::isinf(d_max)) return 0.0;
    return std::log(1.0 / (2.0 * inputs.delta)) / d_max - inputs.delta / d_max;
}

double pinsker_constant(std::span<const double> thresholds) {
    if (thresholds.empty()) throw PreconditionError("pinsker_constant: no thresholds");
    double a = kInf;
    for (double x : thresholds) {
        if (!(x > 0.0 && x < 1.0)) {
            throw PreconditionError("pinsker_constant: thresholds must lie strictly in (0,1)");
        }
        a = std::min({a, x, 1.0 - x});
    }
    return a;
}

}  // namespace mtgai
