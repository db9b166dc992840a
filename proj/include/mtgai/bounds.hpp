#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mtgai/core.hpp"

namespace mtgai {

/*
 * Closed-form sample-complexity bounds for the TUCB stopping rule.
 *
 * Every upper-bound evaluator takes a slack epsilon0 in (0, limit), where the
 * limit depends on the regime:
 *   good_arm_exists:  epsilon0 < epsilon - g_i for every good arm and
 *                     epsilon0 < g_i - epsilon for every non-epsilon-good arm;
 *   no_eps_good_arm:  epsilon0 < g_i - epsilon for every arm.
 */
enum class Regime { good_arm_exists, no_eps_good_arm };

// good_arm_exists if some g_i <= 0, no_eps_good_arm if every g_i > epsilon,
// nullopt when the best arm is epsilon-good but not good (neither upper bound applies).
std::optional<Regime> detect_regime(std::span<const double> true_gaps, double epsilon);

struct BoundInputs {
    ProblemSpec spec;
    std::vector<double> true_gaps;
    double epsilon0 = 0.0;
    Regime regime = Regime::good_arm_exists;

    // Throws PreconditionError naming the violated constraint.
    void validate() const;
};

// Supremum of admissible epsilon0 values; PreconditionError if the interval is
// empty (e.g. an arm sits exactly at g_i = epsilon).
double epsilon0_limit(std::span<const double> true_gaps, double epsilon, Regime regime);

// Per-arm term t_i(epsilon0). `arm_class` selects the margin
//   good_arm_exists:  a = epsilon - g_i - epsilon0   (good arm)
//   no_eps_good_arm:  a = g_i - epsilon - epsilon0   (non-epsilon-good arm)
// and a <= 0 is a PreconditionError. The inner logarithm's argument is
// clamped below at e so that inner log >= 1.
double t_i(double epsilon0, double g_i, const ProblemSpec& spec, Regime arm_class);

// t_i for every arm for which it is defined (good or non-epsilon-good);
// nullopt for arms with 0 < g_i <= epsilon.
std::vector<std::optional<double>> t_values(const BoundInputs& inputs);

double upper_bound_good(const BoundInputs& inputs);
double upper_bound_no_good(const BoundInputs& inputs);
double upper_bound(const BoundInputs& inputs);

// limsup E[T_stop] / ln(1/delta) constants, taken literally:
//   good_arm_exists:  4 sigma^2 / (epsilon - g_{i*} - epsilon0)^2
//   no_eps_good_arm:  sum_i 4 sigma^2 / (epsilon - g_i - epsilon0)^2
double asymptotic_constant(const BoundInputs& inputs);

// 20 log-spaced points between 1e-3 * limit and 0.95 * limit.
std::vector<double> epsilon0_grid(double limit);

struct BestUpperBound {
    double epsilon0;
    double value;
};

// Minimum of upper_bound over epsilon0_grid(epsilon0_limit(...)).
BestUpperBound best_upper_bound(const ProblemSpec& spec, std::span<const double> true_gaps,
                                Regime regime);

struct LowerBoundInputs {
    std::vector<std::vector<double>> means;  // K x M, entries in [0,1]
    std::vector<double> thresholds;          // M, entries in [0,1]
    double delta = 0.05;
};

// Bernoulli-instance lower bound ln(1/(2 delta))/D - delta/D, with
// D = max_i min_m d(mu_i^(m), xi_m) over good arms (good_arm_exists) or over
// all arms (no_eps_good_arm). D = +inf yields 0; D = 0 throws.
double lower_bound(const LowerBoundInputs& inputs, Regime regime);

// min_m min(xi_m, 1 - xi_m); every xi_m must lie in (0,1).
double pinsker_constant(std::span<const double> thresholds);

}  // namespace mtgai
