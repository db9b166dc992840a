#include "mtgai/estimator.hpp"

#include <algorithm>
#include <string>

#include "mtgai/errors.hpp"

namespace mtgai {

void ArmStatistics::record(std::span<const double> z) {
    if (z.size() != sums_.size()) {
        throw DimensionError("record_observation: reward has " + std::to_string(z.size()) +
                             " components, expected " + std::to_string(sums_.size()));
    }
    for (std::size_t m = 0; m < z.size(); ++m) sums_[m] += z[m];
    ++pulls_;
}

MeanVector ArmStatistics::mean() const {
    if (pulls_ == 0) throw PreconditionError("empirical mean of an arm with zero pulls");
    MeanVector mu(sums_.size());
    const double n = static_cast<double>(pulls_);
    std::transform(sums_.begin(), sums_.end(), mu.begin(), [n](double s) { return s / n; });
    return mu;
}

double ArmStatistics::gap_estimate(std::span<const double> thresholds) const {
    if (pulls_ == 0) throw PreconditionError("gap estimate of an arm with zero pulls");
    if (thresholds.size() != sums_.size()) {
        throw DimensionError("gap estimate: thresholds length does not match objectives");
    }
    const double n = static_cast<double>(pulls_);
    double g = thresholds[0] - sums_[0] / n;
    for (std::size_t m = 1; m < sums_.size(); ++m) {
        g = std::max(g, thresholds[m] - sums_[m] / n);
    }
    return g;
}

ArmStatistics record_observation(ArmStatistics stats, std::span<const double> z) {
    stats.record(z);
    return stats;
}

GapEstimate estimate_gaps(std::span<const ArmStatistics> stats,
                          std::span<const double> thresholds) {
    GapEstimate out;
    out.g_hat.reserve(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        if (stats[i].pulls() == 0) {
            throw PreconditionError("estimate_gaps: arm " + std::to_string(i + 1) +
                                    " has not been pulled");
        }
        out.g_hat.push_back(stats[i].gap_estimate(thresholds));
    }
    return out;
}

GapEstimate estimate_gaps(std::span<const ArmStatistics> stats, const ProblemSpec& spec) {
    GapEstimate out = estimate_gaps(stats, spec.thresholds);
    const std::size_t k = stats.size();
    out.lower.resize(k);
    out.upper.resize(k);
    out.index.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ci = confidence_bounds(out.g_hat[i], stats[i].pulls(), spec);
        out.lower[i] = ci.lower;
        out.upper[i] = ci.upper;
        out.index[i] = ucb_index(out.g_hat[i], stats[i].pulls(), spec.num_arms,
                                 spec.num_objectives, spec.sigma);
    }
    return out;
}

}  // namespace mtgai
