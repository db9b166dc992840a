#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mtgai/core.hpp"

namespace mtgai {

// Pull count and running per-objective reward sums for one arm. Sums rather
// than means are stored so that replaying an observation sequence reproduces
// every estimate bit for bit.
class ArmStatistics {
public:
    explicit ArmStatistics(std::size_t num_objectives = 1) : sums_(num_objectives, 0.0) {}

    // Throws DimensionError when z.size() != num_objectives().
    void record(std::span<const double> z);

    std::uint64_t pulls() const { return pulls_; }
    std::size_t num_objectives() const { return sums_.size(); }
    std::span<const double> sums() const { return sums_; }

    // Empirical mean; PreconditionError if the arm has never been pulled.
    MeanVector mean() const;

    // gap(mean(), thresholds) without materialising the mean vector.
    double gap_estimate(std::span<const double> thresholds) const;

    bool operator==(const ArmStatistics&) const = default;

private:
    std::uint64_t pulls_ = 0;
    std::vector<double> sums_;
};

// Value-style update: returns `stats` with z recorded.
ArmStatistics record_observation(ArmStatistics stats, std::span<const double> z);

// Per-arm gap estimates. `lower`, `upper` and `index` are filled only by the
// ProblemSpec overload of estimate_gaps.
struct GapEstimate {
    std::vector<double> g_hat;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> index;
};

// g_hat_i = gap(empirical mean of arm i, thresholds). Every arm needs >= 1 pull.
GapEstimate estimate_gaps(std::span<const ArmStatistics> stats,
                          std::span<const double> thresholds);

// Same, plus confidence values g_hat -/+ alpha and the optimistic index.
GapEstimate estimate_gaps(std::span<const ArmStatistics> stats, const ProblemSpec& spec);

}  // namespace mtgai
