#pragma once

#include <span>
#include <string>

#include "mtgai/harness.hpp"

namespace mtgai {

struct ReportOptions {
    bool show_std = false;
    bool show_error_rate = false;
};

// Cells whose error rate exceeds this many percent are marked, never dropped.
inline constexpr double kAnnotateErrorRate = 50.0;
inline constexpr const char* kAnnotationMarker = "*";

struct Report {
    std::string table;      // rows = grid values, columns = algorithms
    std::string tidy_csv;   // grid_value,algorithm,mean,std,error_rate
    std::string grid_name;  // "delta", "epsilon" or "delta/epsilon"
    std::size_t rows = 0;
    std::size_t columns = 0;
};

// The grid axis is delta when every cell shares one epsilon, epsilon when
// every cell shares one delta, and the (delta, epsilon) pair otherwise.
Report render_report(std::span<const CellStats> cells, const ReportOptions& options = {});

}  // namespace mtgai
