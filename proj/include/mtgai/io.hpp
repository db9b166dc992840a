#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtgai/harness.hpp"

namespace mtgai {

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// 1-based arm index, "bot" or "timeout".
std::string format_output(const RunOutcome& outcome);

// Header: algorithm,delta,epsilon,rep,seed,stop_time,output,correct,timeout
void write_records_csv(std::ostream& os, std::span<const RunRecord> records);

// Throws ParseError naming `source` and the offending line.
std::vector<RunRecord> read_records_csv(std::istream& is, std::string_view source);

struct SummaryMeta {
    std::string environment;
    std::uint64_t max_pulls = kDefaultMaxPulls;
    std::uint64_t seed = 0;
};

nlohmann::json summary_json(std::span<const CellStats> cells, const SummaryMeta& meta);

// Inverse of summary_json for the "cells" array; ParseError on bad input.
std::vector<CellStats> cells_from_summary(std::string_view text, std::string_view source);

void write_trace_csv(std::ostream& os, std::uint64_t rep, std::span<const TraceRow> rows,
                     bool header);

}  // namespace mtgai
