#include "mtgai/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "mtgai/errors.hpp"

namespace mtgai {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_output(const RunOutcome& outcome) {
    switch (outcome.kind) {
        case OutcomeKind::arm: return std::to_string(outcome.arm + 1);
        case OutcomeKind::bottom: return "bot";
        case OutcomeKind::timeout: return "timeout";
    }
    return "?";
}

void write_records_csv(std::ostream& os, std::span<const RunRecord> records) {
    os << "algorithm,delta,epsilon,rep,seed,stop_time,output,correct,timeout\n";
    for (const auto& r : records) {
        os << to_string(r.algorithm) << ',' << format_double(r.delta) << ','
           << format_double(r.epsilon) << ',' << r.rep << ',' << r.seed << ','
           << r.outcome.stop_time << ',' << format_output(r.outcome) << ','
           << (r.correct ? 1 : 0) << ',' << (r.timeout() ? 1 : 0) << '\n';
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::vector<RunRecord> read_records_csv(std::istream& is, std::string_view source) {
    static constexpr std::string_view kHeader =
        "algorithm,delta,epsilon,rep,seed,stop_time,output,correct,timeout";
    auto fail = [&](std::size_t line, const std::string& what) -> ParseError {
        return ParseError(std::string(source) + ":" + std::to_string(line) + ": " + what);
    };

    std::vector<RunRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != kHeader) throw fail(lineno, "unexpected header, expected " + std::string(kHeader));
            continue;
        }
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw fail(lineno, "expected 9 fields, got " + std::to_string(f.size()));

        RunRecord r{};
        const auto rule = parse_rule(f[0]);
        if (!rule) throw fail(lineno, "unknown algorithm '" + std::string(f[0]) + "'");
        r.algorithm = *rule;
        int correct = 0;
        int timeout = 0;
        if (!parse_number(f[1], r.delta) || !parse_number(f[2], r.epsilon) ||
            !parse_number(f[3], r.rep) || !parse_number(f[4], r.seed) ||
            !parse_number(f[5], r.outcome.stop_time) || !parse_number(f[7], correct) ||
            !parse_number(f[8], timeout)) {
            throw fail(lineno, "malformed numeric field");
        }
        if (f[6] == "bot") {
            r.outcome.kind = OutcomeKind::bottom;
        } else if (f[6] == "timeout") {
            r.outcome.kind = OutcomeKind::timeout;
        } else {
            std::size_t arm = 0;
            if (!parse_number(f[6], arm) || arm == 0) throw fail(lineno, "malformed output field");
            r.outcome.kind = OutcomeKind::arm;
            r.outcome.arm = arm - 1;
        }
        if ((timeout == 1) != (r.outcome.kind == OutcomeKind::timeout)) {
            throw fail(lineno, "timeout flag disagrees with output");
        }
        r.correct = correct == 1;
        records.push_back(r);
    }
    if (lineno == 0) throw fail(1, "empty file");
    return records;
}

json summary_json(std::span<const CellStats> cells, const SummaryMeta& meta) {
    json doc;
    doc["environment"] = meta.environment;
    doc["max_pulls"] = meta.max_pulls;
    doc["seed"] = meta.seed;
    doc["std_kind"] = kStdKind;
    json arr = json::array();
    for (const auto& c : cells) {
        arr.push_back({
            {"key", std::string(to_string(c.algorithm)) + "/delta=" + format_double(c.delta) +
                        "/epsilon=" + format_double(c.epsilon)},
            {"algorithm", to_string(c.algorithm)},
            {"delta", c.delta},
            {"epsilon", c.epsilon},
            {"repetitions", c.repetitions},
            {"mean_stop_time", c.mean_stop_time},
            {"std_stop_time", c.std_stop_time},
            {"error_rate", c.error_rate},
            {"timeouts", c.timeouts},
        });
    }
    doc["cells"] = std::move(arr);
    return doc;
}

std::vector<CellStats> cells_from_summary(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number.
        const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + offset, '\n');
        throw ParseError(std::string(source) + ":" + std::to_string(line) + ": malformed JSON");
    }
    if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
        throw ParseError(std::string(source) + ":1: summary must contain a \"cells\" array");
    }
    std::vector<CellStats> out;
    for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
        const auto& c = doc["cells"][i];
        try {
            const auto rule = parse_rule(c.at("algorithm").get<std::string>());
            if (!rule) throw ParseError("unknown algorithm");
            out.push_back({*rule, c.at("delta").get<double>(), c.at("epsilon").get<double>(),
                           c.at("repetitions").get<std::uint64_t>(),
                           c.at("mean_stop_time").get<double>(), c.at("std_stop_time").get<double>(),
                           c.at("error_rate").get<double>(), c.value("timeouts", std::uint64_t{0})});
        } catch (const std::exception& e) {
            throw ParseError(std::string(source) + ": cell " + std::to_string(i + 1) +
                             " is malformed: " + e.what());
        }
    }
    return out;
}

void write_trace_csv(std::ostream& os, std::uint64_t rep, std::span<const TraceRow> rows,
                     bool header) {
    if (header) os << "rep,round,arm,g_hat,lower,upper,active_size\n";
    for (const auto& r : rows) {
        os << rep << ',' << r.round << ',' << r.arm + 1 << ',' << format_double(r.g_hat) << ','
           << format_double(r.lower) << ',' << format_double(r.upper) << ',' << r.active_size
           << '\n';
    }
}

}  // namespace mtgai
