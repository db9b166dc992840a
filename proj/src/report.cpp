#include "mtgai/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "mtgai/errors.hpp"
#include "mtgai/io.hpp"

namespace mtgai {

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

Report render_report(std::span<const CellStats> cells, const ReportOptions& options) {
    if (cells.empty()) throw PreconditionError("render_report: no cells");

    auto same = [&](auto proj) {
        return std::all_of(cells.begin(), cells.end(),
                           [&](const CellStats& c) { return proj(c) == proj(cells.front()); });
    };
    const bool one_epsilon = same([](const CellStats& c) { return c.epsilon; });
    const bool one_delta = same([](const CellStats& c) { return c.delta; });

    Report rep;
    using RowKey = std::pair<double, double>;
    auto row_key = [&](const CellStats& c) -> RowKey {
        if (one_epsilon) return {c.delta, 0.0};
        if (one_delta) return {c.epsilon, 0.0};
        return {c.delta, c.epsilon};
    };
    auto row_label = [&](const RowKey& k) {
        if (one_epsilon || one_delta) return format_double(k.first);
        return format_double(k.first) + "/" + format_double(k.second);
    };
    rep.grid_name = one_epsilon ? "delta" : one_delta ? "epsilon" : "delta/epsilon";

    std::map<RowKey, std::map<SelectionRule, CellStats>> grid;
    std::vector<SelectionRule> present;
    for (const auto& c : cells) {
        grid[row_key(c)].insert_or_assign(c.algorithm, c);
        if (std::find(present.begin(), present.end(), c.algorithm) == present.end()) {
            present.push_back(c.algorithm);
        }
    }
    std::vector<SelectionRule> columns;
    for (SelectionRule r : kAllRules) {
        if (std::find(present.begin(), present.end(), r) != present.end()) columns.push_back(r);
    }

    std::vector<std::vector<std::string>> text;
    std::vector<std::string> head{rep.grid_name};
    for (SelectionRule r : columns) head.emplace_back(to_string(r));
    text.push_back(head);

    std::ostringstream tidy;
    tidy << "grid_value,algorithm,mean,std,error_rate\n";
    bool annotated = false;
    for (const auto& [key, by_rule] : grid) {
        std::vector<std::string> row{row_label(key)};
        for (SelectionRule r : columns) {
            const auto it = by_rule.find(r);
            if (it == by_rule.end()) {
                row.emplace_back("n/a");
                continue;
            }
            const CellStats& c = it->second;
            std::string cell = fixed2(c.mean_stop_time);
            if (options.show_std) cell += " +/- " + fixed2(c.std_stop_time);
            if (options.show_error_rate) cell += " (" + fixed2(c.error_rate) + "%)";
            if (c.error_rate > kAnnotateErrorRate) {
                cell += kAnnotationMarker;
                annotated = true;
            }
            row.push_back(cell);
            tidy << row_label(key) << ',' << to_string(r) << ',' << format_double(c.mean_stop_time)
                 << ',' << format_double(c.std_stop_time) << ',' << format_double(c.error_rate)
                 << '\n';
        }
        text.push_back(std::move(row));
    }

    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : text) {
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    }
    std::ostringstream table;
    for (std::size_t i = 0; i < text.size(); ++i) {
        for (std::size_t j = 0; j < text[i].size(); ++j) {
            if (j) table << " | ";
            table << text[i][j] << std::string(width[j] - text[i][j].size(), ' ');
        }
        table << '\n';
        if (i == 0) {
            for (std::size_t j = 0; j < width.size(); ++j) {
                if (j) table << "-+-";
                table << std::string(width[j], '-');
            }
            table << '\n';
        }
    }
    if (annotated) {
        table << kAnnotationMarker << " error rate above " << fixed2(kAnnotateErrorRate) << "%\n";
    }

    rep.table = table.str();
    rep.tidy_csv = tidy.str();
    rep.rows = grid.size();
    rep.columns = columns.size();
    return rep;
}

}  // namespace mtgai
