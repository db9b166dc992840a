#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "mtgai/errors.hpp"
#include "mtgai/io.hpp"
#include "mtgai/report.hpp"

using namespace mtgai;

namespace {

CellStats cell(SelectionRule r, double delta, double epsilon, double mean, double error = 0.0) {
    return {r, delta, epsilon, 10, mean, mean / 10.0, error, 0};
}

std::string expect_parse_error(const std::string& csv) {
    std::istringstream is(csv);
    try {
        (void)read_records_csv(is, "records.csv");
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("number and output formatting") {
    CHECK(format_double(0.005) == "0.005");
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_double(35263.71) == "35263.71");
    CHECK(format_output({OutcomeKind::arm, 6, 11}) == "7");
    CHECK(format_output({OutcomeKind::bottom, 0, 11}) == "bot");
    CHECK(format_output({OutcomeKind::timeout, 0, 11}) == "timeout");
}

TEST_CASE("records CSV round trip") {
    const std::vector<RunRecord> recs{
        {SelectionRule::tucb, 0.05, 0.005, 0, 123456789012345ULL, {OutcomeKind::arm, 6, 31000}, true},
        {SelectionRule::apt, 0.005, 0.002, 1, 7, {OutcomeKind::bottom, 0, 50}, false},
        {SelectionRule::hdoc, 0.1, 0.0, 2, 8, {OutcomeKind::timeout, 0, 200000}, false},
    };
    std::ostringstream os;
    write_records_csv(os, recs);
    const std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "algorithm,delta,epsilon,rep,seed,stop_time,output,correct,timeout");
    CHECK(text.find("tucb,0.05,0.005,0,123456789012345,31000,7,1,0\n") != std::string::npos);
    CHECK(text.find("apt,0.005,0.002,1,7,50,bot,0,0\n") != std::string::npos);
    CHECK(text.find("hdoc,0.1,0,2,8,200000,timeout,0,1\n") != std::string::npos);

    std::istringstream is(text);
    CHECK(read_records_csv(is, "x.csv") == recs);
}

TEST_CASE("malformed records name the file and line") {
    const std::string header = "algorithm,delta,epsilon,rep,seed,stop_time,output,correct,timeout\n";
    const std::string ok = "tucb,0.05,0.005,0,1,100,3,1,0\n";
    CHECK(expect_parse_error("") .find("records.csv:1") != std::string::npos);
    CHECK(expect_parse_error("a,b\n" + ok).find("records.csv:1") != std::string::npos);
    CHECK(expect_parse_error(header + ok + "tucb,0.05\n").find("records.csv:3") !=
          std::string::npos);
    CHECK(expect_parse_error(header + ok + ok + "zzz,0.05,0.005,0,1,100,3,1,0\n")
              .find("records.csv:4") != std::string::npos);
    CHECK(expect_parse_error(header + "tucb,x,0.005,0,1,100,3,1,0\n").find("records.csv:2") !=
          std::string::npos);
    CHECK(expect_parse_error(header + "tucb,0.05,0.005,0,1,100,0,1,0\n").find("records.csv:2") !=
          std::string::npos);
    CHECK(expect_parse_error(header + "tucb,0.05,0.005,0,1,100,3,1,1\n").find("records.csv:2") !=
          std::string::npos);
}

TEST_CASE("summary JSON round trip") {
    const std::vector<CellStats> cells{cell(SelectionRule::tucb, 0.05, 0.005, 35263.5),
                                       cell(SelectionRule::apt, 0.05, 0.005, 61754.25, 12.5)};
    const auto doc = summary_json(cells, {"synthetic", 200000, 7});
    CHECK(doc["std_kind"] == "sample");
    CHECK(doc["environment"] == "synthetic");
    CHECK(doc["cells"].size() == 2);
    CHECK(doc["cells"][0]["key"] == "tucb/delta=0.05/epsilon=0.005");

    const auto back = cells_from_summary(doc.dump(2), "summary.json");
    REQUIRE(back.size() == 2);
    CHECK(back[1].algorithm == SelectionRule::apt);
    CHECK(back[1].mean_stop_time == 61754.25);
    CHECK(back[1].error_rate == 12.5);
    CHECK(back[0].std_stop_time == cells[0].std_stop_time);
}

TEST_CASE("malformed summaries name the file and line") {
    try {
        (void)cells_from_summary("{\n  \"cells\": [\n    {,\n  ]\n}\n", "s.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("s.json:3") != std::string::npos);
    }
    CHECK_THROWS_AS(cells_from_summary("{\"x\": 1}", "s.json"), ParseError);
    CHECK_THROWS_AS(cells_from_summary("{\"cells\": [{\"algorithm\": \"tucb\"}]}", "s.json"),
                    ParseError);
}

TEST_CASE("trace CSV") {
    const std::vector<TraceRow> rows{{1, 0, 0.25, -0.5, 1.0, 3}, {2, 2, 0.5, 0.125, 0.875, 2}};
    std::ostringstream os;
    write_trace_csv(os, 4, rows, true);
    CHECK(os.str() ==
          "rep,round,arm,g_hat,lower,upper,active_size\n4,1,1,0.25,-0.5,1,3\n4,2,3,0.5,0.125,0.875,2\n");
}

TEST_CASE("report layout") {
    SUBCASE("single cell") {
        const std::vector<CellStats> one{cell(SelectionRule::tucb, 0.05, 0.005, 123.456)};
        const auto r = render_report(one);
        CHECK(r.rows == 1);
        CHECK(r.columns == 1);
        CHECK(r.table.find("123.46") != std::string::npos);
        CHECK(r.table.find('*') == std::string::npos);
    }
    SUBCASE("delta sweep") {
        std::vector<CellStats> cells;
        for (SelectionRule rule : {SelectionRule::tucb, SelectionRule::hdoc, SelectionRule::lucb,
                                   SelectionRule::apt}) {
            for (int j = 1; j <= 10; ++j) cells.push_back(cell(rule, 0.005 * j, 0.005, 1000.0 * j));
        }
        const auto r = render_report(cells);
        CHECK(r.grid_name == "delta");
        CHECK(r.rows == 10);
        CHECK(r.columns == 4);
        CHECK(r.table.substr(0, r.table.find('\n')).find("apt") <
              r.table.substr(0, r.table.find('\n')).find("tucb"));
        std::size_t tidy_lines = 0;
        for (char ch : r.tidy_csv) tidy_lines += ch == '\n';
        CHECK(tidy_lines == 41);
        CHECK(r.tidy_csv.rfind("grid_value,algorithm,mean,std,error_rate\n", 0) == 0);
    }
    SUBCASE("epsilon sweep and mixed grids") {
        const std::vector<CellStats> eps{cell(SelectionRule::tucb, 0.005, 0.002, 10),
                                         cell(SelectionRule::tucb, 0.005, 0.004, 20)};
        CHECK(render_report(eps).grid_name == "epsilon");
        const std::vector<CellStats> mixed{cell(SelectionRule::tucb, 0.005, 0.002, 10),
                                           cell(SelectionRule::tucb, 0.01, 0.004, 20)};
        const auto r = render_report(mixed);
        CHECK(r.grid_name == "delta/epsilon");
        CHECK(r.rows == 2);
    }
    SUBCASE("high error rates are annotated, not dropped") {
        const std::vector<CellStats> cells{cell(SelectionRule::apt, 0.05, 0.005, 500.0, 60.0),
                                           cell(SelectionRule::tucb, 0.05, 0.005, 400.0, 50.0)};
        const auto r = render_report(cells, {true, true});
        CHECK(r.table.find("500.00 +/- 50.00 (60.00%)*") != std::string::npos);
        CHECK(r.table.find("400.00 +/- 40.00 (50.00%)") != std::string::npos);
        CHECK(r.table.find("(50.00%)*") == std::string::npos);
        CHECK(r.table.find("* error rate above 50.00%") != std::string::npos);
        CHECK(r.tidy_csv.find("0.05,apt,500,50,60\n") != std::string::npos);
    }
    CHECK_THROWS_AS(render_report(std::vector<CellStats>{}), PreconditionError);
}
