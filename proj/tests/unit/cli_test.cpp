#include "empathic_cli.hpp"
#include "fixtures/worked.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string fixed_time() { return "2024-05-21T00:00:00Z"; }

class Cli {
public:
    explicit Cli(fs::path dir) : dir_(std::move(dir)) {}

    Result operator()(std::vector<std::string> args) const {
        args.insert(args.begin(), {"--session", dir_.string()});
        std::ostringstream out, err;
        const int code = empathic::cli::run(args, out, err, fixed_time);
        return {code, out.str(), err.str()};
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
};

std::string write_matrix(const fs::path& dir, const std::string& name, const worked::Rows& rows) {
    const fs::path p = dir / (name + ".json");
    std::ofstream(p) << json({{"rows", rows}}).dump();
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// Worked example through relations and selection; returns concatenated stdout.
std::string scripted_run(const Cli& cli) {
    std::string all;
    auto step = [&](std::vector<std::string> args, int expected) {
        const auto r = cli(args);
        EXPECT_EQ(r.code, expected) << args[0] << ": " << r.err;
        all += r.out;
        return r;
    };
    step({"init", "--input", testutil::data_file("worked_session.json")}, 0);
    step({"check"}, 0);
    step({"relations"}, 0);
    step({"select", "--target", "sparse"}, 0);
    step({"select", "--target", "central"}, 0);
    step({"select", "--target", "bus"}, 0);
    step({"welfare"}, 0);
    step({"export", "--format", "dot", "--network", "sparse"}, 0);
    return all;
}

}  // namespace

TEST(Cli, WorkedExampleScript) {
    testutil::TempDir tmp;
    const Cli cli(tmp.path() / "worked");
    scripted_run(cli);
    const auto rel = slurp(tmp.path() / "worked" / "exports" / "relations.csv");
    EXPECT_NE(rel.find("1,2,PossibleOnly,0.1840,0.1840\n"), std::string::npos);
    EXPECT_NE(rel.find("2,3,Necessary,infeasible,0.1840\n"), std::string::npos);
    const auto sparse = json::parse(slurp(tmp.path() / "worked" / "exports" / "network_sparse.json"));
    EXPECT_NEAR(sparse["objective"].get<double>(), 11.0, 1e-9);
    int arcs = 0;
    const auto& rows = sparse["w"]["rows"];
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (i != j && rows[i][j].get<double>() > 0) ++arcs;
    EXPECT_EQ(arcs, 1);
    EXPECT_TRUE(sparse["diagnostics"]["is_irreducible"].is_boolean());
    const auto dot = cli({"export", "--format", "dot", "--network", "sparse"});
    EXPECT_NE(dot.out.find("d2 -> d3"), std::string::npos) << dot.out;
}

TEST(Cli, OutputIsByteStableAcrossRuns) {
    testutil::TempDir a, b;
    const Cli ca(a.path() / "s"), cb(b.path() / "s");
    std::string out_a = scripted_run(ca), out_b = scripted_run(cb);
    // Paths in stdout differ only through the export file names, which are relative.
    EXPECT_EQ(out_a, out_b);
    EXPECT_EQ(slurp(a.path() / "s" / "session.json"), slurp(b.path() / "s" / "session.json"));
    EXPECT_EQ(slurp(a.path() / "s" / "events.ndjson"), slurp(b.path() / "s" / "events.ndjson"));
}

TEST(Cli, ImportedPrintedNetworksReproduceWelfareTable) {
    testutil::TempDir tmp;
    const Cli cli(tmp.path() / "t");
    ASSERT_EQ(cli({"init", "--input", testutil::data_file("worked_session.json")}).code, 0);
    const std::vector<std::pair<std::string, const worked::Rows*>> nets = {
        {"most-discriminating", &worked::w1()}, {"sparse", &worked::w2()},      {"central", &worked::w3()},
        {"distributed", &worked::w4()},         {"resilient-local", &worked::w5()}, {"resilient-global", &worked::w6()},
        {"bus", &worked::w7()}};
    std::string labels;
    for (const auto& [label, rows] : nets) {
        std::vector<std::string> args = {"import-network", "--label", label, "--input", write_matrix(tmp.path(), label, *rows)};
        if (label == "resilient-global") args.push_back("--global");
        const auto r = cli(args);
        ASSERT_EQ(r.code, 0) << r.err;
        labels += (labels.empty() ? "" : ",") + label;
    }
    const auto r = cli({"welfare", "--networks", labels});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = parse_csv(r.out);
    ASSERT_EQ(csv.size(), 9u);
    const std::vector<std::string> table_labels = {"without network", "most discriminating", "sparse", "central",
                                                   "distributed", "resilient local", "resilient global", "bus"};
    for (std::size_t k = 1; k < csv.size(); ++k) {
        const auto& want = *std::find_if(worked::welfare_table().begin(), worked::welfare_table().end(),
                                         [&](const auto& l) { return l.label == table_labels[k - 1]; });
        ASSERT_EQ(csv[k].size(), 7u);
        for (int s = 0; s < 5; ++s) EXPECT_NEAR(std::stod(csv[k][s + 1]), want.sw[s], 1e-3) << csv[k][0];
        EXPECT_EQ(csv[k][6], "a" + std::to_string(want.best + 1)) << csv[k][0];
    }
}

TEST(Cli, ExitCodes) {
    testutil::TempDir tmp;
    const Cli cli(tmp.path() / "x");
    EXPECT_EQ(cli({"check"}).code, 2);  // no session yet
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    ASSERT_EQ(cli({"init", "--input", testutil::data_file("worked_session.json")}).code, 0);
    EXPECT_EQ(cli({"init", "--input", testutil::data_file("worked_session.json")}).code, 2);
    EXPECT_EQ(cli({"init", "--input", testutil::data_file("worked_session.json"), "--force"}).code, 0);
    EXPECT_EQ(cli({"relations"}).code, 2);  // feasibility not established
    EXPECT_EQ(cli({"check"}).code, 0);
    const auto star = cli({"select", "--target", "star", "--center", "2"});
    EXPECT_EQ(star.code, 1);
    EXPECT_NE(star.err.find(" e ("), std::string::npos) << star.err;
    EXPECT_EQ(cli({"select", "--target", "nope"}).code, 2);
    EXPECT_EQ(cli({"export", "--format", "csv"}).code, 2);  // no welfare yet

    const fs::path stmts = tmp.path() / "clash.json";
    std::ofstream(stmts) << R"([{"id": "z", "kind": "zero-weight", "i": 2, "j": 3}])";
    EXPECT_EQ(cli({"add-statements", "--input", stmts.string()}).code, 0);
    const auto inc = cli({"check"});
    EXPECT_EQ(inc.code, 1);
    EXPECT_TRUE(fs::exists(tmp.path() / "x" / "exports" / "inconsistencies.json"));
    EXPECT_EQ(cli({"resolve", "--set", "9"}).code, 2);
    EXPECT_EQ(cli({"resolve", "--set", "1"}).code, 0);
    EXPECT_EQ(cli({"relations"}).code, 0);
}

TEST(Cli, JudgmentPipeline) {
    testutil::TempDir tmp;
    const Cli cli(tmp.path() / "j");
    ASSERT_EQ(cli({"init", "--input", testutil::data_file("worked_judgments.json")}).code, 0);
    EXPECT_EQ(cli({"check"}).code, 2);
    const auto c = cli({"complete-judgments"});
    EXPECT_EQ(c.code, 0) << c.err;
    EXPECT_NE(c.out.find("d1: completed"), std::string::npos) << c.out;
    EXPECT_TRUE(fs::exists(tmp.path() / "j" / "exports" / "completion_d10.csv"));
    const auto u = cli({"intrinsic"});
    EXPECT_EQ(u.code, 0) << u.err;
    EXPECT_TRUE(fs::exists(tmp.path() / "j" / "exports" / "intrinsic.csv"));
    EXPECT_EQ(cli({"intrinsic"}).code, 2);
}
