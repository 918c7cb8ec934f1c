// Copyright 2026 The jointbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the built `jointbell` binary as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jointbell/counts.hpp"
#include "jointbell/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string output;  // stdout and stderr interleaved
};

Run run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + JOINTBELL_CLI + std::string(" ") + args + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, "popen failed"};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("jointbell_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

jointbell::Json json_of(const Run &r) { return jointbell::Json::parse(r.output); }

TEST_F(CliTest, SimulateSingletAt45) {
    const auto r = run("simulate --state singlet --theta-a 45 --theta-b 45");
    ASSERT_EQ(r.status, 0) << r.output;
    const auto j = json_of(r);
    EXPECT_NEAR(j["aggregate"]["p_plus"].get<double>(), 0.146447, 5e-7);
    EXPECT_NEAR(j["aggregate"]["mean_b"].get<double>(), -std::sqrt(2.0), 1e-9);
}

TEST_F(CliTest, SimulateMaximallyMixedIsUniform) {
    const auto r = run("simulate --state werner:0 --theta-a 30 --theta-b 60");
    ASSERT_EQ(r.status, 0) << r.output;
    for (const auto &row : json_of(r)["outcomes"]) EXPECT_NEAR(row["probability"].get<double>(), 1.0 / 16.0, 1e-15);
}

TEST_F(CliTest, SimulateWernerMatchesMeasuredAggregate) {
    const auto r = run("simulate --state werner:0.975 --theta-a 45 --theta-b 45");
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_NEAR(json_of(r)["aggregate"]["p_plus"].get<double>(), 0.1554, 5e-4);
}

TEST_F(CliTest, SimulateCsvFormat) {
    const auto r = run("simulate --format csv");
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(r.output.rfind("x_a,y_a,x_b,y_b,b,probability,p_bflip\n", 0), 0u);
    EXPECT_NE(r.output.find("# mean_b="), std::string::npos);
    EXPECT_NE(run("simulate --format xml").status, 0);
}

TEST_F(CliTest, BadStateSpecs) {
    auto r = run("simulate --state bogus");
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("bad state spec"), std::string::npos) << r.output;
    EXPECT_NE(run("simulate --state werner:1.2").status, 0);
    std::ofstream(path("rho.txt")) << "1 0 0 0\n0 1 0 0\n0 0 0 0\n0 0 0 0\n";
    r = run("simulate --state " + path("rho.txt"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("trace"), std::string::npos) << r.output;
    std::ofstream(path("short.txt")) << "1 0 0 0\n";
    EXPECT_NE(run("simulate --state " + path("short.txt")).status, 0);
}

TEST_F(CliTest, CountsDeterministicPerSeed) {
    const std::string args = "counts --state werner:0.975 --theta-a 20 --theta-b 20 --mean-total 568352 --seed 42 --out ";
    ASSERT_EQ(run(args + path("a.csv")).status, 0);
    ASSERT_EQ(run(args + path("b.csv")).status, 0);
    const auto a = slurp(path("a.csv"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("b.csv")));
    const auto t = jointbell::count_table_from_string(a);
    // About 0.18% of 568352 for the x-biased minimal outcome at 20 degrees.
    EXPECT_NEAR(static_cast<double>(t[jointbell::Outcome::from_ints(1, 1, 1, -1)]), 1043.0, 5.0 * std::sqrt(1043.0));
    ASSERT_EQ(run("counts --mean-total 568352 --seed 43 --out " + path("c.csv")).status, 0);
    EXPECT_NE(a, slurp(path("c.csv")));
}

TEST_F(CliTest, CountsRejectsBadTotals) {
    EXPECT_NE(run("counts --mean-total 0").status, 0);
    EXPECT_NE(run("counts --mean-total -3").status, 0);
    EXPECT_NE(run("counts").status, 0);
    EXPECT_NE(run("counts --mean-total 100 --seed -1").status, 0);
}

TEST_F(CliTest, CountsThenAnalyzeRoundTrip) {
    ASSERT_EQ(run("counts --state werner:0.9 --theta-a 30 --theta-b 60 --mean-total 200000 --seed 7 --duration 10 --out " +
                  path("c.csv"))
                  .status,
              0);
    const auto r = run("analyze --count-file " + path("c.csv") + " --theta-a 30 --theta-b 60");
    ASSERT_EQ(r.status, 0) << r.output;
    const auto j = json_of(r);
    EXPECT_EQ(j["duration_s"].get<double>(), 10.0);
    const auto exact = json_of(run("simulate --state werner:0.9 --theta-a 30 --theta-b 60"));
    for (std::size_t i = 0; i < 16; ++i) {
        const double p = exact["outcomes"][i]["probability"].get<double>();
        const double est = j["outcomes"][i]["probability"].get<double>();
        EXPECT_LT(std::abs(est - p), 5.0 * j["outcomes"][i]["std_err"].get<double>()) << i;
    }
    EXPECT_TRUE(j["aggregate"].contains("mean_b_std_err"));
}

TEST_F(CliTest, AnalyzePublishedFixture) {
    std::ofstream f(path("fixture.csv"));
    f << "x_a,y_a,x_b,y_b,counts\n";
    for (const auto &m : jointbell::all_outcomes()) {
        std::uint64_t c = 0;
        if (m == jointbell::Outcome::from_ints(1, 1, 1, -1)) c = 745;
        if (m == jointbell::Outcome::from_ints(-1, 1, 1, 1)) c = 878;
        if (m == jointbell::Outcome::from_ints(1, 1, -1, 1)) c = 568352 - 745 - 878;
        f << jointbell::signed_one(m.xa) << ',' << jointbell::signed_one(m.ya) << ',' << jointbell::signed_one(m.xb)
          << ',' << jointbell::signed_one(m.yb) << ',' << c << '\n';
    }
    f.close();
    const auto r = run("analyze " + path("fixture.csv") + " --theta-a 20 --theta-b 20");
    ASSERT_EQ(r.status, 0) << r.output;
    const auto j = json_of(r);
    EXPECT_NEAR(j["outcomes"][1]["probability"].get<double>(), 0.001311, 5e-7);
    EXPECT_NEAR(j["outcomes"][8]["probability"].get<double>(), 0.001545, 5e-7);
}

TEST_F(CliTest, AnalyzeNamesMissingAndDuplicateRows) {
    ASSERT_EQ(run("counts --mean-total 1000 --out " + path("c.csv")).status, 0);
    std::string text = slurp(path("c.csv"));
    const std::string row = "-1,+1,-1,-1,";
    const auto pos = text.find(row);
    std::string missing = text;
    missing.erase(pos, missing.find('\n', pos) - pos + 1);
    std::ofstream(path("missing.csv")) << missing;
    auto r = run("analyze --count-file " + path("missing.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("(-,+;-,-)"), std::string::npos) << r.output;

    std::ofstream(path("dup.csv")) << text << "+1,+1,+1,+1,3\n";
    r = run("analyze --count-file " + path("dup.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("line 18"), std::string::npos) << r.output;

    std::string bad = text;
    bad.replace(bad.find("+1,+1,+1,+1,"), 12, "+1,+1,+2,+1,");
    std::ofstream(path("bad.csv")) << bad;
    r = run("analyze --count-file " + path("bad.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("line 2"), std::string::npos) << r.output;
    EXPECT_NE(run("analyze --count-file " + path("absent.csv")).status, 0);
}

TEST_F(CliTest, SweepAndFitNoiseless) {
    ASSERT_EQ(run("sweep --state werner:0.9716 --thetas 0,10,20,30,40,50,60,70,80,90 --out " + path("s.csv")).status, 0);
    const auto r = run("fit --sweep-file " + path("s.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto res = json_of(r)["result"];
    EXPECT_NEAR(res["bell_magnitude"].get<double>(), 2.748, 1e-3);
    EXPECT_NEAR(res["cirelson_ratio"].get<double>(), 0.9716, 1e-3);
    EXPECT_EQ(res["points"], 40);

    ASSERT_EQ(run("sweep --thetas 0,10,20,30,40,50,60,70,80,90 --out " + path("singlet.csv")).status, 0);
    const auto s = json_of(run("fit " + path("singlet.csv")));
    EXPECT_NEAR(s["result"]["bell_magnitude"].get<double>(), 2.0 * std::sqrt(2.0), 1e-9);
}

TEST_F(CliTest, SweepAndFitSampled) {
    ASSERT_EQ(run("sweep --state werner:0.9716 --thetas 0,10,20,30,40,50,60,70,80,90 --mean-total 550000 --seed 11 --out " +
                  path("s.csv"))
                  .status,
              0);
    const auto r = run("fit --weighting weighted --sweep-file " + path("s.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto res = json_of(r)["result"];
    EXPECT_TRUE(res["weighted"].get<bool>());
    EXPECT_LT(std::abs(res["bell_magnitude"].get<double>() - 0.9716 * 2.0 * std::sqrt(2.0)),
              3.0 * res["bell_magnitude_std_err"].get<double>());
    // The JSON document feeds back into fit.
    std::ofstream(path("fit.json")) << r.output;
    const auto again = json_of(run("fit --sweep-file " + path("fit.json")));
    EXPECT_EQ(again["result"]["slope"], res["slope"]);
}

TEST_F(CliTest, SweepAndFitErrors) {
    EXPECT_NE(run("sweep").status, 0);
    EXPECT_NE(run("sweep --thetas ,").status, 0);
    EXPECT_NE(run("sweep --thetas 0,abc").status, 0);
    // Every minimal outcome has p_bflip = 1/4 at 45 degrees: no spread in x.
    ASSERT_EQ(run("sweep --thetas 45 --out " + path("flat.csv")).status, 0);
    const auto r = run("fit --sweep-file " + path("flat.csv"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("distinct"), std::string::npos) << r.output;
    EXPECT_NE(run("fit --weighting sometimes --sweep-file " + path("flat.csv")).status, 0);
    EXPECT_NE(run("fit").status, 0);
}

TEST_F(CliTest, FiguresCsvAndSvg) {
    auto r = run("figures --figure 6");
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(r.output.rfind("theta_a,theta_b", 0), 0u);
    EXPECT_NE(run("figures --figure 5").status, 0);
    EXPECT_NE(run("figures --figure 9 --format png").status, 0);
    if (std::string(JOINTBELL_PYTHON).empty()) GTEST_SKIP() << "python3 not found";
    for (int id : {6, 7, 8, 9}) {
        const std::string out = path("fig" + std::to_string(id) + ".svg");
        ASSERT_EQ(run("figures --figure " + std::to_string(id) + " --format svg --mean-total 1e5 --seed 4 --out " + out).status, 0);
        const std::string check = std::string(JOINTBELL_PYTHON) +
                                  " -c \"import sys, xml.dom.minidom as m; m.parse(sys.argv[1])\" " + out + " 2>&1";
        EXPECT_EQ(std::system(check.c_str()), 0) << "malformed svg for figure " << id;
    }
}

TEST_F(CliTest, ValidateExitsZero) {
    const auto r = run("validate");
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("all suites passed"), std::string::npos);
    EXPECT_EQ(r.output.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
    std::ofstream(path("run.cfg")) << "# run\nstate = werner:0\ntheta_a = 30\ntheta_b = 60\nformat = csv\n";
    auto r = run("simulate --config " + path("run.cfg"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(r.output.rfind("x_a,", 0), 0u);
    r = run("simulate --config " + path("run.cfg") + " --state singlet --theta-a 45 --theta-b 45 --format json");
    ASSERT_EQ(r.status, 0) << r.output;
    const auto j = json_of(r);
    EXPECT_EQ(j["state"], "singlet");
    EXPECT_EQ(j["theta_a"], 45.0);
    std::ofstream(path("bad.cfg")) << "colour = red\n";
    r = run("simulate --config " + path("bad.cfg"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.output.find("line 1"), std::string::npos) << r.output;
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
    const auto r = run("simulate --state singlet", "JOINTBELL_OUT_DIR=" + path("outdir"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_TRUE(fs::exists(dir_ / "outdir" / "simulate.json"));
    // An explicit --out wins over the environment.
    ASSERT_EQ(run("counts --mean-total 10 --out " + path("here.csv"), "JOINTBELL_OUT_DIR=" + path("outdir")).status, 0);
    EXPECT_TRUE(fs::exists(dir_ / "here.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "outdir" / "counts.csv"));
}

TEST_F(CliTest, ReportsAreByteIdentical) {
    const std::string args = "sweep --state werner:0.97 --thetas 0,45,90 --mean-total 1e5 --seed 8";
    EXPECT_EQ(run(args).output, run(args).output);
    EXPECT_EQ(run("simulate --theta-a 12 --theta-b 34").output, run("simulate --theta-a 12 --theta-b 34").output);
}

}  // namespace
