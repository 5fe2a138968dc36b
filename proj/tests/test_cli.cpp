#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isospec/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = isospec::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("isospec_cli_" + name);
}

}  // namespace

TEST(Cli, SpectrumEquilateral) {
    const Result r = run({"spectrum", "--shape", "equilateral", "--side", "1", "--bc", "dirichlet", "-n", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 7u);
    EXPECT_EQ(ls[0], "param,value,method,error");
    EXPECT_EQ(ls[1].substr(0, 16), "1,52.6378901391,");
    EXPECT_EQ(ls.back(), "# seed=42");
    const double v = std::stod(ls[1].substr(2));
    EXPECT_NEAR(v, 16 * std::numbers::pi * std::numbers::pi / 3, 1e-9);
}

TEST(Cli, NumbersHaveTwelveSignificantDigits) {
    const Result r = run({"sweep", "rectangle", "-n", "3", "--aspects", "1.3,7"});
    ASSERT_EQ(r.code, 0) << r.err;
    int cells = 0;
    for (const auto& l : lines(r.out)) {
        if (l.empty() || l[0] == '#' || l[0] == 'p') continue;
        std::istringstream row(l);
        std::string c;
        for (int col = 0; std::getline(row, c, ','); ++col) {
            if (col == 2) continue;  // method tag
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", std::stod(c));
            EXPECT_EQ(c, buf);
            ++cells;
        }
    }
    EXPECT_EQ(cells, 6);
}

TEST(Cli, TheoremOneEqualityReport) {
    const Result r = run({"verify", "theorem1", "--shape", "square", "--map", "2,0,0,1", "--bc", "dirichlet", "-n", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "verify theorem1");
    EXPECT_EQ(j["seed"], 42);
    ASSERT_EQ(j["reports"].size(), 1u);
    const auto& rep = j["reports"][0];
    EXPECT_TRUE(rep["holds"].get<bool>());
    EXPECT_LE(std::abs(rep["slack"].get<double>()), rep["tolerance"].get<double>());
    EXPECT_EQ(rep["inputs"]["bc"], "dirichlet");
}

TEST(Cli, RandomMapsRecordSeedAndRepeat) {
    const std::vector<std::string> args{"verify", "theorem1", "--shape", "equilateral", "--random", "3",
                                        "--seed", "9", "-n", "2"};
    const Result a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["reports"].size(), 6u);
    const Result c = run({"verify", "theorem1", "--shape", "equilateral", "--random", "3", "--seed", "10", "-n", "2"});
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, UnderResolvedBoundReportsViolation) {
    // two coarse levels without extrapolation: the error estimate does not
    // cover the discretization error and the report fails honestly
    const Result r = run({"verify", "theorem1", "--shape", "equilateral", "--map", "0.3,1.9,-1.2,0.4", "--bc",
                          "neumann", "-n", "3", "--max-refinement", "1", "--no-extrapolate"});
    EXPECT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(r.out);
    bool any_failed = false;
    for (const auto& rep : j["reports"]) any_failed |= !rep["holds"].get<bool>();
    EXPECT_TRUE(any_failed);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"spectrum", "--bogus"}).code, 2);
    EXPECT_EQ(run({"nonsense"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--shape", "pentagon"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--shape", "square", "-n", "0"}).code, 2);
    const Result r = run({"spectrum", "--bogus"});
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, PreconditionAndSolverErrorsExitTwo) {
    EXPECT_EQ(run({"verify", "theorem1", "--shape", "rectangle", "--l1", "2", "--l2", "1", "-n", "1"}).code, 2);
    EXPECT_EQ(run({"verify", "theorem1", "--shape", "square", "--map", "1,2,2,4", "-n", "1"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--shape", "triangle", "--lengths", "3,4,5", "--engine", "exact"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("spectrum"), std::string::npos);
}

TEST(Cli, ConfigFileWithOverrides) {
    const auto cfg = temp_file("config.txt");
    {
        std::ofstream f(cfg);
        f << "# manifest\nshape=rectangle\nl1=2\nl2=1\nbc=neumann\nn=3\n";
    }
    const Result a = run({"--config", cfg.string(), "spectrum"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(lines(a.out).size(), 5u);
    EXPECT_EQ(lines(a.out)[1].substr(0, 4), "1,0,");

    const Result b = run({"--config", cfg.string(), "spectrum", "--bc", "dirichlet", "-n", "1"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto lb = lines(b.out);
    ASSERT_EQ(lb.size(), 3u);
    EXPECT_NEAR(std::stod(lb[1].substr(2)), std::numbers::pi * std::numbers::pi * 1.25, 1e-9);
    std::filesystem::remove(cfg);

    EXPECT_EQ(run({"--config", "/nonexistent/isospec.cfg", "spectrum"}).code, 2);
}

TEST(Cli, OutputFile) {
    const auto path = temp_file("out.csv");
    const Result r = run({"-o", path.string(), "sweep", "disk-vs-square", "--n-max", "12"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto ls = lines(ss.str());
    EXPECT_EQ(ls[0], "param,value,method,error");
    EXPECT_EQ(ls[ls.size() - 3], "# square_larger=1,2,3,5,6,9,10,12");
    EXPECT_EQ(ls[ls.size() - 2], "# ties=");
    std::filesystem::remove(path);
}

TEST(Cli, SweepIsoscelesRows) {
    const Result r = run({"sweep", "isosceles", "--n", "1", "--from", "0.5", "--to", "1.5", "--steps", "2",
                          "--max-refinement", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[1].substr(0, 4), "0.5,");
    EXPECT_EQ(ls[2].substr(0, 2), "1,");
    EXPECT_EQ(ls[3].substr(0, 4), "1.5,");
}

TEST(Cli, KroegerAndMoments) {
    const Result k = run({"sweep", "kroeger", "--shape", "disk", "--n-max", "20"});
    ASSERT_EQ(k.code, 0) << k.err;
    EXPECT_NE(k.out.find("# bound_holds=true"), std::string::npos);

    const Result m = run({"moments", "--shape", "disk", "--radius", "2"});
    ASSERT_EQ(m.code, 0) << m.err;
    const auto j = nlohmann::json::parse(m.out);
    EXPECT_NEAR(j["area"].get<double>(), 4 * std::numbers::pi, 1e-12);
    EXPECT_EQ(j["symmetry_order"], 0);
}

TEST(Cli, QuadAndRobinAndSchrodinger) {
    EXPECT_EQ(run({"verify", "quad", "--c-plus", "0.3", "--c-minus", "-0.2", "-n", "2", "--max-refinement", "4"}).code,
              0);
    EXPECT_EQ(run({"verify", "robin", "--shape", "square", "--map", "2,0,0,1", "--sigma", "1", "-n", "3"}).code, 0);
    const Result s = run({"verify", "schrodinger", "--potential", "harmonic", "--map", "1,0,0,1", "-n", "2",
                          "--points", "51"});
    EXPECT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(run({"verify", "schrodinger", "--potential", "power", "--power", "3"}).code, 2);
}
