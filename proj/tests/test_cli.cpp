#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmfs/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gmfs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("GMFS_OUTPUT_DIR");
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    int run(std::vector<std::string> args) { return gmfs::cli::main(args); }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }
    static json report(const fs::path& d) { return json::parse(slurp(d / "report.json")); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DiagDefaultReportsClosedForm) {
    const fs::path out = dir_ / "diag";
    ASSERT_EQ(run({"diag", "-o", out.string()}), 0);
    const json r = report(out);
    EXPECT_NEAR(r["results"]["closed_form"]["g_pp"].get<double>(), 8.74126e-4, 1e-9);
    EXPECT_EQ(r["command"], "diag");
    EXPECT_EQ(r["seed"], 1);
    EXPECT_TRUE(fs::exists(out / "delta_g.csv"));
    EXPECT_EQ(slurp(out / "delta_a.csv").substr(0, 14), "row,col,value\n");
}

TEST_F(Cli, CoeffsAreByteIdentical) {
    const fs::path cfg = write_config("c.json", R"({"k": 2, "p": [5, 3], "weights": [{"monomial": 2}, "one"], "seed": 9})");
    ASSERT_EQ(run({"coeffs", "-c", cfg.string(), "-o", (dir_ / "a").string()}), 0);
    ASSERT_EQ(run({"coeffs", "-c", cfg.string(), "-o", (dir_ / "b").string()}), 0);
    for (const char* f : {"tensor.csv", "report.json"}) EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f));
    const std::string csv = slurp(dir_ / "a" / "tensor.csv");
    EXPECT_EQ(csv.substr(0, 12), "j1,j2,value\n");
    EXPECT_EQ(csv.substr(12, 4), "0,0,");
    // 6 x 4 entries plus the header.
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 25);
    const json r = report(dir_ / "a");
    EXPECT_EQ(r["config"]["seed"], 9);
    EXPECT_EQ(r["seed"], 9);
}

TEST_F(Cli, VerifyRejectsRectangularHighMultiplicity) {
    const fs::path cfg = write_config("v.json", R"({"k": 3, "p": [4, 5, 4], "index": [1, 2, 3]})");
    EXPECT_EQ(run({"verify", "-c", cfg.string(), "-o", (dir_ / "v").string()}), 2);
    EXPECT_FALSE(fs::exists(dir_ / "v" / "mse.csv"));
}

TEST_F(Cli, VerifyTableFormat) {
    const fs::path cfg = write_config(
        "v.json", R"({"k": 2, "index": [1, 2], "mc_samples": 50, "grid_N": 64, "verify": {"p_list": [1, 3]}})");
    ASSERT_EQ(run({"verify", "-c", cfg.string(), "-o", (dir_ / "v").string()}), 0);
    const std::string csv = slurp(dir_ / "v" / "mse.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,mse,parseval_bound,ci_halfwidth");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(Cli, StratonovichPreconditionAndOverride) {
    const fs::path cfg = write_config(
        "s.json", R"({"k": 4, "p": 2, "weights": [{"monomial": 1}, "one", "one", "one"], "index": [1, 1, 2, 2],
                     "expand": {"flavor": "stratonovich", "realizations": 3}})");
    EXPECT_EQ(run({"expand", "-c", cfg.string(), "-o", (dir_ / "s").string()}), 2);
    ASSERT_EQ(run({"expand", "-c", cfg.string(), "-o", (dir_ / "s").string(), "--allow-outside-guarantees"}), 0);
    EXPECT_FALSE(report(dir_ / "s")["results"]["outside_guarantees"].is_null());
    EXPECT_EQ(slurp(dir_ / "s" / "realizations.csv").substr(0, 23), "sample,table_seed,value");
}

TEST_F(Cli, ErrorCodes) {
    EXPECT_EQ(run({"tensor"}), 64);
    const fs::path bad = write_config("bad.json", "{\"k\": ");
    EXPECT_EQ(run({"coeffs", "-c", bad.string()}), 65);
    const fs::path unknown = write_config("u.json", R"({"multiplicity": 2})");
    EXPECT_EQ(run({"coeffs", "-c", unknown.string()}), 65);
    const fs::path typed = write_config("t.json", R"({"k": "two"})");
    EXPECT_EQ(run({"coeffs", "-c", typed.string()}), 65);
    EXPECT_EQ(run({"coeffs", "-c", (dir_ / "missing.json").string()}), 65);
    const fs::path blowup = write_config(
        "x.json", R"({"sde": {"model": "scalar_linear", "lambda": 1e200, "scheme": "euler", "steps": [4], "fine_steps": 8, "paths": 2}})");
    EXPECT_EQ(run({"sde", "-c", blowup.string(), "-o", (dir_ / "x").string()}), 3);
    const fs::path interval = write_config("i.json", R"({"interval": {"t": 1, "T": 1}})");
    EXPECT_EQ(run({"coeffs", "-c", interval.string(), "-o", (dir_ / "i").string()}), 2);
}

TEST_F(Cli, OutputDirectoryPrecedence) {
    const fs::path cfg = write_config("o.json", "{\"k\": 1, \"p\": 2, \"output\": \"" + (dir_ / "from_config").string() + "\"}");
    ASSERT_EQ(run({"coeffs", "-c", cfg.string()}), 0);
    EXPECT_TRUE(fs::exists(dir_ / "from_config" / "tensor.csv"));
    setenv("GMFS_OUTPUT_DIR", (dir_ / "from_env").string().c_str(), 1);
    ASSERT_EQ(run({"coeffs", "-c", cfg.string()}), 0);
    EXPECT_TRUE(fs::exists(dir_ / "from_env" / "tensor.csv"));
    ASSERT_EQ(run({"coeffs", "-c", cfg.string(), "--output", (dir_ / "from_flag").string()}), 0);
    EXPECT_TRUE(fs::exists(dir_ / "from_flag" / "tensor.csv"));
    unsetenv("GMFS_OUTPUT_DIR");
}

TEST_F(Cli, SdeSmallStudy) {
    const fs::path cfg = write_config(
        "sde.json", R"({"sde": {"steps": [4, 8], "fine_steps": 64, "paths": 10, "p": 4}})");
    ASSERT_EQ(run({"sde", "-c", cfg.string(), "-o", (dir_ / "sde").string()}), 0);
    EXPECT_EQ(slurp(dir_ / "sde" / "strong_order.csv").substr(0, 27), "steps,h,mean_error,std_erro");
}

TEST_F(Cli, ShippedExamplesValidate) {
    for (const char* name : {"coeffs", "expand", "verify", "diag", "sde"}) {
        const fs::path p = fs::path(GMFS_SOURCE_DIR) / "docs" / "examples" / (std::string(name) + ".json");
        const gmfs::cli::RunConfig cfg = gmfs::cli::load_config(p);
        EXPECT_NO_THROW(gmfs::cli::validate(name, cfg)) << name;
    }
}

TEST(CsvFormat, SeventeenDigits) {
    EXPECT_EQ(gmfs::cli::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(gmfs::cli::format_number(2.0), "2");
}
