#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dcone/cli.hpp"

namespace fs = std::filesystem;
using dcone::cli::run;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("dcone_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int call(std::vector<std::string> args) {
    args.insert(args.begin(), "dcone");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const std::string kHeader = "# dcone " + dcone::cli::version() + " config=";

void expect_header(const std::string& csv) {
  ASSERT_GE(csv.size(), kHeader.size() + 16);
  EXPECT_EQ(csv.substr(0, kHeader.size()), kHeader);
  const std::string hash = csv.substr(kHeader.size(), 16);
  EXPECT_EQ(hash.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(csv[kHeader.size() + 16], '\n');
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(mant(rng), ex(rng));
    EXPECT_EQ(std::strtod(dcone::cli::format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(dcone::cli::format_double(0.5), "0.5");
  EXPECT_EQ(dcone::cli::format_double(-2.0), "-2");
  EXPECT_EQ(dcone::cli::format_double(0.1), "0.1");
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

TEST(FormatDouble, IgnoresGlobalLocale) {
  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const std::string s = dcone::cli::format_double(1234.25);
  std::locale::global(old);
  EXPECT_EQ(s, "1234.25");
}

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(dcone::cli::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(dcone::cli::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(dcone::cli::fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(ParseList, ListsAndRanges) {
  EXPECT_EQ(dcone::cli::parse_list("0.2,0.1"), (std::vector<double>{0.2, 0.1}));
  EXPECT_EQ(dcone::cli::parse_list("7"), std::vector<double>{7.0});
  const std::vector<double> r = dcone::cli::parse_list("1:2:5");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[2], 1.5);
  EXPECT_DOUBLE_EQ(r[4], 2.0);
  for (const char* bad : {"", "1,,2", "x", "1:2:0", "1:2:2.5", "1,2,"}) {
    EXPECT_THROW(dcone::cli::parse_list(bad), dcone::Error) << bad;
  }
}

TEST(ExitCodes, Mapping) {
  using dcone::ErrorCode;
  EXPECT_EQ(dcone::cli::exit_code_for(ErrorCode::InvalidConfig), 2);
  EXPECT_EQ(dcone::cli::exit_code_for(ErrorCode::OddN), 2);
  EXPECT_EQ(dcone::cli::exit_code_for(ErrorCode::NoConvergence), 3);
  EXPECT_EQ(dcone::cli::exit_code_for(ErrorCode::NewtonStall), 3);
}

TEST_F(Cli, ValidationErrorsExitTwo) {
  EXPECT_EQ(call({"minimize", "--n", "255", "--out", path("r.json")}), 2);
  EXPECT_NE(err_.str().find("dcone:"), std::string::npos);
  EXPECT_EQ(call({"frobnicate"}), 2);
  EXPECT_EQ(call({}), 2);
  EXPECT_EQ(call({"folds", "--n", "abc"}), 2);
  EXPECT_EQ(call({"sweep", "--branch", "elliptic", "--out", path("s.csv")}), 2);
  EXPECT_EQ(call({"plot-g", "--alpha", "1", "--out", path("g.csv")}), 2);
  EXPECT_EQ(call({"minimize", "--config", path("missing.json")}), 2);
  EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(Cli, NonConvergenceExitsThree) {
  EXPECT_EQ(call({"minimize", "--n", "256", "--coarse-n", "256", "--max-outer", "1", "--max-newton", "1", "--preset",
                  "random", "--out", path("r.json")}),
            3);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, VersionAndHelp) {
  EXPECT_EQ(call({"--version"}), 0);
  EXPECT_EQ(out_.str(), dcone::cli::version() + "\n");
  EXPECT_EQ(call({"--help"}), 0);
  EXPECT_NE(out_.str().find("plot-g"), std::string::npos);
}

TEST_F(Cli, MinimizeWritesReportAndSamples) {
  ASSERT_EQ(call({"minimize", "--n", "256", "--out", path("report.json")}), 0) << err_.str();
  const json j = json::parse(slurp(path("report.json")));
  for (const char* key : {"w", "lambda", "k", "intervals", "energy", "residuals", "meta"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["w"].size(), 256u);
  EXPECT_EQ(j["meta"]["version"], dcone::cli::version());
  EXPECT_EQ(j["meta"]["command"], "minimize");

  const std::string csv = slurp(path("w.csv"));
  expect_header(csv);
  const auto ls = lines(csv);
  ASSERT_EQ(ls.size(), 2u + 256u);
  EXPECT_EQ(ls[1], "t,w");
  EXPECT_EQ(ls[2].substr(0, 2), "0,");
  EXPECT_EQ(csv.substr(kHeader.size(), 16), j["meta"]["config_hash"].get<std::string>());
}

TEST_F(Cli, OutputsAreByteIdentical) {
  const std::vector<std::string> a = {"minimize", "--n", "256", "--restarts", "2", "--preset", "random", "--seed", "4"};
  auto args = a;
  args.insert(args.end(), {"--out", path("a.json"), "--w-out", path("a.csv"), "--threads", "1"});
  ASSERT_EQ(call(args), 0) << err_.str();
  args = a;
  args.insert(args.end(), {"--out", path("b.json"), "--w-out", path("b.csv"), "--threads", "2"});
  ASSERT_EQ(call(args), 0) << err_.str();
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--out", path("g1.csv")}), 0);
  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--out", path("g2.csv")}), 0);
  EXPECT_EQ(slurp(path("g1.csv")), slurp(path("g2.csv")));
}

TEST_F(Cli, CsvUnaffectedByLocale) {
  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--out", path("c.csv")}), 0);
  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const int rc = call({"plot-g", "--alpha", "7", "--out", path("comma.csv")});
  std::locale::global(old);
  ASSERT_EQ(rc, 0);
  EXPECT_EQ(slurp(path("c.csv")), slurp(path("comma.csv")));
}

TEST_F(Cli, ConfigHashTracksConfig) {
  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--out", path("a.csv")}), 0);
  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--samples", "4000", "--out", path("b.csv")}), 0);
  EXPECT_NE(slurp(path("a.csv")).substr(0, kHeader.size() + 16), slurp(path("b.csv")).substr(0, kHeader.size() + 16));
}

TEST_F(Cli, ConfigFileWithOverrides) {
  {
    std::ofstream f(path("run.json"));
    f << json{{"command", "plot-g"}, {"alpha", 7}, {"samples", 500}, {"out", path("cfg.csv")}}.dump();
  }
  ASSERT_EQ(call({"--config", path("run.json")}), 0) << err_.str();
  EXPECT_EQ(lines(slurp(path("cfg.csv"))).size(), 2u + 500u);

  ASSERT_EQ(call({"plot-g", "--config", path("run.json"), "--samples", "300"}), 0) << err_.str();
  EXPECT_EQ(lines(slurp(path("cfg.csv"))).size(), 2u + 300u);

  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--samples", "300", "--out", path("flags.csv")}), 0);
  EXPECT_EQ(slurp(path("cfg.csv")), slurp(path("flags.csv")));

  {
    std::ofstream f(path("bad.json"));
    f << "{not json";
  }
  EXPECT_EQ(call({"plot-g", "--config", path("bad.json")}), 2);
  {
    std::ofstream f(path("nocmd.json"));
    f << json{{"alpha", 7}}.dump();
  }
  EXPECT_EQ(call({"--config", path("nocmd.json")}), 2);
}

TEST_F(Cli, PlotGTable) {
  for (const char* branch : {"trig", "hyperbolic"}) {
    ASSERT_EQ(call({"plot-g", "--alpha", "7", "--branch", branch, "--out", path("g.csv")}), 0);
    const auto ls = lines(slurp(path("g.csv")));
    ASSERT_EQ(ls[1], "z,g_value,is_pole");
    ASSERT_EQ(ls.size(), 2u + 2000u);
    double prev = 0.0;
    for (std::size_t i = 2; i < ls.size(); ++i) {
      const double z = std::stod(ls[i].substr(0, ls[i].find(',')));
      EXPECT_GT(z, prev);
      EXPECT_LE(z, M_PI + 1e-15);
      prev = z;
    }
  }
  ASSERT_EQ(call({"plot-g", "--alpha", "7", "--out", path("g.csv")}), 0);
  EXPECT_NE(out_.str().find("poles 6"), std::string::npos) << out_.str();
}

TEST_F(Cli, SweepFlagsExcludedAlpha) {
  ASSERT_EQ(call({"sweep", "--alpha", "1,7", "--k", "0", "--out", path("s.csv")}), 0) << err_.str();
  const std::string csv = slurp(path("s.csv"));
  expect_header(csv);
  const auto ls = lines(csv);
  EXPECT_EQ(ls[1], "alpha,k,branch,root_index,z,energy,feasible");
  EXPECT_EQ(ls[2], "1,0,trig,,,,alpha_excluded");
  int rows7 = 0;
  for (std::size_t i = 3; i < ls.size(); ++i)
    if (ls[i].rfind("7,0,trig,", 0) == 0) ++rows7;
  EXPECT_GE(rows7, 5);
}

TEST_F(Cli, FoldsReportsReferenceSolution) {
  ASSERT_EQ(call({"folds", "--n", "1024", "--out", path("f.json"), "--w-out", path("f.csv")}), 0) << err_.str();
  const json j = json::parse(slurp(path("f.json")));
  EXPECT_NEAR(j["opening_angle_deg"].get<double>(), 138.985, 1e-3);
  EXPECT_NEAR(j["lambda"].get<double>(), 13.4742924462, 1e-8);
  EXPECT_EQ(j["branch"], "trig");
  EXPECT_TRUE(j["feasible"].get<bool>());
  expect_header(slurp(path("f.csv")));
}

TEST_F(Cli, RecoverSmallTable) {
  ASSERT_EQ(call({"recover", "--h", "0.2,0.1", "--threads", "1", "--out", path("gamma.csv")}), 0)
      << err_.str();
  const std::string csv = slurp(path("gamma.csv"));
  expect_header(csv);
  const auto ls = lines(csv);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[1], "h,n,E_scaled,E0,rel_err,gap_pre_close,a_norm,det_jac,min_gz,speed_defect");
  EXPECT_EQ(ls[2].substr(0, 4), "0.2,");
  const json j = json::parse(slurp(path("gamma.json")));
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j.contains("slopes"));
  EXPECT_EQ(j["meta"]["command"], "recover");

  EXPECT_EQ(call({"recover", "--profile", "zigzag", "--out", path("x.csv")}), 2);
  EXPECT_EQ(call({"recover", "--h", "0", "--out", path("x.csv")}), 2);
}
