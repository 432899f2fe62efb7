#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.h"

namespace cnofs::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cnofs_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::Run(args, out, err);
    out_ = out.str();
    err_ = err.str();
    return code;
  }

  std::string Slurp(const std::string& name) const {
    std::ifstream in(Path(name), std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  void Spit(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name), std::ios::binary) << text;
  }

  void GenTriangle() {
    ASSERT_EQ(Cli({"gen", "--kind", "triangle", "--instance", Path("k3.inst"), "--witness",
                   Path("k3.wit")}),
              kOk)
        << err_;
  }

  fs::path dir_;
  std::string out_, err_;
};

TEST_F(CliTest, ProveVerifyRoundTrip) {
  ASSERT_EQ(Cli({"gen", "--kind", "coloring", "--vertices", "12", "--seed", "3", "--instance",
                 Path("g.inst"), "--witness", Path("g.wit")}),
            kOk)
      << err_;
  for (std::string scheme : {"cno", "merkle"}) {
    std::vector<std::string> common = {"--scheme", scheme, "--instance", Path("g.inst"),
                                       "--reps", "17", "--n", "64", "--allow-bias"};
    std::vector<std::string> prove = {"prove", "--witness", Path("g.wit"), "--out",
                                      Path(scheme + ".proof")};
    prove.insert(prove.end(), common.begin(), common.end());
    ASSERT_EQ(Cli(prove), kOk) << err_;
    std::vector<std::string> verify = {"verify", "--proof", Path(scheme + ".proof")};
    verify.insert(verify.end(), common.begin(), common.end());
    EXPECT_EQ(Cli(verify), kOk) << err_;
    EXPECT_EQ(out_, "accept\n");
  }
  // A Merkle proof is not an ordinary one.
  EXPECT_EQ(Cli({"verify", "--scheme", "cno", "--instance", Path("g.inst"), "--reps", "17",
                 "--n", "64", "--allow-bias", "--proof", Path("merkle.proof")}),
            kReject);
  EXPECT_EQ(out_, "reject\n");
}

TEST_F(CliTest, SameSeedSameBytes) {
  GenTriangle();
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(Cli({"prove", "--instance", Path("k3.inst"), "--witness", Path("k3.wit"),
                   "--reps", "80", "--seed", "42", "--out", Path(name)}),
              kOk)
        << err_;
  }
  EXPECT_EQ(Slurp("a"), Slurp("b"));
  ASSERT_EQ(Cli({"prove", "--instance", Path("k3.inst"), "--witness", Path("k3.wit"),
                 "--reps", "80", "--seed", "43", "--out", Path("c")}),
            kOk);
  EXPECT_NE(Slurp("a"), Slurp("c"));
}

TEST_F(CliTest, SignaturesOverDlog) {
  ASSERT_EQ(Cli({"gen", "--kind", "dlog", "--seed", "9", "--instance", Path("d.inst"),
                 "--witness", Path("d.wit")}),
            kOk);
  Spit("msg", "hello");
  Spit("other", "hellp");
  for (std::string scheme : {"unruh", "mppu"}) {
    ASSERT_EQ(Cli({"sign", "--scheme", scheme, "--instance", Path("d.inst"), "--witness",
                   Path("d.wit"), "--reps", "128", "--msg", Path("msg"), "--out",
                   Path("sig")}),
              kOk)
        << err_;
    EXPECT_EQ(Cli({"sig-verify", "--scheme", scheme, "--instance", Path("d.inst"), "--reps",
                   "128", "--msg", Path("msg"), "--proof", Path("sig")}),
              kOk);
    EXPECT_EQ(Cli({"sig-verify", "--scheme", scheme, "--instance", Path("d.inst"), "--reps",
                   "128", "--msg", Path("other"), "--proof", Path("sig")}),
              kReject);
  }
}

TEST_F(CliTest, ExitCodes) {
  GenTriangle();
  EXPECT_EQ(Cli({"--help"}), kOk);
  EXPECT_EQ(Cli({}), kUsage);
  EXPECT_EQ(Cli({"frobnicate"}), kUsage);
  EXPECT_EQ(Cli({"prove", "--instance", Path("k3.inst")}), kUsage);  // no --out
  EXPECT_EQ(Cli({"prove", "--scheme", "sha3", "--instance", Path("k3.inst"), "--witness",
                 Path("k3.wit"), "--out", Path("p")}),
            kUsage);
  EXPECT_EQ(Cli({"verify", "--instance", Path("missing"), "--proof", Path("p")}), kFile);
  Spit("bad.inst", "3 1\n0 7\n");
  EXPECT_EQ(Cli({"prove", "--instance", Path("bad.inst"), "--witness", Path("k3.wit"),
                 "--out", Path("p")}),
            kFile);
  EXPECT_NE(err_.find("malformed"), std::string::npos);
  Spit("junk", "not a proof");
  EXPECT_EQ(Cli({"verify", "--instance", Path("k3.inst"), "--proof", Path("junk")}), kReject);
  Spit("bad.wit", "0 0 1\n");
  EXPECT_EQ(Cli({"prove", "--instance", Path("k3.inst"), "--witness", Path("bad.wit"),
                 "--out", Path("p")}),
            kUsage);
  EXPECT_EQ(Cli({"prove", "--instance", Path("k3.inst"), "--witness", Path("k3.wit"),
                 "--out", (dir_ / "no" / "such" / "dir").string()}),
            kFile);
}

TEST_F(CliTest, BiasBudgetNeedsOverride) {
  GenTriangle();
  std::vector<std::string> args = {"prove", "--instance", Path("k3.inst"), "--witness",
                                   Path("k3.wit"), "--reps", "17", "--n", "64", "--out",
                                   Path("p")};
  EXPECT_EQ(Cli(args), kUsage);
  EXPECT_NE(err_.find("--allow-bias"), std::string::npos);
  args.push_back("--allow-bias");
  EXPECT_EQ(Cli(args), kOk);
}

TEST_F(CliTest, ExtractSummary) {
  GenTriangle();
  ASSERT_EQ(Cli({"extract", "--instance", Path("k3.inst"), "--witness", Path("k3.wit"),
                 "--reps", "1", "--n", "64", "--allow-bias", "--adversary", "grind",
                 "--budget", "2^3", "--trials", "50", "--threads", "2", "--csv",
                 Path("sum.csv"), "--dump-db", Path("db.txt")}),
            kOk)
      << err_;
  EXPECT_NE(out_.find("# trial_id, v, extracted, suc, cl, db_size, q_used"),
            std::string::npos);
  EXPECT_NE(out_.find("49, "), std::string::npos);
  EXPECT_NE(out_.find("extracted         0\n"), std::string::npos);
  std::string csv = Slurp("sum.csv");
  EXPECT_EQ(csv.rfind("scheme,adversary,trials,", 0), 0u);
  EXPECT_NE(csv.find("cno,grind,50,"), std::string::npos);
  EXPECT_FALSE(Slurp("db.txt").empty());

  ASSERT_EQ(Cli({"extract", "--instance", Path("k3.inst"), "--witness", Path("k3.wit"),
                 "--reps", "17", "--n", "128", "--trials", "20"}),
            kOk)
      << err_;
  EXPECT_NE(out_.find("extracted         20\n"), std::string::npos) << out_;
  EXPECT_EQ(Cli({"extract", "--instance", Path("k3.inst"), "--adversary", "psychic"}), kUsage);
}

TEST_F(CliTest, ParamsPrintsExactValue) {
  ASSERT_EQ(Cli({"params", "--formula", "thm3", "--l", "64", "--q", "2^20", "--n", "256",
                 "--ptriv", "2^-128", "--csv", Path("p.csv")}),
            kOk)
      << err_;
  // 1468 2^-196 + 20 2^-88.
  EXPECT_NE(out_.find("6.46234853557"), std::string::npos) << out_;
  EXPECT_EQ(Slurp("p.csv").rfind("formula,inputs,value,log2,note\n", 0), 0u);
  for (std::string formula : {"thm4", "cor2", "cor3", "lemma3", "lemma4"}) {
    EXPECT_EQ(Cli({"params", "--formula", formula, "--l", "64", "--q", "1024", "--n", "128",
                   "--ptriv", "1/2", "--r", "64"}),
              kOk)
        << formula << err_;
  }
  EXPECT_EQ(Cli({"params", "--formula", "table1", "--l", "51", "--q", "1024", "--n", "256",
                 "--eps", "1/4", "--r", "17", "--C", "3"}),
            kOk)
      << err_;
  EXPECT_NE(out_.find("eps-h"), std::string::npos);
  EXPECT_EQ(Cli({"params", "--formula", "thm3", "--ptriv", "2"}), kUsage);
  EXPECT_EQ(Cli({"params", "--formula", "thm3", "--ptriv", "banana"}), kUsage);
}

TEST_F(CliTest, BenchOctopus) {
  ASSERT_EQ(Cli({"bench", "octopus", "--l", "8", "--kappa", "1"}), kOk) << err_;
  EXPECT_NE(out_.find("exhaustive"), std::string::npos);
  EXPECT_NE(out_.find("   3  8\n"), std::string::npos) << out_;
  ASSERT_EQ(Cli({"bench", "octopus", "--l", "8", "--kappa", "2"}), kOk);
  EXPECT_NE(out_.find("   2  4\n   3  8\n   4  16\n"), std::string::npos) << out_;
  ASSERT_EQ(Cli({"bench", "octopus", "--l", "12", "--kappa", "2"}), kOk);
  EXPECT_NE(out_.find("h=4 |C|=66"), std::string::npos) << out_;
  EXPECT_EQ(Cli({"bench", "octopus", "--l", "8", "--kappa", "9"}), kUsage);
}

TEST_F(CliTest, GenWritesParsableFiles) {
  ASSERT_EQ(Cli({"gen", "--kind", "coloring", "--vertices", "30", "--edge-prob", "0.3",
                 "--seed", "1", "--instance", Path("a.inst"), "--witness", Path("a.wit")}),
            kOk);
  std::string first = Slurp("a.inst");
  ASSERT_EQ(Cli({"gen", "--kind", "coloring", "--vertices", "30", "--edge-prob", "0.3",
                 "--seed", "1", "--instance", Path("a.inst"), "--witness", Path("a.wit")}),
            kOk);
  EXPECT_EQ(Slurp("a.inst"), first);
  EXPECT_EQ(first.rfind("30 ", 0), 0u);
  EXPECT_EQ(Cli({"gen", "--kind", "coloring", "--vertices", "1", "--instance", Path("x"),
                 "--witness", Path("y")}),
            kUsage);
}

}  // namespace
}  // namespace cnofs::cli
