// Drives the hdsz binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result Exec(const std::string& args) {
  const std::string cmd = std::string(HDSZ_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "hdsz_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const std::string common =
        " --n 8 --interictal 44 --seizure-len 12 --postictal 10 --patient-seed 2 ";
    ASSERT_EQ(Exec("synth --out " + Dir("p") + " --count 3 --patient-id pa" + common).code, 0);
    ASSERT_EQ(Exec("synth --out " + Dir("nine") + " --count 1 --patient-id pb --n 9 "
                   "--interictal 44 --seizure-len 12 --postictal 10")
                  .code,
              0);
    ASSERT_EQ(Exec("synth --out " + Dir("short") + " --count 1 --patient-id ps --n 8 "
                   "--interictal 30 --seizure-len 12 --postictal 10")
                  .code,
              0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string Dir(const std::string& sub) { return (dir_ / sub).string(); }
  static std::string Rec(const std::string& sub, const std::string& id, int i) {
    char name[32];
    std::snprintf(name, sizeof(name), "_%03d.hdsr", i);
    return (dir_ / sub / (id + name)).string();
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, TrainPrintsThresholdAndWritesModel) {
  const std::string model = Dir("m1.hdsz");
  const Result r = Exec("train --d 1000 --out " + model + " " + Rec("p", "pa", 0));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("t_p="), std::string::npos);
  EXPECT_EQ(Slurp(model).substr(0, 4), "HDSZ");
}

TEST_F(CliTest, TrainWithoutRecordingsIsUsageError) {
  EXPECT_EQ(Exec("train --out " + Dir("none.hdsz")).code, 1);
}

TEST_F(CliTest, UnknownCommandIsUsageError) {
  EXPECT_EQ(Exec("frobnicate").code, 1);
  EXPECT_EQ(Exec("").code, 1);
}

TEST_F(CliTest, TrainingFailureExitCode) {
  const Result r = Exec("train --d 1000 --out " + Dir("bad.hdsz") + " " + Rec("short", "ps", 0));
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("ps"), std::string::npos);
}

TEST_F(CliTest, DetectIsDeterministic) {
  const std::string m1 = Dir("det_a.hdsz");
  const std::string m2 = Dir("det_b.hdsz");
  ASSERT_EQ(Exec("train --d 1000 --seed 4 --out " + m1 + " " + Rec("p", "pa", 0)).code, 0);
  ASSERT_EQ(Exec("train --d 1000 --seed 4 --out " + m2 + " " + Rec("p", "pa", 0)).code, 0);
  EXPECT_EQ(Slurp(m1), Slurp(m2));

  const Result a = Exec("detect --model " + m1 + " --out " + Dir("log_a.csv") + " " + Rec("p", "pa", 1));
  const Result b = Exec("detect --model " + m2 + " --out " + Dir("log_b.csv") + " " + Rec("p", "pa", 1));
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.out.find("detected=1"), std::string::npos) << a.out;
  EXPECT_FALSE(Slurp(Dir("log_a.csv")).empty());
  EXPECT_EQ(Slurp(Dir("log_a.csv")), Slurp(Dir("log_b.csv")));
}

TEST_F(CliTest, ElectrodeMismatchIsDataError) {
  const std::string model = Dir("m8.hdsz");
  ASSERT_EQ(Exec("train --d 1000 --out " + model + " " + Rec("p", "pa", 0)).code, 0);
  const Result r = Exec("detect --model " + model + " " + Rec("nine", "pb", 0));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("electrodes"), std::string::npos) << r.out;
}

TEST_F(CliTest, CorruptRecordingIsDataError) {
  const std::string bad = Dir("corrupt.hdsr");
  std::ofstream(bad) << "HDSRxx";
  const Result r = Exec("train --d 1000 --out " + Dir("c.hdsz") + " " + bad);
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(CliTest, EvalReducedDimension) {
  const std::string table = Dir("report.csv");
  const std::string json = Dir("report.json");
  const Result r = Exec("eval --d 1000 --protocol kfold --m 1 --out " + table + " --json " + json + " " +
                     Rec("p", "pa", 0) + " " + Rec("p", "pa", 1) + " " + Rec("p", "pa", 2));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pa,8,3,1,3,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(",100.00,100.00,"), std::string::npos) << r.out;
  EXPECT_EQ(Slurp(table), r.out);
  EXPECT_NE(Slurp(json).find("\"protocol\": \"kfold\""), std::string::npos);

  const Result again = Exec("eval --d 1000 --m 1 " + Rec("p", "pa", 0) + " " + Rec("p", "pa", 1) + " " +
                         Rec("p", "pa", 2));
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(Exec("eval --d 1000 --m 3 " + Rec("p", "pa", 0)).code, 1);
  EXPECT_EQ(Exec("eval --protocol leave-one-out " + Rec("p", "pa", 0)).code, 1);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string cfg = Dir("run.toml");
  std::ofstream(cfg) << "d = 1000\nseed = 9\n";
  const std::string from_file = Dir("cfg_a.hdsz");
  const std::string from_flags = Dir("cfg_b.hdsz");
  ASSERT_EQ(Exec("--config " + cfg + " train --out " + from_file + " " + Rec("p", "pa", 0)).code, 0);
  ASSERT_EQ(Exec("train --d 1000 --seed 9 --out " + from_flags + " " + Rec("p", "pa", 0)).code, 0);
  EXPECT_EQ(Slurp(from_file), Slurp(from_flags));

  const std::string overridden = Dir("cfg_c.hdsz");
  ASSERT_EQ(Exec("--config " + cfg + " train --seed 10 --out " + overridden + " " + Rec("p", "pa", 0)).code,
            0);
  EXPECT_NE(Slurp(overridden), Slurp(from_file));
}

TEST_F(CliTest, ReconstructHistDumpsOneRowPerWindow) {
  const Result r = Exec("reconstruct-hist --d 1000 " + Rec("p", "pa", 0));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    ASSERT_EQ(std::count(line.begin(), line.end(), ','), 63);
  }
  // 66 s at 512 Hz, l = 6.
  EXPECT_EQ(rows, (66u * 512 - 6) / 256);
}

TEST_F(CliTest, BenchReportsRows) {
  const Result r = Exec("bench --n 8 --dims 1000 --seconds 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n,d,windows,windows_per_s,ms_per_window,realtime_factor"), std::string::npos);
  EXPECT_NE(r.out.find("\n8,1000,9,"), std::string::npos) << r.out;
}

}  // namespace
