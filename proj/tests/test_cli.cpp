// Copyright 2026 The syncnode Authors
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

// Drives the syncnode binary through the shell: exit codes, --out, config
// files and byte-identical reruns.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "syncnode_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd =
      std::string(SYNCNODE_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

TEST(Cli, EverySubcommandIsDeterministic) {
  const char* commands[] = {
      "decay",
      "tail --runs 300 --reps 2 --horizon 200 --gammas 0,1,2,3",
      "capacity",
      "rate --gamma 5",
      "decide --m 4",
      "sweep --param cost --m 4",
      "netsim --rounds 500 --reps 2",
  };
  for (const char* c : commands) {
    const CliRun a = run(c);
    const CliRun b = run(c);
    EXPECT_EQ(a.code, 0) << c;
    EXPECT_FALSE(a.out.empty()) << c;
    EXPECT_EQ(a.out, b.out) << c;
    EXPECT_EQ(a.out.find('\r'), std::string::npos);
  }
}

TEST(Cli, DecayHeader) {
  const CliRun r = run("decay --x-steps 2 --gap-steps 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x,mu_minus_lambda,i_value");
}

TEST(Cli, ValidationFailuresExitOne) {
  EXPECT_EQ(run("decay --x-steps 0").code, 1);
  EXPECT_EQ(run("decay --bogus 1").code, 1);
  EXPECT_EQ(run("tail --gammas 3,2").code, 1);
  EXPECT_EQ(run("tail --lambda 6 --mu 3").code, 1);
  EXPECT_EQ(run("capacity --epsilon 0").code, 1);
  EXPECT_EQ(run("decide --m 13").code, 1);
  EXPECT_EQ(run("sweep --param gamma").code, 1);
  EXPECT_EQ(run("netsim --strategy greedy").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(Cli, NumericalFailureExitsTwo) {
  EXPECT_EQ(run("tail --gammas 500,600 --runs 50 --reps 1 --horizon 100").code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, OutFileMatchesStdout) {
  const fs::path file = scratch() / "capacity.csv";
  fs::remove(file);
  const CliRun to_file = run("capacity --out " + file.string());
  ASSERT_EQ(to_file.code, 0);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(file), run("capacity").out);
}

TEST(Cli, ConfigFileWithOverrides) {
  const fs::path cfg = scratch() / "rate.conf";
  {
    std::ofstream out(cfg);
    out << "# effective rate table\n"
        << "lambda = 2\n"
        << "gamma = 4\n"
        << "epsilon = 0.5, 1\n";
  }
  const CliRun from_file = run("rate --config " + cfg.string());
  ASSERT_EQ(from_file.code, 0);
  EXPECT_EQ(from_file.out, run("rate --lambda 2 --gamma 4 --epsilon 0.5,1").out);
  const CliRun overridden = run("rate --config " + cfg.string() + " --lambda 5");
  EXPECT_EQ(overridden.out, run("rate --lambda 5 --gamma 4 --epsilon 0.5,1").out);

  const fs::path bad = scratch() / "bad.conf";
  {
    std::ofstream out(bad);
    out << "lambda = 2\nwidth = 3\n";
  }
  EXPECT_EQ(run("rate --config " + bad.string()).code, 1);
  EXPECT_EQ(run("rate --config " + (scratch() / "missing.conf").string()).code, 1);
}

TEST(Cli, NetsimConfigWithUnderscoreKeys) {
  const fs::path cfg = scratch() / "netsim.conf";
  {
    std::ofstream out(cfg);
    out << "m = 2\nn_partial = 3\nrounds = 400\nstrategy = cautious\n";
  }
  const CliRun r = run("netsim --reps 2 --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, run("netsim --reps 2 --m 2 --n-partial 3 --rounds 400 --strategy cautious").out);
}

}  // namespace
