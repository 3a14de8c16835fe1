/* Copyright 2026 The imverify Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "imverify/image.hpp"
#include "test_util.hpp"

namespace imverify {
namespace {

using nlohmann::json;

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded, capturing stdout and the exit code.
Run Cli(const std::string& args) {
  const std::string cmd = std::string(IMVERIFY_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

TEST(Cli, ModelsListsBuiltins) {
  const auto r = Cli("models");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("mean-intensity"), std::string::npos);
  EXPECT_NE(r.out.find("centroid"), std::string::npos);
}

TEST(Cli, EnumerateCountsAndDumps) {
  auto r = Cli("enumerate -t occlusion --mask 41x41 -d 224x224");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("count 33856"), std::string::npos);
  r = Cli("enumerate -t avg_smooth -d 8x8 --dump");
  ASSERT_EQ(r.status, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["count"], 7);
  EXPECT_EQ(doc["values"].front(), 2.0);
  EXPECT_NE(Cli("enumerate -t warp").status, 0);
}

TEST(Cli, OracleCheckExitCodes) {
  EXPECT_EQ(Cli("oracle-check -t brightness --random 4x4").status, 0);
  EXPECT_EQ(Cli("oracle-check -t erosion --random 6x6 --drop-index 0").status, 1);
  EXPECT_EQ(Cli("oracle-check -t rotation --random 30x30").status, 2);
}

TEST(Cli, VerifyExportRoundTrip) {
  const auto dir = testing::scratch_dir("cli_verify");
  const auto corpus = dir / "corpus";
  std::filesystem::create_directories(corpus);
  write_png(Image::filled(8, 8, 1, 96), corpus / "gray.png");
  write_png(testing::random_image(8, 8, 1, 3), corpus / "noise.png");
  json config{{"model", "builtin:mean-intensity"},
              {"corpus", "corpus"},
              {"output_dir", "out"},
              {"properties", json::array({json{{"transform", "brightness"}},
                                          json{{"transform", "reflection"}}})}};
  std::ofstream(dir / "run.json") << config.dump();

  EXPECT_EQ(Cli("verify -c " + Quote((dir / "run.json").string())).status, 1);
  const auto report = dir / "out" / "report.json";
  ASSERT_TRUE(std::filesystem::exists(report));
  const json r = json::parse(std::ifstream(report));
  EXPECT_EQ(r["summary"]["inputs"], 2);

  const auto exported = Cli("export-violations -r " + Quote(report.string()) + " -o " +
                            Quote((dir / "v").string()));
  EXPECT_EQ(exported.status, 0);
  EXPECT_NE(exported.out.find(r["summary"]["violations_distinct"].dump() + " images"),
            std::string::npos);

  EXPECT_EQ(Cli("verify -c " + Quote((dir / "run.json").string()) +
                " -m builtin:constant -o " + Quote((dir / "clean").string()))
                .status,
            0);
  EXPECT_EQ(Cli("verify -m builtin:constant -p reflection --corpus " +
                Quote((dir / "missing").string()) + " -o " + Quote((dir / "x").string()))
                .status,
            2);
}

TEST(Cli, ThroughputRequiresEnoughImages) {
  EXPECT_EQ(Cli("throughput -n 1000 --mode batched").status, 0);
  EXPECT_NE(Cli("throughput -n 10").status, 0);
}

}  // namespace
}  // namespace imverify
