// Copyright 2026 The ferx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ferx/cli/cli.hpp"

#include <gtest/gtest.h>

#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "ferx/eval/records.hpp"
#include "study_fixture.hpp"
// After the Eigen-based headers: <resolv.h> defines a _res macro.
#include "httplib.h"

namespace ferx::cli {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Result {
  int code;
  std::string out, err;
};

Result ferx(std::vector<std::string> args, const ServeHook* hook = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err, hook);
  return {code, out.str(), err.str()};
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) out.insert(e.path().filename().string());
  return out;
}

std::map<std::string, std::vector<std::uint8_t>> tree_bytes(const fs::path& root) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = imaging::read_file_bytes(e.path());
  }
  return out;
}

std::string slurp(const fs::path& p) {
  const auto b = imaging::read_file_bytes(p);
  return std::string(b.begin(), b.end());
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    const auto r = ferx({"train", "--out", model().string(), "--seed", "3", "--images-per-class", "6", "--epochs",
                         "1", "--fau-epochs", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    testing::write_candidates(root() / "cands", 2, 2);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path root() { return dir_->path(); }
  static fs::path model() { return root() / "model"; }
  static fs::path image() { return root() / "cands/img/c0.pgm"; }
  static fs::path landmarks() { return root() / "cands/face.lm"; }

  static std::vector<std::string> explain_args(const std::string& method, const fs::path& out) {
    return {"explain", "--model",        model().string(), "--image",        image().string(),
            "--landmarks", landmarks().string(), "--method", method, "--out", out.string(),
            "--lime-samples", "60", "--shap-samples", "128", "--seed", "7"};
  }

  static TempDir* dir_;
};

TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, ParseErrorsExitTwo) {
  EXPECT_EQ(ferx({}).code, kExitInvalid);
  EXPECT_EQ(ferx({"frobnicate"}).code, kExitInvalid);
  EXPECT_EQ(ferx({"train", "--out", "x", "--bogus"}).code, kExitInvalid);
  EXPECT_EQ(ferx({"train"}).code, kExitInvalid);
  EXPECT_EQ(ferx({"explain", "--model", "m", "--image", "i", "--method", "gradcam", "--out", "o"}).code,
            kExitInvalid);
  EXPECT_EQ(ferx({"train", "--out", "x", "evaluate", "--export", "y"}).code, kExitInvalid);
  const auto help = ferx({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
}

TEST_F(CliTest, TrainIsDeterministic) {
  const auto out = root() / "model-again";
  const auto r = ferx({"train", "--out", out.string(), "--seed", "3", "--images-per-class", "6", "--epochs", "1",
                       "--fau-epochs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(tree_bytes(out), tree_bytes(model()));
}

TEST_F(CliTest, ExplainOutputSetDependsOnlyOnMethod) {
  const std::set<std::string> raster = {"mask.pgm", "overlay.ppm", "composite.ppm"};
  auto with = [](std::set<std::string> s, std::initializer_list<const char*> extra) {
    for (const char* e : extra) s.insert(e);
    return s;
  };
  const std::map<std::string, std::set<std::string>> expected = {
      {"lime", with(raster, {"attribution.txt"})},   {"shap", with(raster, {"attribution.txt"})},
      {"salmap", with(raster, {"attribution.txt"})}, {"fau-t", {"phrases.txt"}},
      {"fau-v", raster},                             {"fau-vt", with(raster, {"phrases.txt"})},
  };
  ASSERT_EQ(expected.size(), pipeline::kAllMethods.size());
  for (const auto& [method, files] : expected) {
    for (const char* img : {"c0.pgm", "c9.pgm"}) {
      const auto out = root() / ("set-" + method + "-" + img);
      auto args = explain_args(method, out);
      args[4] = (root() / "cands/img" / img).string();
      const auto r = ferx(args);
      ASSERT_EQ(r.code, 0) << method << ": " << r.err;
      EXPECT_EQ(listing(out), files) << method;
    }
  }
}

TEST_F(CliTest, ExplainIsByteStableUnderSeed) {
  for (const auto m : pipeline::kAllMethods) {
    const std::string method(pipeline::method_name(m));
    const auto a = root() / ("det-a-" + method);
    const auto b = root() / ("det-b-" + method);
    ASSERT_EQ(ferx(explain_args(method, a)).code, 0);
    ASSERT_EQ(ferx(explain_args(method, b)).code, 0);
    EXPECT_EQ(tree_bytes(a), tree_bytes(b)) << method;
  }
}

TEST_F(CliTest, ExplainErrorsMapToExitCodes) {
  auto args = explain_args("fau-v", root() / "no-lm");
  args.erase(args.begin() + 5, args.begin() + 7);
  const auto r = ferx(args);
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("--landmarks"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(root() / "no-lm"));

  args = explain_args("fau-vt", root() / "no-lm");
  args.erase(args.begin() + 5, args.begin() + 7);
  EXPECT_EQ(ferx(args).code, kExitInvalid);

  args = explain_args("salmap", root() / "e1");
  args[4] = (root() / "missing.pgm").string();
  EXPECT_EQ(ferx(args).code, kExitIo);

  args = explain_args("salmap", root() / "e2");
  args[2] = (root() / "no-model").string();
  EXPECT_EQ(ferx(args).code, kExitIo);

  const auto bad_model = root() / "bad-model";
  fs::create_directories(bad_model);
  testing::write_text(bad_model / pipeline::kFerWeightsFile, "NOPE");
  args = explain_args("salmap", root() / "e3");
  args[2] = bad_model.string();
  EXPECT_EQ(ferx(args).code, kExitInvalid);

  const auto bad_image = root() / "bad.pgm";
  testing::write_text(bad_image, "P5\n48 48\n255\nxx");
  args = explain_args("salmap", root() / "e4");
  args[4] = bad_image.string();
  EXPECT_EQ(ferx(args).code, kExitInvalid);

  args = explain_args("salmap", root() / "e5");
  args.insert(args.end(), {"--class", "boredom"});
  EXPECT_EQ(ferx(args).code, kExitInvalid);

  args = explain_args("salmap", root() / "e6");
  args.insert(args.end(), {"--class", "fear"});
  EXPECT_EQ(ferx(args).code, kExitOk);
  EXPECT_NE(slurp(root() / "e6/attribution.txt").find("class " + std::to_string(static_cast<int>(Emotion::fear))),
            std::string::npos);
}

class CliStudyTest : public CliTest {
 protected:
  static fs::path bundle() { return root() / "bundle"; }

  static std::vector<std::string> bundle_args(const fs::path& manifest, const fs::path& out) {
    return {"bundle", "--manifest", manifest.string(), "--model", model().string(), "--out", out.string(),
            "--seed", "11", "--lime-samples", "40", "--shap-samples", "128"};
  }

  static void SetUpTestSuite() {
    CliTest::SetUpTestSuite();
    const auto r = ferx(bundle_args(root() / "cands/manifest.tsv", bundle()));
    ASSERT_EQ(r.code, 0) << r.err;
  }
};

TEST_F(CliStudyTest, BundleFromMinimalManifest) {
  const auto b = study::load_bundle(bundle());
  EXPECT_EQ(b.test.size(), 28u);
  EXPECT_EQ(b.training.size(), 14u);
  const auto again = ferx(bundle_args(root() / "cands/manifest.tsv", root() / "bundle-again"));
  ASSERT_EQ(again.code, 0);
  // Every training image reuses a test image with only 2+2 candidates.
  EXPECT_NE(again.err.find("warning:"), std::string::npos);
  EXPECT_EQ(tree_bytes(bundle()), tree_bytes(root() / "bundle-again"));
}

TEST_F(CliStudyTest, BundleErrors) {
  TempDir d("nofear");
  testing::write_candidates(d.path(), 2, 2, static_cast<int>(Emotion::fear));
  const auto r = ferx(bundle_args(d.path() / "manifest.tsv", d.path() / "out"));
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("fear"), std::string::npos) << r.err;
  EXPECT_EQ(ferx(bundle_args(d.path() / "missing.tsv", d.path() / "out2")).code, kExitIo);
}

TEST_F(CliStudyTest, SimulateAndEvaluate) {
  const auto oracle = root() / "oracle.jsonl";
  ASSERT_EQ(ferx({"simulate", "--bundle", bundle().string(), "--policy", "oracle", "--n", "14", "--seed", "2",
                  "--out", oracle.string()})
                .code,
            0);
  const auto records = eval::parse_records(slurp(oracle));
  EXPECT_EQ(records.trials.size(), 14u * 28u);
  for (const auto& t : records.trials) EXPECT_EQ(t.hmp, t.mp);

  const auto random = root() / "random.jsonl";
  const auto sim = ferx({"simulate", "--bundle", bundle().string(), "--policy", "random", "--n", "28", "--seed", "5"});
  ASSERT_EQ(sim.code, 0);
  EXPECT_EQ(sim.out, ferx({"simulate", "--bundle", bundle().string(), "--policy", "random", "--n", "28", "--seed",
                           "5"})
                         .out);
  testing::write_text(random, sim.out);

  const auto stats = root() / "stats.json";
  const auto r = ferx({"evaluate", "--export", random.string(), "--analysis", "modality", "--quality", "off",
                       "--tukey-draws", "20000", "--stats", stats.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ANOVA F(3, 12)"), std::string::npos) << r.out;
  const auto json = study::Json::parse(slurp(stats));
  EXPECT_EQ(json, study::Json::parse(ferx({"evaluate", "--export", random.string(), "--analysis", "modality",
                                           "--quality", "off", "--tukey-draws", "20000", "--format", "json"})
                                         .out));

  const auto single = root() / "single.jsonl";
  ASSERT_EQ(ferx({"simulate", "--bundle", bundle().string(), "--n", "4", "--cohort", "FAU-T", "--out",
                  single.string()})
                .code,
            0);
  const auto one = ferx({"evaluate", "--export", single.string(), "--tukey-draws", "1000"});
  EXPECT_EQ(one.code, kExitInvalid);

  auto text = slurp(random);
  const auto pos = text.find("\"cohort\":\"LIME\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 15, "\"cohort\":\"XAI\"");
  testing::write_text(root() / "tagged.jsonl", text);
  EXPECT_EQ(ferx({"evaluate", "--export", (root() / "tagged.jsonl").string()}).code, kExitInvalid);
  EXPECT_EQ(ferx({"evaluate", "--export", (root() / "none.jsonl").string()}).code, kExitIo);
  EXPECT_EQ(ferx({"simulate", "--bundle", (root() / "nowhere").string()}).code, kExitIo);
}

TEST_F(CliStudyTest, ServeKeepsStateAcrossRestart) {
  const auto data = root() / "data";
  auto serve_once = [&](const std::function<void(httplib::Client&)>& body) {
    ServeHook hook;
    std::promise<std::pair<int, std::function<void()>>> ready;
    hook.ready = [&](int port, std::function<void()> stop) { ready.set_value({port, std::move(stop)}); };
    Result result;
    std::thread t([&] {
      result = ferx({"serve", "--bundle", bundle().string(), "--data-dir", data.string(), "--port", "0",
                     "--admin-token", "tok"},
                    &hook);
    });
    auto [port, stop] = ready.get_future().get();
    httplib::Client client("127.0.0.1", port);
    body(client);
    stop();
    t.join();
    return result;
  };

  std::string id;
  auto first = serve_once([&](httplib::Client& c) {
    auto res = c.Post("/sessions", "", "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201);
    id = study::Json::parse(res->body)["session"];
    res = c.Get("/sessions/" + id + "/next");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
  });
  EXPECT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("listening on 127.0.0.1:"), std::string::npos);
  EXPECT_TRUE(fs::exists(data / "secret"));
  const auto log = slurp(data / "events.jsonl");
  EXPECT_FALSE(log.empty());

  auto second = serve_once([&](httplib::Client& c) {
    auto res = c.Get("/sessions/" + id + "/state");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(study::Json::parse(res->body)["phase"], "consent");
    httplib::Headers h = {{"X-Admin-Token", "tok"}};
    res = c.Get("/export", h);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
  });
  EXPECT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(slurp(data / "events.jsonl"), log);

  testing::write_text(data / "events.jsonl", log + "{not json\n");
  const auto corrupt = ferx({"serve", "--bundle", bundle().string(), "--data-dir", data.string(), "--port", "0"});
  EXPECT_EQ(corrupt.code, kExitInvalid);
  EXPECT_NE(corrupt.err.find("line"), std::string::npos) << corrupt.err;
}

}  // namespace
}  // namespace ferx::cli
