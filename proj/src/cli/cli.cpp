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

#include <atomic>
#include <charconv>
#include <csignal>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ferx/eval/report.hpp"
#include "ferx/imaging/pnm.hpp"
#include "ferx/nn/weights_io.hpp"
#include "ferx/pipeline/explain.hpp"
#include "ferx/pipeline/models.hpp"
#include "ferx/study/build.hpp"
#include "ferx/study/http.hpp"
#include "ferx/study/service.hpp"
#include "ferx/study/simulate.hpp"
// After the Eigen-based headers: <resolv.h> defines a _res macro.
#include "httplib.h"

namespace ferx::cli {
namespace {

// Unreadable or unwritable paths, whichever loader noticed first.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_file(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + what + " " + path.string());
}

std::string read_text(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + what + " " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

const fau::FauVocabulary& vocabulary(const std::string& path, std::optional<fau::FauVocabulary>& storage) {
  if (path.empty()) return fau::default_vocabulary();
  storage = fau::parse_vocabulary(read_text(path, "vocabulary"));
  return *storage;
}

int parse_class(const std::string& s) {
  if (s.empty()) return -1;
  if (const auto e = parse_model_emotion(s)) return static_cast<int>(*e);
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0 || v >= kModelClassCount) {
    throw pipeline::PipelineError("--class must be an emotion name or 0.." + std::to_string(kModelClassCount - 1));
  }
  return v;
}

std::vector<std::string> names(auto&& range, auto&& fn) {
  std::vector<std::string> out;
  for (const auto& v : range) out.emplace_back(fn(v));
  return out;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string out;
  pipeline::TrainOptions opts;
};

void add_train(CLI::App& app, TrainArgs& a) {
  auto* c = app.add_subcommand("train", "Train the reference CNN and FAU head on synthetic data");
  c->add_option("--out", a.out, "Model directory to write")->required();
  c->add_option("--seed", a.opts.seed, "RNG seed");
  c->add_option("--images-per-class", a.opts.images_per_class, "Synthetic images per class")->check(CLI::PositiveNumber);
  c->add_option("--epochs", a.opts.fer.epochs, "CNN epochs")->check(CLI::PositiveNumber);
  c->add_option("--fau-epochs", a.opts.fau.epochs, "FAU head epochs")->check(CLI::PositiveNumber);
}

int run_train(const TrainArgs& a, std::ostream& out) {
  pipeline::TrainSummary summary;
  const auto models = pipeline::train_models(a.opts, &summary, &out);
  make_dir(a.out);
  pipeline::save_models(models, a.out);
  char line[160];
  std::snprintf(line, sizeof line, "fer accuracy %.4f, fau accuracy %.4f\n", summary.fer_accuracy,
                summary.fau_accuracy);
  out << line << "wrote " << (std::filesystem::path(a.out) / pipeline::kFerWeightsFile).string() << " and "
      << (std::filesystem::path(a.out) / pipeline::kFauWeightsFile).string() << "\n";
  return kExitOk;
}

// --- explain ---------------------------------------------------------------

struct ExplainArgs {
  std::string model, image, landmarks, method, out, klass, vocab;
  pipeline::ExplainOptions opts;
};

void add_explain(CLI::App& app, ExplainArgs& a) {
  auto* c = app.add_subcommand("explain", "Explain one image with one method");
  c->add_option("--model", a.model, "Model directory")->required();
  c->add_option("--image", a.image, "Grayscale PGM")->required();
  c->add_option("--landmarks", a.landmarks, "68-point landmark file");
  c->add_option("--method", a.method, "Explanation method")
      ->required()
      ->check(CLI::IsMember(names(pipeline::kAllMethods, pipeline::method_name)));
  c->add_option("--out", a.out, "Output directory")->required();
  c->add_option("--coverage", a.opts.coverage, "Fraction of pixels highlighted")->check(CLI::Range(0.0, 1.0));
  c->add_option("--seed", a.opts.seed, "RNG seed");
  c->add_option("--class", a.klass, "Class to explain, name or index (default: prediction)");
  c->add_option("--cell-size", a.opts.cell_size, "Grid cell size for LIME and SHAP")->check(CLI::PositiveNumber);
  c->add_option("--lime-samples", a.opts.lime_samples, "LIME perturbations")->check(CLI::PositiveNumber);
  c->add_option("--shap-samples", a.opts.shap_samples, "Kernel SHAP coalitions")->check(CLI::PositiveNumber);
  c->add_option("--threads", a.opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  c->add_option("--vocabulary", a.vocab, "FAU vocabulary file");
}

int run_explain(const ExplainArgs& a, std::ostream& out) {
  const auto method = *pipeline::parse_method(a.method);
  if (pipeline::needs_landmarks(method) && a.landmarks.empty()) {
    throw fau::LandmarkError("--method " + a.method + " needs --landmarks");
  }
  const int klass = parse_class(a.klass);
  require_file(a.image, "image");
  if (!a.landmarks.empty()) require_file(a.landmarks, "landmarks");
  std::optional<fau::FauVocabulary> vocab_storage;
  const auto& vocab = vocabulary(a.vocab, vocab_storage);
  const auto models = pipeline::load_models(a.model, pipeline::needs_fau_head(method));
  const auto image = imaging::read_pgm_file(a.image);
  std::optional<fau::LandmarkSet> landmarks;
  if (!a.landmarks.empty()) landmarks = fau::load_landmarks(a.landmarks);
  const auto e =
      pipeline::explain_image(models, vocab, image, landmarks ? &*landmarks : nullptr, method, a.opts, klass);
  make_dir(a.out);
  for (const auto& name : pipeline::write_explanation(e, a.out)) out << (std::filesystem::path(a.out) / name).string() << "\n";
  return kExitOk;
}

// --- bundle ----------------------------------------------------------------

struct BundleArgs {
  std::string manifest, model, out, vocab, protocol;
  study::BuildOptions opts;
};

void add_bundle(CLI::App& app, BundleArgs& a) {
  auto* c = app.add_subcommand("bundle", "Select study images and pre-render every cohort's assets");
  c->add_option("--manifest", a.manifest, "Candidate manifest (TSV)")->required();
  c->add_option("--model", a.model, "Model directory with FAU head")->required();
  c->add_option("--out", a.out, "Bundle directory")->required();
  c->add_option("--seed", a.opts.seed, "Selection and explanation seed");
  c->add_option("--coverage", a.opts.explain.coverage, "Fraction of pixels highlighted")->check(CLI::Range(0.0, 1.0));
  c->add_option("--lime-samples", a.opts.explain.lime_samples, "LIME perturbations")->check(CLI::PositiveNumber);
  c->add_option("--shap-samples", a.opts.explain.shap_samples, "Kernel SHAP coalitions")->check(CLI::PositiveNumber);
  c->add_option("--threads", a.opts.explain.threads, "Worker threads")->check(CLI::PositiveNumber);
  c->add_option("--vocabulary", a.vocab, "FAU vocabulary file");
  c->add_option("--protocol", a.protocol, "Study protocol JSON (default: built in)");
}

int run_bundle(BundleArgs a, std::ostream& out, std::ostream& err) {
  const auto entries = study::parse_manifest(read_text(a.manifest, "manifest"));
  if (!a.protocol.empty()) {
    study::Json j;
    try {
      j = study::Json::parse(read_text(a.protocol, "protocol"));
    } catch (const study::Json::parse_error& e) {
      throw study::BundleError(std::string("protocol: ") + e.what());
    }
    a.opts.protocol = study::config_from_json(j);
  }
  std::optional<fau::FauVocabulary> vocab_storage;
  const auto& vocab = vocabulary(a.vocab, vocab_storage);
  const auto models = pipeline::load_models(a.model, true);
  make_dir(a.out);
  const auto base = std::filesystem::path(a.manifest).parent_path();
  const auto result = study::build_bundle(entries, base, models, vocab, a.out, a.opts);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  out << "wrote " << (std::filesystem::path(a.out) / study::kBundleFile).string() << " with "
      << result.bundle.training.size() << " training and " << result.bundle.test.size() << " test items\n";
  return kExitOk;
}

// --- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string bundle, data_dir, host = "127.0.0.1", admin_token, secret;
  int port = 8080;
};

void add_serve(CLI::App& app, ServeArgs& a) {
  auto* c = app.add_subcommand("serve", "Run the study service");
  c->add_option("--bundle", a.bundle, "Bundle directory")->required();
  c->add_option("--data-dir", a.data_dir, "Directory for the event log and server secret")->required();
  c->add_option("--host", a.host, "Listen address");
  c->add_option("--port", a.port, "Listen port, 0 for any")->check(CLI::Range(0, 65535));
  c->add_option("--admin-token", a.admin_token, "Token for /export and fixed cohorts")->envname("FERX_ADMIN_TOKEN");
  c->add_option("--secret", a.secret, "Trial-order secret (default: <data-dir>/secret)")
      ->envname("FERX_STUDY_SECRET");
}

std::uint64_t parse_secret(const std::string& text, const std::string& where) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw study::BundleError(where + " must be an unsigned 64-bit integer");
  }
  return v;
}

// The secret must survive restarts: replaying the log re-derives every
// session's trial order from it.
std::uint64_t load_or_create_secret(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) return parse_secret(read_text(path, "secret"), path.string());
  std::random_device rd;
  const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  write_text(path, std::to_string(v) + "\n");
  return v;
}

std::atomic<httplib::Server*> g_server{nullptr};

extern "C" void stop_on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int run_serve(const ServeArgs& a, std::ostream& out, const ServeHook* hook) {
  auto bundle = study::load_bundle(a.bundle);
  make_dir(a.data_dir);
  const std::filesystem::path data(a.data_dir);
  study::ServiceOptions opts;
  opts.secret = a.secret.empty() ? load_or_create_secret(data / "secret") : parse_secret(a.secret, "--secret");
  opts.log_path = data / "events.jsonl";
  study::StudyService service(std::move(bundle), opts);

  httplib::Server server;
  study::install_routes(server, service, {a.admin_token, std::filesystem::path(a.bundle) / study::kAssetDir});
  int port = a.port;
  if (port == 0) {
    port = server.bind_to_any_port(a.host);
    if (port < 0) throw IoError("cannot bind " + a.host);
  } else if (!server.bind_to_port(a.host, port)) {
    throw IoError("cannot bind " + a.host + ":" + std::to_string(port));
  }
  out << "listening on " << a.host << ":" << port << "\n" << std::flush;
  if (a.admin_token.empty()) out << "no admin token: /export is disabled\n" << std::flush;

  if (hook && hook->ready) {
    hook->ready(port, [&server] { server.stop(); });
  } else {
    g_server = &server;
    std::signal(SIGINT, stop_on_signal);
    std::signal(SIGTERM, stop_on_signal);
  }
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  if (!ok && server.is_running()) throw IoError("server failed");
  return kExitOk;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string export_path, analysis = "modality", quality = "conjunction", format = "text", stats;
  eval::TukeyConfig tukey;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  auto* c = app.add_subcommand("evaluate", "Analyse an exported record file");
  c->add_option("--export", a.export_path, "JSONL export")->required();
  c->add_option("--analysis", a.analysis, "Cohort set")->check(CLI::IsMember({"types", "modality", "all"}));
  c->add_option("--quality", a.quality, "Exclusion rule")->check(CLI::IsMember({"conjunction", "disjunction", "off"}));
  c->add_option("--format", a.format, "Report format on stdout")->check(CLI::IsMember({"text", "json"}));
  c->add_option("--stats", a.stats, "Also write the JSON stats block to this file");
  c->add_option("--tukey-draws", a.tukey.draws, "Monte Carlo draws for Tukey p-values")->check(CLI::PositiveNumber);
  c->add_option("--seed", a.tukey.seed, "Tukey Monte Carlo seed");
  c->add_option("--threads", a.tukey.threads, "Worker threads")->check(CLI::PositiveNumber);
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto records = eval::parse_records(read_text(a.export_path, "export"));
  eval::EvaluateOptions opts;
  opts.analysis = *eval::parse_analysis(a.analysis);
  opts.quality = a.quality == "conjunction"   ? eval::QualityRule::conjunction
                 : a.quality == "disjunction" ? eval::QualityRule::disjunction
                                              : eval::QualityRule::off;
  opts.tukey = a.tukey;
  const auto report = eval::evaluate(records, opts);
  const std::string json = eval::render_report_json(report);
  if (!a.stats.empty()) write_text(a.stats, json);
  out << (a.format == "json" ? json : eval::render_report_text(report));
  return kExitOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string bundle, policy = "oracle", cohort, out, log;
  study::SimulateOptions opts;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* c = app.add_subcommand("simulate", "Run synthetic participants through the protocol");
  c->add_option("--bundle", a.bundle, "Bundle directory")->required();
  c->add_option("--policy", a.policy, "Answer policy")
      ->check(CLI::IsMember({"oracle", "random", "always-agree"}));
  c->add_option("--n", a.opts.participants, "Participants")->check(CLI::PositiveNumber);
  c->add_option("--seed", a.opts.seed, "RNG seed");
  c->add_option("--cohort", a.cohort, "Put everyone in one cohort")
      ->check(CLI::IsMember(names(kAllCohorts, cohort_name)));
  c->add_option("--out", a.out, "Write the export here instead of stdout");
  c->add_option("--log", a.log, "Also write the event log");
}

int run_simulate(SimulateArgs a, std::ostream& out) {
  const auto bundle = study::load_bundle(a.bundle);
  a.opts.policy = *study::parse_policy(a.policy);
  if (!a.cohort.empty()) a.opts.cohort = parse_cohort(a.cohort);
  const auto sim = study::simulate(bundle, a.opts);
  if (!a.log.empty()) write_text(a.log, sim.log);
  if (a.out.empty()) {
    out << sim.export_jsonl;
  } else {
    write_text(a.out, sim.export_jsonl);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const ServeHook* hook) {
  CLI::App app("Facial expression recognition explanations and trust study toolkit", "ferx");
  app.require_subcommand(1);
  TrainArgs train;
  ExplainArgs explain;
  BundleArgs bundle;
  ServeArgs serve;
  EvaluateArgs evaluate;
  SimulateArgs simulate;
  add_train(app, train);
  add_explain(app, explain);
  add_bundle(app, bundle);
  add_serve(app, serve);
  add_evaluate(app, evaluate);
  add_simulate(app, simulate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "see: ferx " << sub->get_name() << " --help\n";
    }
    return kExitInvalid;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "train") return run_train(train, out);
    if (cmd == "explain") return run_explain(explain, out);
    if (cmd == "bundle") return run_bundle(bundle, out, err);
    if (cmd == "serve") return run_serve(serve, out, hook);
    if (cmd == "evaluate") return run_evaluate(evaluate, out);
    return run_simulate(simulate, out);
  } catch (const imaging::PnmError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == imaging::PnmErrc::io_error ? kExitIo : kExitInvalid;
  } catch (const nn::WeightFileError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == nn::WeightFileErrc::io_error ? kExitIo : kExitInvalid;
  } catch (const study::StudyError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == study::StudyErrc::corrupt_log ? kExitInvalid : kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace ferx::cli
