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

#include "ferx/pipeline/explain.hpp"

#include "ferx/explain/lime.hpp"
#include "ferx/explain/saliency.hpp"
#include "ferx/explain/segments.hpp"
#include "ferx/explain/shap.hpp"
#include "ferx/fau/defaults.hpp"
#include "ferx/imaging/compose.hpp"
#include "ferx/imaging/pnm.hpp"

namespace ferx::pipeline {

namespace {

constexpr std::array<std::string_view, 6> kMethodNames = {"lime", "shap", "salmap", "fau-t", "fau-v", "fau-vt"};

std::vector<std::uint8_t> to_bytes(std::string_view s) { return {s.begin(), s.end()}; }

}  // namespace

std::string_view method_name(ExplainMethod m) { return kMethodNames[static_cast<int>(m)]; }

std::optional<ExplainMethod> parse_method(std::string_view s) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (kMethodNames[i] == s) return static_cast<ExplainMethod>(i);
  }
  return std::nullopt;
}

std::optional<ExplainMethod> method_for_cohort(Cohort c) {
  switch (c) {
    case Cohort::cai: return std::nullopt;
    case Cohort::lime: return ExplainMethod::lime;
    case Cohort::salmap: return ExplainMethod::salmap;
    case Cohort::shap: return ExplainMethod::shap;
    case Cohort::fau_t: return ExplainMethod::fau_t;
    case Cohort::fau_v: return ExplainMethod::fau_v;
    case Cohort::fau_vt: return ExplainMethod::fau_vt;
  }
  return std::nullopt;
}

bool needs_landmarks(ExplainMethod m) { return m == ExplainMethod::fau_v || m == ExplainMethod::fau_vt; }

bool needs_fau_head(ExplainMethod m) {
  return m == ExplainMethod::fau_t || m == ExplainMethod::fau_v || m == ExplainMethod::fau_vt;
}

nn::Tensor<float> image_tensor(const imaging::GrayImage& image) {
  nn::Vector<float> data(image.size());
  for (Eigen::Index y = 0; y < image.rows(); ++y) {
    for (Eigen::Index x = 0; x < image.cols(); ++x) {
      data[y * image.cols() + x] = static_cast<float>(image(y, x)) / 255.0f;
    }
  }
  return nn::Tensor<float>({static_cast<int>(image.rows()), static_cast<int>(image.cols())}, std::move(data));
}

imaging::GrayImage mask_image(const imaging::BinaryMask& mask) {
  return mask.select(imaging::GrayImage::Constant(mask.rows(), mask.cols(), 255),
                     imaging::GrayImage::Zero(mask.rows(), mask.cols()));
}

Explanation explain_image(const ModelPair& models, const fau::FauVocabulary& vocab, const imaging::GrayImage& image,
                          const fau::LandmarkSet* landmarks, ExplainMethod method, const ExplainOptions& options,
                          int class_index) {
  const int h = static_cast<int>(image.rows());
  const int w = static_cast<int>(image.cols());
  if (needs_landmarks(method) && landmarks == nullptr) {
    throw fau::LandmarkError(std::string(method_name(method)) + " needs landmarks");
  }
  if (needs_fau_head(method) && !models.fau) {
    throw PipelineError(std::string(method_name(method)) + " needs a FAU head");
  }
  const nn::Tensor<float> input = image_tensor(image);
  const nn::EmotionPrediction pred = nn::forward(models.fer, input);

  Explanation out;
  out.method = method;
  out.class_index = class_index < 0 ? pred.argmax_class : class_index;
  if (out.class_index >= models.fer.output_width()) {
    throw PipelineError("class " + std::to_string(out.class_index) + " outside the model's outputs");
  }

  imaging::Rgb color = imaging::kExplainerHighlight;
  switch (method) {
    case ExplainMethod::lime:
    case ExplainMethod::shap: {
      const explain::SegmentMap segments = explain::segment_grid(h, w, options.cell_size);
      if (method == ExplainMethod::lime) {
        explain::LimeConfig cfg;
        cfg.num_samples = options.lime_samples;
        cfg.baseline = options.baseline;
        cfg.seed = options.seed;
        cfg.threads = options.threads;
        out.attribution = explain::lime_explain(models.fer, input, segments, out.class_index, cfg);
      } else {
        explain::ShapConfig cfg;
        cfg.num_samples = options.shap_samples;
        cfg.baseline = options.baseline;
        cfg.seed = options.seed;
        cfg.threads = options.threads;
        out.attribution = explain::kernel_shap(models.fer, input, segments, out.class_index, cfg);
      }
      out.mask = explain::attribution_to_mask(*out.attribution, &segments, options.coverage);
      break;
    }
    case ExplainMethod::salmap:
      out.attribution = explain::saliency(models.fer, input, out.class_index);
      out.attribution->seed = options.seed;
      out.mask = explain::attribution_to_mask(*out.attribution, nullptr, options.coverage);
      break;
    case ExplainMethod::fau_t:
    case ExplainMethod::fau_v:
    case ExplainMethod::fau_vt: {
      const auto act = nn::predict_faus(*models.fau, pred);
      const fau::Modality mode = method == ExplainMethod::fau_t   ? fau::Modality::text
                                 : method == ExplainMethod::fau_v ? fau::Modality::visual
                                                                  : fau::Modality::visual_text;
      auto d = fau::defaults_explanation(act, landmarks, vocab, mode, w, h);
      out.phrases = std::move(d.phrases);
      out.mask = std::move(d.mask);
      color = imaging::kFauHighlight;
      break;
    }
  }
  if (out.mask) {
    out.overlay = imaging::overlay(image, *out.mask, color, options.alpha);
    out.composite = imaging::side_by_side(imaging::to_rgb(image), *out.overlay, options.gutter);
  }
  return out;
}

std::vector<std::string> write_explanation(const Explanation& e, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw imaging::PnmError(imaging::PnmErrc::io_error, "cannot create " + dir.string());
  std::vector<std::string> written;
  auto put = [&](const char* name, const std::vector<std::uint8_t>& bytes) {
    imaging::write_file_bytes(dir / name, bytes);
    written.emplace_back(name);
  };
  if (e.attribution) put("attribution.txt", to_bytes(explain::serialize_attribution(*e.attribution)));
  if (e.mask) put("mask.pgm", imaging::write_pnm(mask_image(*e.mask)));
  if (e.overlay) put("overlay.ppm", imaging::write_pnm(*e.overlay));
  if (e.composite) put("composite.ppm", imaging::write_pnm(*e.composite));
  if (e.phrases) {
    std::string text;
    for (const auto& p : *e.phrases) text += p + "\n";
    put("phrases.txt", to_bytes(text));
  }
  return written;
}

}  // namespace ferx::pipeline
