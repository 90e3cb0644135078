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

#include "ferx/pipeline/models.hpp"

#include "ferx/nn/synthetic.hpp"
#include "ferx/nn/weights_io.hpp"

namespace ferx::pipeline {

ModelPair train_models(const TrainOptions& options, TrainSummary* summary, std::ostream* log) {
  const auto& ref = options.reference;
  const auto images = nn::make_blob_dataset(nn::kEmotionClasses, options.images_per_class, ref.height, ref.width,
                                            mix_seed(options.seed, 1));
  nn::TrainConfig fer_cfg = options.fer;
  fer_cfg.seed = mix_seed(options.seed, 2);
  auto fer = nn::train(nn::make_reference_network(ref, mix_seed(options.seed, 3)), images, fer_cfg);
  if (log) {
    for (const auto& e : fer.trace) *log << "fer epoch " << e.epoch << " loss " << e.loss << " acc " << e.accuracy << "\n";
  }
  nn::validate_reference(fer.network);

  const auto fau_data = nn::make_fau_dataset(fer.network, images);
  nn::TrainConfig fau_cfg = options.fau;
  fau_cfg.seed = mix_seed(options.seed, 4);
  const nn::FauHead init = nn::make_fau_head(options.fau_hidden, mix_seed(options.seed, 5));
  auto fau = nn::train(init.network(), fau_data, fau_cfg);
  if (log) {
    for (const auto& e : fau.trace) *log << "fau epoch " << e.epoch << " loss " << e.loss << " acc " << e.accuracy << "\n";
  }
  if (summary) {
    summary->fer_accuracy = nn::accuracy(fer.network, images);
    summary->fau_accuracy = nn::accuracy(fau.network, fau_data);
  }
  return {std::move(fer.network), nn::FauHead(std::move(fau.network))};
}

void save_models(const ModelPair& models, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw nn::WeightFileError(nn::WeightFileErrc::io_error, "cannot create " + dir.string());
  nn::save_weights(models.fer, dir / kFerWeightsFile);
  if (models.fau) nn::save_weights(models.fau->network(), dir / kFauWeightsFile);
}

ModelPair load_models(const std::filesystem::path& dir, bool require_fau) {
  nn::Network fer = nn::load_weights(dir / kFerWeightsFile);
  nn::validate_reference(fer);
  std::optional<nn::FauHead> fau;
  if (require_fau || std::filesystem::exists(dir / kFauWeightsFile)) {
    fau.emplace(nn::load_weights(dir / kFauWeightsFile));
  }
  return {std::move(fer), std::move(fau)};
}

}  // namespace ferx::pipeline
