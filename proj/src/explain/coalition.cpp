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

#include "ferx/explain/coalition.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <thread>

namespace ferx::explain {

nn::Tensor<float> render_coalition(const nn::Tensor<float>& image, const SegmentMap& segments,
                                   const std::uint8_t* on, double baseline) {
  nn::Tensor<float> out = image;
  const Eigen::Index plane = segments.ids.size();
  auto& data = out.data();
  const auto fill = static_cast<float>(baseline);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (!on[segments.ids.data()[i % plane]]) data[i] = fill;
  }
  return out;
}

CoalitionScorer occlusion_scorer(const nn::Network& net, const nn::Tensor<float>& image, const SegmentMap& segments,
                                 int class_index, const OcclusionOptions& options) {
  const Eigen::Index plane = static_cast<Eigen::Index>(segments.width) * segments.height;
  if (image.size() % plane != 0 || image.size() != net.input_geometry().size()) {
    throw ExplainError("segment map " + std::to_string(segments.width) + "x" + std::to_string(segments.height) +
                       " does not fit image " + nn::shape_string(image.shape()));
  }
  if (class_index < 0 || class_index >= net.output_width()) {
    throw ExplainError("class index " + std::to_string(class_index) + " outside [0, " +
                       std::to_string(net.output_width()) + ")");
  }
  if (options.chunk < 1 || options.threads < 1) throw ExplainError("chunk and thread counts must be positive");
  // Validates shape and finiteness once, up front.
  (void)nn::input_column(net, image);
  auto shared_image = std::make_shared<const nn::Tensor<float>>(image);
  auto shared_segments = std::make_shared<const SegmentMap>(segments);
  return [&net, shared_image, shared_segments, class_index, options](const CoalitionMatrix& z) {
    if (z.cols() != shared_segments->count) {
      throw ExplainError("coalition width " + std::to_string(z.cols()) + " does not match " +
                         std::to_string(shared_segments->count) + " segments");
    }
    const Eigen::Index n = z.rows();
    Eigen::VectorXd out(n);
    const Eigen::Index chunks = (n + options.chunk - 1) / options.chunk;
    auto run_chunk = [&](Eigen::Index c) {
      const Eigen::Index begin = c * options.chunk;
      const Eigen::Index end = std::min(n, begin + options.chunk);
      nn::Matrix<float> batch(shared_image->size(), end - begin);
      for (Eigen::Index r = begin; r < end; ++r) {
        batch.col(r - begin) =
            render_coalition(*shared_image, *shared_segments, z.row(r).data(), options.baseline).data();
      }
      out.segment(begin, end - begin) = nn::class_probabilities(net, batch, class_index);
    };
    const int threads = static_cast<int>(std::min<Eigen::Index>(options.threads, chunks));
    if (threads <= 1) {
      for (Eigen::Index c = 0; c < chunks; ++c) run_chunk(c);
      return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (Eigen::Index c = t; c < chunks; c += threads) run_chunk(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return out;
  };
}

}  // namespace ferx::explain
