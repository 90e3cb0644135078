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

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ferx/explain/segments.hpp"
#include "ferx/imaging/image.hpp"

namespace ferx::explain {

enum class Method { lime, shap, salmap };
enum class Scope { segment, pixel };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view s);
std::string_view scope_name(Scope s);

struct Attribution {
  Method method = Method::lime;
  Scope scope = Scope::segment;
  int class_index = 0;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  // Config echo, in the order the explainer reports it.
  std::vector<std::pair<std::string, std::string>> config;
  Eigen::VectorXd scores;

  bool operator==(const Attribution& other) const;
};

// "%.9g" rendering used by every text record.
std::string format_real(double v);

// Canonical text record: fixed field order, one field per line, scores
// space separated with 9 significant digits.
std::string serialize_attribution(const Attribution& a);
Attribution parse_attribution(std::string_view text);

// Marks the highest-scoring units until the marked pixel fraction first
// reaches coverage. Ties go to the lower unit index. Per-segment scores need
// the segment map; per-pixel scores ignore it.
imaging::BinaryMask attribution_to_mask(const Attribution& a, const SegmentMap* segments, double coverage);

}  // namespace ferx::explain
