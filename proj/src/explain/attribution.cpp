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

#include "ferx/explain/attribution.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace ferx::explain {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::lime: return "LIME";
    case Method::shap: return "SHAP";
    case Method::salmap: return "SALMAP";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) {
  for (const Method m : {Method::lime, Method::shap, Method::salmap}) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view scope_name(Scope s) { return s == Scope::segment ? "segment" : "pixel"; }

bool Attribution::operator==(const Attribution& o) const {
  return method == o.method && scope == o.scope && class_index == o.class_index && width == o.width &&
         height == o.height && seed == o.seed && config == o.config && scores.size() == o.scores.size() &&
         scores == o.scores;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string serialize_attribution(const Attribution& a) {
  std::string out = "ferx-attribution 1\n";
  out += "method " + std::string(method_name(a.method)) + "\n";
  out += "class " + std::to_string(a.class_index) + "\n";
  out += "scope " + std::string(scope_name(a.scope)) + "\n";
  out += "seed " + std::to_string(a.seed) + "\n";
  out += "width " + std::to_string(a.width) + "\n";
  out += "height " + std::to_string(a.height) + "\n";
  for (const auto& [k, v] : a.config) out += "config " + k + " " + v + "\n";
  out += "count " + std::to_string(a.scores.size()) + "\n";
  out += "scores";
  for (Eigen::Index i = 0; i < a.scores.size(); ++i) out += " " + format_real(a.scores[i]);
  out += "\n";
  return out;
}

namespace {

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ExplainError(std::string("bad ") + what + ": " + s);
  return v;
}

}  // namespace

Attribution parse_attribution(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "ferx-attribution 1") throw ExplainError("not an attribution record");
  Attribution a;
  auto field = [&](const char* key) {
    if (!std::getline(in, line)) throw ExplainError(std::string("missing ") + key);
    const std::string prefix = std::string(key) + " ";
    if (line.rfind(prefix, 0) != 0) throw ExplainError(std::string("expected ") + key + ", got: " + line);
    return line.substr(prefix.size());
  };
  const auto m = parse_method(field("method"));
  if (!m) throw ExplainError("unknown method");
  a.method = *m;
  a.class_index = parse_number<int>(field("class"), "class");
  const std::string scope = field("scope");
  if (scope == "segment") {
    a.scope = Scope::segment;
  } else if (scope == "pixel") {
    a.scope = Scope::pixel;
  } else {
    throw ExplainError("unknown scope " + scope);
  }
  a.seed = parse_number<std::uint64_t>(field("seed"), "seed");
  a.width = parse_number<int>(field("width"), "width");
  a.height = parse_number<int>(field("height"), "height");
  for (;;) {
    if (!std::getline(in, line)) throw ExplainError("missing count");
    if (line.rfind("config ", 0) != 0) break;
    const std::string rest = line.substr(7);
    const auto sp = rest.find(' ');
    if (sp == std::string::npos) throw ExplainError("bad config line: " + line);
    a.config.emplace_back(rest.substr(0, sp), rest.substr(sp + 1));
  }
  if (line.rfind("count ", 0) != 0) throw ExplainError("expected count, got: " + line);
  const auto count = parse_number<long>(line.substr(6), "count");
  const std::string scores = field("scores");
  std::istringstream ss(scores);
  std::vector<double> values;
  std::string tok;
  while (ss >> tok) values.push_back(parse_number<double>(tok, "score"));
  if (static_cast<long>(values.size()) != count) throw ExplainError("score count does not match header");
  a.scores = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return a;
}

imaging::BinaryMask attribution_to_mask(const Attribution& a, const SegmentMap* segments, double coverage) {
  if (a.scores.size() == 0) throw ExplainError("empty attribution");
  if (!(coverage > 0.0 && coverage < 1.0)) throw ExplainError("coverage must lie in (0, 1)");
  if (!a.scores.allFinite()) throw ExplainError("attribution has non-finite scores");
  const Eigen::Index units = a.scores.size();
  std::vector<long> area;
  int width = a.width;
  int height = a.height;
  if (a.scope == Scope::segment) {
    if (segments == nullptr) throw ExplainError("segment attribution needs its segment map");
    if (segments->count != units) {
      throw ExplainError(std::to_string(units) + " scores for " + std::to_string(segments->count) + " segments");
    }
    width = segments->width;
    height = segments->height;
    area = segments->areas();
  } else {
    if (static_cast<Eigen::Index>(width) * height != units) {
      throw ExplainError(std::to_string(units) + " pixel scores for a " + std::to_string(width) + "x" +
                         std::to_string(height) + " image");
    }
    area.assign(units, 1);
  }
  std::vector<Eigen::Index> order(units);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a.scores[i] > a.scores[j]; });
  const double total = static_cast<double>(width) * height;
  std::vector<bool> chosen(units, false);
  long marked = 0;
  for (const Eigen::Index u : order) {
    chosen[u] = true;
    marked += area[u];
    if (marked / total >= coverage) break;
  }
  imaging::BinaryMask mask(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Index unit = a.scope == Scope::segment ? segments->ids(y, x) : static_cast<Eigen::Index>(y) * width + x;
      mask(y, x) = chosen[unit];
    }
  }
  return mask;
}

}  // namespace ferx::explain
