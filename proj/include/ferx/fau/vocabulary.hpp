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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ferx/nn/fau_head.hpp"

namespace ferx::fau {

inline constexpr int kLandmarkCount = 68;

class VocabularyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Topology { open, closed };

struct FauEntry {
  std::string code;    // "AU1"
  std::string name;    // "Inner Brow Raiser"
  std::string phrase;  // "Inner Brow Raised"
  Topology topology = Topology::open;
  // One polyline per stroke, as indices into the 68-point scheme.
  std::vector<std::vector<int>> strokes;

  bool operator==(const FauEntry&) const = default;
};

// Entry k describes output k of the FAU head.
class FauVocabulary {
 public:
  explicit FauVocabulary(std::vector<FauEntry> entries);

  const std::vector<FauEntry>& entries() const { return entries_; }
  const FauEntry& operator[](int k) const { return entries_[k]; }

  bool operator==(const FauVocabulary&) const = default;

 private:
  std::vector<FauEntry> entries_;
};

// Tab-separated, one AU per line: code, name, phrase, topology ("open" or
// "closed"), landmark indices. Indices are comma separated; ';' starts a new
// stroke. Blank lines and lines starting with '#' are skipped.
FauVocabulary parse_vocabulary(std::string_view text);
FauVocabulary load_vocabulary(const std::filesystem::path& path);
std::string serialize_vocabulary(const FauVocabulary& vocab);

// AU1 AU2 AU4 AU5 AU6 AU7 AU9 AU10 AU12 AU15 AU17 AU20 AU23 AU25 AU26 over
// the iBUG 68-point layout.
const FauVocabulary& default_vocabulary();
std::string_view default_vocabulary_text();

}  // namespace ferx::fau
