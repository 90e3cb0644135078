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

#include "ferx/fau/vocabulary.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace ferx::fau {

namespace {

// Mirrors data/fau_vocabulary.tsv.
constexpr std::string_view kDefaultText =
    "# code\tname\tphrase\ttopology\tlandmarks\n"
    "AU1\tInner Brow Raiser\tInner Brow Raised\topen\t19,20,21;22,23,24\n"
    "AU2\tOuter Brow Raiser\tOuter Brow Raised\topen\t17,18,19;24,25,26\n"
    "AU4\tBrow Lowerer\tBrows Lowered\topen\t17,18,19,20,21;22,23,24,25,26\n"
    "AU5\tUpper Lid Raiser\tUpper Eyelids Raised\topen\t36,37,38,39;42,43,44,45\n"
    "AU6\tCheek Raiser\tCheeks Raised\topen\t1,2,3;13,14,15\n"
    "AU7\tLid Tightener\tEyelids Tightened\tclosed\t36,37,38,39,40,41;42,43,44,45,46,47\n"
    "AU9\tNose Wrinkler\tNose Wrinkled\topen\t27,28,29,30;31,32,33,34,35\n"
    "AU10\tUpper Lip Raiser\tUpper Lip Raised\topen\t48,49,50,51,52,53,54\n"
    "AU12\tLip Corner Puller\tLip Corners Pulled\topen\t59,48,49;53,54,55\n"
    "AU15\tLip Corner Depressor\tLip Corners Depressed\topen\t48,59,58;54,55,56\n"
    "AU17\tChin Raiser\tChin Raised\topen\t6,7,8,9,10\n"
    "AU20\tLip Stretcher\tLips Stretched\topen\t4,5,48;54,11,12\n"
    "AU23\tLip Tightener\tLips Tightened\tclosed\t48,49,50,51,52,53,54,55,56,57,58,59\n"
    "AU25\tLips Part\tLips Parted\tclosed\t60,61,62,63,64,65,66,67\n"
    "AU26\tJaw Drop\tJaw Dropped\topen\t4,5,6,7,8,9,10,11,12\n";

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

std::string where(int line) { return "vocabulary line " + std::to_string(line) + ": "; }

}  // namespace

FauVocabulary::FauVocabulary(std::vector<FauEntry> entries) : entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(nn::kFauCount)) {
    throw VocabularyError("vocabulary needs exactly " + std::to_string(nn::kFauCount) + " entries, got " +
                          std::to_string(entries_.size()));
  }
  std::set<std::string> codes;
  for (const FauEntry& e : entries_) {
    if (e.code.empty()) throw VocabularyError("empty AU code");
    if (!codes.insert(e.code).second) throw VocabularyError("duplicate AU code " + e.code);
    if (e.phrase.empty()) throw VocabularyError(e.code + " has an empty phrase");
    if (e.strokes.empty()) throw VocabularyError(e.code + " has no landmarks");
    for (const auto& stroke : e.strokes) {
      if (stroke.size() < 2) throw VocabularyError(e.code + " has a stroke with fewer than 2 landmarks");
      for (const int i : stroke) {
        if (i < 0 || i >= kLandmarkCount) {
          throw VocabularyError(e.code + " landmark index " + std::to_string(i) + " outside 0..67");
        }
      }
    }
  }
}

FauVocabulary parse_vocabulary(std::string_view text) {
  std::vector<FauEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw VocabularyError(where(number) + "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    }
    FauEntry e;
    e.code = fields[0];
    e.name = fields[1];
    e.phrase = fields[2];
    if (fields[3] == "open") {
      e.topology = Topology::open;
    } else if (fields[3] == "closed") {
      e.topology = Topology::closed;
    } else {
      throw VocabularyError(where(number) + "topology must be open or closed, got " + fields[3]);
    }
    for (const auto& stroke_text : split(fields[4], ';')) {
      std::vector<int> stroke;
      for (const auto& tok : split(stroke_text, ',')) {
        int v = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) {
          throw VocabularyError(where(number) + "bad landmark index '" + tok + "'");
        }
        stroke.push_back(v);
      }
      e.strokes.push_back(std::move(stroke));
    }
    entries.push_back(std::move(e));
  }
  try {
    return FauVocabulary(std::move(entries));
  } catch (const VocabularyError& e) {
    throw VocabularyError(std::string("invalid vocabulary: ") + e.what());
  }
}

FauVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw VocabularyError("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_vocabulary(text);
}

std::string serialize_vocabulary(const FauVocabulary& vocab) {
  std::string out = "# code\tname\tphrase\ttopology\tlandmarks\n";
  for (const FauEntry& e : vocab.entries()) {
    out += e.code + "\t" + e.name + "\t" + e.phrase + "\t" + (e.topology == Topology::open ? "open" : "closed") + "\t";
    for (std::size_t s = 0; s < e.strokes.size(); ++s) {
      if (s) out += ";";
      for (std::size_t i = 0; i < e.strokes[s].size(); ++i) {
        if (i) out += ",";
        out += std::to_string(e.strokes[s][i]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string_view default_vocabulary_text() { return kDefaultText; }

const FauVocabulary& default_vocabulary() {
  static const FauVocabulary vocab = parse_vocabulary(kDefaultText);
  return vocab;
}

}  // namespace ferx::fau
