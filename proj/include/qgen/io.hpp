// Copyright 2026 The qgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats.
//
// Context / board (JSON):
//   {"id": "3", "grid": ["??W???", "?BB???", ...]}
// six rows top to bottom (row 1 first), one character per tile from
// {W,B,R,P,?}. "grid" may also be a 6x6 array of one-character strings.
// Boards use the same layout with no '?'.
//
// Dataset (JSON lines): {"context": "3", "program": "(size Blue)"} per line.
//
// Weights (JSON): {"variant": "full", "theta": {"eig": ..., ...},
//                  "metadata": {...}}

#ifndef QGEN_IO_HPP_
#define QGEN_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/domain.hpp"
#include "qgen/dsl.hpp"
#include "qgen/model.hpp"

namespace qgen {

std::string ReadFile(const std::filesystem::path& path);  // throws IoError
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Throws SchemaError on a malformed grid and InconsistentContextError if no
// hypothesis agrees with the revealed tiles.
Context ParseContext(std::string_view json_text);
Context LoadContext(const std::filesystem::path& path);

// Every *.json file in `dir`, sorted by id (numerically when ids are numbers).
std::vector<Context> LoadContextDir(const std::filesystem::path& dir);

// Throws SchemaError unless the grid is fully revealed and forms a legal board.
Board ParseBoard(std::string_view json_text);
Board LoadBoard(const std::filesystem::path& path);

struct DatasetEntry {
  std::string context;
  std::string text;  // as written in the file
  Program program;
};

struct DatasetFailure {
  int line;
  std::string message;
};

struct DatasetReport {
  std::map<std::string, int> per_context;
  int total = 0;
  int draw_rejected = 0;  // questions using the unsupported draw primitive
  std::vector<DatasetFailure> failures;  // other parse or type errors

  std::string ToString() const;
};

struct Dataset {
  std::vector<DatasetEntry> entries;
  DatasetReport report;
};

// Skips (and tallies) lines whose program does not parse or typecheck; throws
// SchemaError for lines that are not {"context", "program"} objects.
Dataset ParseDataset(std::istream& in);
Dataset LoadDataset(const std::filesystem::path& path);

struct WeightsFile {
  Weights weights;
  std::uint64_t seed = 0;
  std::size_t pool_size = 0;
  int iterations = 0;
  double learning_rate = 0.0;
  std::string entropy_base = "bits";
  std::vector<std::string> contexts;  // training contexts
};

std::string WeightsToJson(const WeightsFile& file);
WeightsFile WeightsFromJson(std::string_view json_text);  // throws SchemaError

// SHA-1 of "blob <size>\0<bytes>", hex encoded, as git computes object ids.
std::string GitBlobDigest(std::string_view bytes);
std::string Sha1Hex(std::string_view bytes);

// CSV field quoting per RFC 4180.
std::string CsvField(std::string_view s);

}  // namespace qgen

#endif  // QGEN_IO_HPP_
