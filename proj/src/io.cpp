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

#include "qgen/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "qgen/common.hpp"

namespace qgen {
namespace {

using nlohmann::json;

json ParseJson(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

// Six rows of six tile characters, '?' allowed only when `allow_hidden`.
std::array<Tile, kNumTiles> ParseGrid(const json& grid, bool allow_hidden) {
  if (!grid.is_array() || grid.size() != kGridSize) {
    throw SchemaError("grid must have " + std::to_string(kGridSize) + " rows");
  }
  std::array<Tile, kNumTiles> tiles;
  for (int r = 0; r < kGridSize; ++r) {
    std::string row;
    const json& jr = grid[r];
    if (jr.is_string()) {
      row = jr.get<std::string>();
    } else if (jr.is_array()) {
      for (const json& cell : jr) {
        if (!cell.is_string() || cell.get<std::string>().size() != 1) {
          throw SchemaError("grid row " + std::to_string(r + 1) + ": cells must be 1-char strings");
        }
        row += cell.get<std::string>();
      }
    } else {
      throw SchemaError("grid row " + std::to_string(r + 1) + " must be a string or array");
    }
    if (row.size() != kGridSize) {
      throw SchemaError("grid row " + std::to_string(r + 1) + " must have 6 tiles");
    }
    for (int c = 0; c < kGridSize; ++c) {
      Tile t;
      switch (std::toupper(static_cast<unsigned char>(row[c]))) {
        case 'W': t = Tile::kWater; break;
        case 'B': t = Tile::kBlue; break;
        case 'R': t = Tile::kRed; break;
        case 'P': t = Tile::kPurple; break;
        case '?':
          if (!allow_hidden) throw SchemaError("board grid must be fully revealed");
          t = Tile::kHidden;
          break;
        default:
          throw SchemaError(std::string("unknown tile '") + row[c] + "' in row " +
                            std::to_string(r + 1));
      }
      tiles[Location::FromRowCol(r, c).index()] = t;
    }
  }
  return tiles;
}

std::string IdString(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw SchemaError("context id must be a string or integer");
}

bool IsInteger(const std::string& s) {
  return !s.empty() && s.size() < 10 &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool ContainsDraw(const Node& n) {
  if (n.op == Op::kDraw) return true;
  return std::any_of(n.args.begin(), n.args.end(), ContainsDraw);
}

std::string Hex(const unsigned char* data, unsigned int len) {
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(data[i]);
  return out.str();
}

}  // namespace

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

Context ParseContext(std::string_view json_text) {
  const json j = ParseJson(json_text, "context");
  if (!j.is_object() || !j.contains("id") || !j.contains("grid")) {
    throw SchemaError("context must be an object with \"id\" and \"grid\"");
  }
  Context ctx(IdString(j["id"]), ParseGrid(j["grid"], true));
  const auto& all = AllHypotheses();
  if (std::none_of(all.begin(), all.end(), [&](const Board& b) { return ctx.Consistent(b); })) {
    throw InconsistentContextError("context " + ctx.id() + " is consistent with no board");
  }
  return ctx;
}

Context LoadContext(const std::filesystem::path& path) {
  try {
    return ParseContext(ReadFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<Context> LoadContextDir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<Context> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(LoadContext(entry.path()));
    }
  }
  const bool numeric = std::all_of(out.begin(), out.end(), [](const Context& c) { return IsInteger(c.id()); });
  std::sort(out.begin(), out.end(), [&](const Context& a, const Context& b) {
    if (numeric) return std::stoll(a.id()) < std::stoll(b.id());
    return a.id() < b.id();
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].id() == out[i - 1].id()) throw SchemaError("duplicate context id " + out[i].id());
  }
  return out;
}

Board ParseBoard(std::string_view json_text) {
  const json j = ParseJson(json_text, "board");
  const json& grid = j.is_object() && j.contains("grid") ? j["grid"] : j;
  const auto tiles = ParseGrid(grid, false);
  std::array<Color, kNumTiles> colors;
  for (int i = 0; i < kNumTiles; ++i) colors[i] = static_cast<Color>(static_cast<int>(tiles[i]));
  try {
    return Board::FromTiles(colors);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("illegal board: ") + e.what());
  }
}

Board LoadBoard(const std::filesystem::path& path) {
  try {
    return ParseBoard(ReadFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string DatasetReport::ToString() const {
  std::ostringstream out;
  out << total << " questions across " << per_context.size() << " contexts\n";
  for (const auto& [id, n] : per_context) out << "  context " << id << ": " << n << "\n";
  out << "rejected (draw): " << draw_rejected << "\n";
  out << "rejected (other): " << failures.size() << "\n";
  for (const auto& f : failures) out << "  line " << f.line << ": " << f.message << "\n";
  return out.str();
}

Dataset ParseDataset(std::istream& in) {
  Dataset ds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("dataset line " + std::to_string(lineno) + ": invalid JSON");
    }
    if (!j.is_object() || !j.contains("context") || !j.contains("program") ||
        !j["program"].is_string()) {
      throw SchemaError("dataset line " + std::to_string(lineno) +
                        ": expected {\"context\", \"program\"}");
    }
    DatasetEntry e;
    e.context = IdString(j["context"]);
    e.text = j["program"].get<std::string>();
    try {
      Node root = ParseExpression(e.text);
      if (ContainsDraw(root)) {
        ++ds.report.draw_rejected;
        continue;
      }
      e.program = Parse(e.text);
    } catch (const Error& err) {
      ds.report.failures.push_back({lineno, err.what()});
      continue;
    }
    ++ds.report.per_context[e.context];
    ++ds.report.total;
    ds.entries.push_back(std::move(e));
  }
  return ds;
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  return ParseDataset(in);
}

std::string WeightsToJson(const WeightsFile& f) {
  json theta = json::object();
  for (const auto& [name, v] : f.weights.ToMap()) theta[name] = v;
  json j;
  j["variant"] = std::string(VariantName(f.weights.variant));
  j["theta"] = theta;
  j["metadata"] = {{"seed", f.seed},
                   {"pool_size", f.pool_size},
                   {"iterations", f.iterations},
                   {"learning_rate", f.learning_rate},
                   {"entropy_base", f.entropy_base},
                   {"contexts", f.contexts}};
  return j.dump(2) + "\n";
}

WeightsFile WeightsFromJson(std::string_view json_text) {
  const json j = ParseJson(json_text, "weights");
  try {
    WeightsFile f;
    const Variant v = ParseVariant(j.at("variant").get<std::string>());
    f.weights = Weights::FromMap(j.at("theta").get<std::map<std::string, double>>(), v);
    if (j.contains("metadata")) {
      const json& m = j["metadata"];
      f.seed = m.value("seed", std::uint64_t{0});
      f.pool_size = m.value("pool_size", std::size_t{0});
      f.iterations = m.value("iterations", 0);
      f.learning_rate = m.value("learning_rate", 0.0);
      f.entropy_base = m.value("entropy_base", std::string("bits"));
      f.contexts = m.value("contexts", std::vector<std::string>{});
    }
    if (f.entropy_base != "bits") {
      throw SchemaError("weights were fit with entropy base '" + f.entropy_base + "', expected bits");
    }
    return f;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("weights: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("weights: ") + e.what());
  }
}

std::string Sha1Hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  return Hex(md, len);
}

std::string GitBlobDigest(std::string_view bytes) {
  std::string buf = "blob " + std::to_string(bytes.size());
  buf.push_back('\0');
  buf.append(bytes);
  return Sha1Hex(buf);
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace qgen
