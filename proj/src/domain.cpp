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

#include "qgen/domain.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qgen/common.hpp"

namespace qgen {
namespace {

constexpr TileMask ColumnMask(int col) {
  TileMask m = 0;
  for (int r = 0; r < kGridSize; ++r) m |= Location::FromRowCol(r, col).bit();
  return m;
}

constexpr TileMask kFirstColumn = ColumnMask(0);
constexpr TileMask kLastColumn = ColumnMask(kGridSize - 1);

// Tiles sharing an edge with any tile of `m`, plus `m` itself.
constexpr TileMask Dilate(TileMask m) {
  TileMask out = m;
  out |= (m & ~kLastColumn) << 1;
  out |= (m & ~kFirstColumn) >> 1;
  out |= m << kGridSize;
  out |= m >> kGridSize;
  return out & kAllTiles;
}

std::vector<ShipPlacement> BuildAllPlacements() {
  std::vector<ShipPlacement> all;
  for (int size = kMinShipSize; size <= kMaxShipSize; ++size) {
    for (const auto& p : EnumeratePlacements(size)) {
      all.push_back(p);
      all.back().code = static_cast<int>(all.size()) - 1;
    }
  }
  return all;
}

}  // namespace

std::string_view ColorName(Color c) {
  switch (c) {
    case Color::kWater:
      return "Water";
    case Color::kBlue:
      return "Blue";
    case Color::kRed:
      return "Red";
    case Color::kPurple:
      return "Purple";
  }
  return "?";
}

std::optional<Color> ParseColorName(std::string_view text) {
  std::string lower(text);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "water") return Color::kWater;
  if (lower == "blue") return Color::kBlue;
  if (lower == "red") return Color::kRed;
  if (lower == "purple") return Color::kPurple;
  return std::nullopt;
}

char ColorCode(Color c) { return "WBRP"[static_cast<int>(c)]; }

std::string_view OrientationName(Orientation o) {
  return o == Orientation::kHorizontal ? "H" : "V";
}

std::string Location::ToString() const {
  std::string s;
  s += static_cast<char>('1' + row());
  s += static_cast<char>('A' + col());
  return s;
}

std::optional<Location> Location::Parse(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  const int row = text[0] - '1';
  const int col = std::toupper(static_cast<unsigned char>(text[1])) - 'A';
  if (row < 0 || row >= kGridSize || col < 0 || col >= kGridSize) return std::nullopt;
  return FromRowCol(row, col);
}

std::vector<ShipPlacement> EnumeratePlacements(int size) {
  if (size < kMinShipSize || size > kMaxShipSize) {
    throw std::invalid_argument("ship size must be in [2, 4], got " + std::to_string(size));
  }
  std::vector<ShipPlacement> out;
  for (Orientation o : {Orientation::kHorizontal, Orientation::kVertical}) {
    const int dr = o == Orientation::kVertical ? 1 : 0;
    const int dc = o == Orientation::kHorizontal ? 1 : 0;
    for (int r = 0; r < kGridSize; ++r) {
      for (int c = 0; c < kGridSize; ++c) {
        if (r + dr * (size - 1) >= kGridSize || c + dc * (size - 1) >= kGridSize) continue;
        ShipPlacement p;
        p.size = size;
        p.orientation = o;
        p.anchor = Location::FromRowCol(r, c);
        for (int k = 0; k < size; ++k) p.mask |= Location::FromRowCol(r + dr * k, c + dc * k).bit();
        out.push_back(p);
      }
    }
  }
  return out;
}

const std::vector<ShipPlacement>& AllPlacements() {
  static const std::vector<ShipPlacement> all = BuildAllPlacements();
  return all;
}

Board::Board(const ShipPlacement& blue, const ShipPlacement& red, const ShipPlacement& purple) {
  const std::array<const ShipPlacement*, kNumShips> ships = {&blue, &red, &purple};
  for (int i = 0; i < kNumShips; ++i) {
    if (ships[i]->code < 0) throw std::invalid_argument("placement has no code");
    codes_[i] = ships[i]->code;
    masks_[i] = ships[i]->mask;
  }
  if ((masks_[0] & masks_[1]) || (masks_[0] & masks_[2]) || (masks_[1] & masks_[2])) {
    throw std::invalid_argument("ships overlap");
  }
}

Board Board::FromTiles(const std::array<Color, kNumTiles>& tiles) {
  std::array<const ShipPlacement*, kNumShips> found{};
  for (Color c : kShipColors) {
    TileMask m = 0;
    for (int i = 0; i < kNumTiles; ++i) {
      if (tiles[i] == c) m |= TileMask{1} << i;
    }
    for (const auto& p : AllPlacements()) {
      if (p.mask == m) found[ShipIndex(c)] = &p;
    }
    if (found[ShipIndex(c)] == nullptr) {
      throw std::invalid_argument(std::string(ColorName(c)) +
                                  " tiles do not form a single ship of length 2-4");
    }
  }
  return Board(*found[0], *found[1], *found[2]);
}

const ShipPlacement& Board::ship(Color c) const {
  return AllPlacements()[codes_[ShipIndex(c)]];
}

Color Board::ColorAt(Location loc) const {
  const TileMask b = loc.bit();
  for (Color c : kShipColors) {
    if (masks_[ShipIndex(c)] & b) return c;
  }
  return Color::kWater;
}

bool Board::Touching(Color a, Color b) const {
  return (Dilate(ShipMask(a)) & ShipMask(b)) != 0;
}

std::array<int, kNumShips> Board::SizeTriple() const {
  return {ShipSize(Color::kBlue), ShipSize(Color::kRed), ShipSize(Color::kPurple)};
}

std::string Board::ToString() const {
  std::string s;
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) s += ColorCode(ColorAt(Location::FromRowCol(r, c)));
    s += '\n';
  }
  return s;
}

std::vector<Board> EnumerateHypotheses() {
  const auto& all = AllPlacements();
  std::vector<Board> boards;
  for (const auto& blue : all) {
    for (const auto& red : all) {
      if (blue.mask & red.mask) continue;
      for (const auto& purple : all) {
        if ((blue.mask | red.mask) & purple.mask) continue;
        boards.emplace_back(blue, red, purple);
      }
    }
  }
  // Nested loops over ascending codes already yield canonical order.
  return boards;
}

const std::vector<Board>& AllHypotheses() {
  static const std::vector<Board> all = EnumerateHypotheses();
  return all;
}

Context::Context(std::string id, const std::array<Tile, kNumTiles>& revealed)
    : id_(std::move(id)), revealed_(revealed) {
  for (int i = 0; i < kNumTiles; ++i) {
    if (revealed_[i] == Tile::kHidden) continue;
    revealed_masks_[static_cast<int>(revealed_[i])] |= TileMask{1} << i;
    revealed_any_ |= TileMask{1} << i;
  }
}

int Context::NumRevealed() const { return std::popcount(revealed_any_); }

bool Context::Consistent(const Board& board) const {
  for (int c = 0; c < 4; ++c) {
    const TileMask want = revealed_masks_[c];
    if ((board.ColorMask(static_cast<Color>(c)) & revealed_any_) != want) return false;
  }
  return true;
}

std::string Context::ToString() const {
  std::string s;
  for (int i = 0; i < kNumTiles; ++i) {
    s += revealed_[i] == Tile::kHidden ? '?' : ColorCode(static_cast<Color>(revealed_[i]));
    if (i % kGridSize == kGridSize - 1) s += '\n';
  }
  return s;
}

Belief Prior(std::span<const Board> boards) {
  if (boards.empty()) throw std::invalid_argument("prior over an empty board list");
  std::map<std::array<int, kNumShips>, std::size_t> per_triple;
  for (const auto& b : boards) ++per_triple[b.SizeTriple()];
  const double triple_mass = 1.0 / static_cast<double>(per_triple.size());
  Belief belief;
  belief.support.assign(boards.begin(), boards.end());
  belief.weights.reserve(boards.size());
  for (const auto& b : boards) {
    belief.weights.push_back(triple_mass / static_cast<double>(per_triple[b.SizeTriple()]));
  }
  return belief;
}

Belief Condition(const Belief& belief, const Context& context) {
  Belief out;
  double total = 0.0;
  for (std::size_t i = 0; i < belief.support.size(); ++i) {
    if (!context.Consistent(belief.support[i])) continue;
    out.support.push_back(belief.support[i]);
    out.weights.push_back(belief.weights[i]);
    total += belief.weights[i];
  }
  if (out.support.empty() || !(total > 0.0)) {
    throw InconsistentContextError("no hypothesis is consistent with context '" +
                                   context.id() + "'");
  }
  for (auto& w : out.weights) w /= total;
  return out;
}

double Entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

double Entropy(const Belief& belief) { return Entropy(belief.weights); }

const Belief& PriorBelief() {
  static const Belief prior = Prior(AllHypotheses());
  return prior;
}

}  // namespace qgen
