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

// Battleship world model: a 6x6 grid holding one Blue, one Red and one Purple
// ship of length 2-4. Hypotheses are fully specified boards; contexts are
// partially revealed grids that condition a belief over the hypotheses.

#ifndef QGEN_DOMAIN_HPP_
#define QGEN_DOMAIN_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgen {

inline constexpr int kGridSize = 6;
inline constexpr int kNumTiles = kGridSize * kGridSize;
inline constexpr int kNumShips = 3;
inline constexpr int kMinShipSize = 2;
inline constexpr int kMaxShipSize = 4;

// Bit i of a TileMask is tile i in row-major order (bit 0 = 1A).
using TileMask = std::uint64_t;
inline constexpr TileMask kAllTiles = (TileMask{1} << kNumTiles) - 1;

enum class Color : std::uint8_t { kWater = 0, kBlue = 1, kRed = 2, kPurple = 3 };
enum class Orientation : std::uint8_t { kHorizontal = 0, kVertical = 1 };

inline constexpr std::array<Color, kNumShips> kShipColors = {
    Color::kBlue, Color::kRed, Color::kPurple};

inline constexpr bool IsShipColor(Color c) { return c != Color::kWater; }
// Index of a ship color into per-ship arrays (Blue=0, Red=1, Purple=2).
inline constexpr int ShipIndex(Color c) { return static_cast<int>(c) - 1; }

std::string_view ColorName(Color c);
std::optional<Color> ParseColorName(std::string_view text);
char ColorCode(Color c);  // 'W', 'B', 'R', 'P'
std::string_view OrientationName(Orientation o);

// A tile address. Row 1 is the top row, column A the leftmost.
class Location {
 public:
  constexpr Location() = default;
  constexpr explicit Location(int index) : index_(static_cast<std::uint8_t>(index)) {}
  static constexpr Location FromRowCol(int row, int col) {
    return Location(row * kGridSize + col);
  }

  constexpr int index() const { return index_; }
  constexpr int row() const { return index_ / kGridSize; }  // zero-based
  constexpr int col() const { return index_ % kGridSize; }  // zero-based
  constexpr TileMask bit() const { return TileMask{1} << index_; }

  // "1A" .. "6F".
  std::string ToString() const;
  // Accepts "3B" or "3b"; nullopt for anything else.
  static std::optional<Location> Parse(std::string_view text);

  friend constexpr auto operator<=>(Location, Location) = default;

 private:
  std::uint8_t index_ = 0;
};

// A color-agnostic ship position. `code` indexes AllPlacements().
struct ShipPlacement {
  int size = 0;
  Orientation orientation = Orientation::kHorizontal;
  Location anchor;  // top-left tile
  TileMask mask = 0;
  int code = -1;

  friend bool operator==(const ShipPlacement& a, const ShipPlacement& b) {
    return a.code == b.code;
  }
};

// Every in-bounds placement of a ship of `size` tiles, horizontal first, then
// vertical, anchors in row-major order. Throws std::invalid_argument unless
// size is in [2, 4].
std::vector<ShipPlacement> EnumeratePlacements(int size);

// The 144 placements of all sizes; the position in this table is the
// placement code used for canonical board encoding.
const std::vector<ShipPlacement>& AllPlacements();

// A fully specified world state. Canonically encoded as the placement codes of
// the (Blue, Red, Purple) ships; ordering and equality use that encoding.
class Board {
 public:
  Board() = default;
  // Throws std::invalid_argument if any two ships overlap.
  Board(const ShipPlacement& blue, const ShipPlacement& red,
        const ShipPlacement& purple);

  // Reconstructs a board from a fully revealed tile grid. Each ship color must
  // cover 2-4 collinear contiguous tiles. Throws std::invalid_argument.
  static Board FromTiles(const std::array<Color, kNumTiles>& tiles);

  const ShipPlacement& ship(Color c) const;
  TileMask ShipMask(Color c) const { return masks_[ShipIndex(c)]; }
  TileMask OccupiedMask() const { return masks_[0] | masks_[1] | masks_[2]; }
  TileMask ColorMask(Color c) const {
    return c == Color::kWater ? (kAllTiles & ~OccupiedMask()) : ShipMask(c);
  }
  Color ColorAt(Location loc) const;
  int ShipSize(Color c) const { return ship(c).size; }
  Orientation ShipOrientation(Color c) const { return ship(c).orientation; }
  // Ships share an edge (diagonal contact does not count).
  bool Touching(Color a, Color b) const;

  std::array<int, kNumShips> codes() const { return codes_; }
  std::array<int, kNumShips> SizeTriple() const;

  // Six lines of six characters from {W,B,R,P}.
  std::string ToString() const;

  friend bool operator==(const Board& a, const Board& b) { return a.codes_ == b.codes_; }
  friend auto operator<=>(const Board& a, const Board& b) { return a.codes_ <=> b.codes_; }

 private:
  std::array<int, kNumShips> codes_{};
  std::array<TileMask, kNumShips> masks_{};
};

// Every board with one ship per color, sizes independently in {2,3,4}, no
// overlaps. Sorted by canonical encoding, no duplicates.
std::vector<Board> EnumerateHypotheses();

// Shared, lazily built copy of EnumerateHypotheses().
const std::vector<Board>& AllHypotheses();

enum class Tile : std::int8_t { kHidden = -1, kWater = 0, kBlue = 1, kRed = 2, kPurple = 3 };

// A partially revealed grid.
class Context {
 public:
  Context() { revealed_.fill(Tile::kHidden); }
  Context(std::string id, const std::array<Tile, kNumTiles>& revealed);

  const std::string& id() const { return id_; }
  Tile At(Location loc) const { return revealed_[loc.index()]; }
  const std::array<Tile, kNumTiles>& tiles() const { return revealed_; }
  int NumRevealed() const;

  // True if the board shows the revealed color on every revealed tile.
  bool Consistent(const Board& board) const;

  // Rows of characters from {?,W,B,R,P}.
  std::string ToString() const;

 private:
  std::string id_;
  std::array<Tile, kNumTiles> revealed_;
  std::array<TileMask, 4> revealed_masks_{};  // indexed by Color
  TileMask revealed_any_ = 0;
};

// A probability distribution over boards.
struct Belief {
  std::vector<Board> support;
  std::vector<double> weights;

  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }
};

// p(h) = 1/T * 1/(boards sharing h's size triple), where T is the number of
// size triples present (27 for the full space). Throws std::invalid_argument
// on empty input.
Belief Prior(std::span<const Board> boards);

// Restricts to boards consistent with the context and renormalizes. Throws
// InconsistentContextError if nothing survives.
Belief Condition(const Belief& belief, const Context& context);

// Shannon entropy in bits.
double Entropy(const Belief& belief);
double Entropy(std::span<const double> weights);

// The unconditioned prior over AllHypotheses(), built once.
const Belief& PriorBelief();

}  // namespace qgen

#endif  // QGEN_DOMAIN_HPP_
