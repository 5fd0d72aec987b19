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

#ifndef QGEN_TESTS_TEST_UTIL_HPP_
#define QGEN_TESTS_TEST_UTIL_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgen/domain.hpp"

namespace qgen::testing {

inline std::array<Tile, kNumTiles> TilesFromRows(const std::vector<std::string>& rows) {
  if (rows.size() != kGridSize) throw std::invalid_argument("need 6 rows");
  std::array<Tile, kNumTiles> t;
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      Tile v = Tile::kHidden;
      switch (rows[r].at(c)) {
        case 'W': v = Tile::kWater; break;
        case 'B': v = Tile::kBlue; break;
        case 'R': v = Tile::kRed; break;
        case 'P': v = Tile::kPurple; break;
        case '?': v = Tile::kHidden; break;
        default: throw std::invalid_argument("bad tile");
      }
      t[r * kGridSize + c] = v;
    }
  }
  return t;
}

inline Board BoardFromRows(const std::vector<std::string>& rows) {
  const auto t = TilesFromRows(rows);
  std::array<Color, kNumTiles> c;
  for (int i = 0; i < kNumTiles; ++i) c[i] = static_cast<Color>(static_cast<int>(t[i]));
  return Board::FromTiles(c);
}

inline Context ContextFromRows(const std::string& id, const std::vector<std::string>& rows) {
  return Context(id, TilesFromRows(rows));
}

// Blue 1A-1C, Red 2E-5E, Purple 4A-4B. No ships touch.
inline Board BoardA() {
  return BoardFromRows({"BBBWWW",
                        "WWWWRW",
                        "WWWWRW",
                        "PPWWRW",
                        "WWWWRW",
                        "WWWWWW"});
}

// Blue 1A-1B, Red 2A-2C, Purple 3C-5C. Blue/Red and Red/Purple touch.
inline Board BoardB() {
  return BoardFromRows({"BBWWWW",
                        "RRRWWW",
                        "WWPWWW",
                        "WWPWWW",
                        "WWPWWW",
                        "WWWWWW"});
}

// Most of the board revealed, leaving a few dozen consistent boards. Keeps
// exhaustive feature computations fast.
inline Context SmallContext() {
  return ContextFromRows("small", {"B???WW",
                                   "B?WWWW",
                                   "??WRRR",
                                   "?WWWWW",
                                   "?W?P??",
                                   "WW????"});
}

}  // namespace qgen::testing

#endif  // QGEN_TESTS_TEST_UTIL_HPP_
