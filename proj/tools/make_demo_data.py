#!/usr/bin/env python3
# Copyright 2026 The qgen Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic demo corpus under data/.

Eight contexts cut from random boards and a few dozen questions each, drawn
from a fixed bank with hand-set popularity. Not real human data.
"""

import json
import os
import random

N = 6
SHIPS = "BRP"
COLS = "ABCDEF"


def place(rng):
    while True:
        grid = [["W"] * N for _ in range(N)]
        ok = True
        for s in SHIPS:
            size = rng.randint(2, 4)
            horiz = rng.random() < 0.5
            r = rng.randrange(N if horiz else N - size + 1)
            c = rng.randrange(N - size + 1 if horiz else N)
            cells = [(r, c + i) if horiz else (r + i, c) for i in range(size)]
            if any(grid[a][b] != "W" for a, b in cells):
                ok = False
                break
            for a, b in cells:
                grid[a][b] = s
        if ok:
            return grid


def reveal(rng, grid, n_water, n_ship):
    water = [(r, c) for r in range(N) for c in range(N) if grid[r][c] == "W"]
    ships = [(r, c) for r in range(N) for c in range(N) if grid[r][c] != "W"]
    shown = set(rng.sample(water, n_water)) | set(rng.sample(ships, n_ship))
    return ["".join(grid[r][c] if (r, c) in shown else "?" for c in range(N)) for r in range(N)]


def bank(rng, view):
    hidden = [f"{r + 1}{COLS[c]}" for r in range(N) for c in range(N) if view[r][c] == "?"]
    q = []
    for s, w in (("Blue", 6), ("Red", 5), ("Purple", 4)):
        q.append((f"(size {s})", w))
        q.append((f"(orient {s})", w - 1))
        q.append((f"(topleft (coloredTiles {s}))", w - 2))
        q.append((f"(row (topleft (coloredTiles {s})))", 1))
        q.append((f"(col (bottomright (coloredTiles {s})))", 1))
    q += [
        ("(touch Blue Red)", 2), ("(touch Red Purple)", 2), ("(touch Blue Purple)", 1),
        ("(> (size Blue) (size Red))", 2), ("(= (size Red) (size Purple))", 1),
        ("(= (orient Blue) (orient Red))", 2),
        ("(+ (map (λ x (size x)) (set Blue Red Purple)))", 3),
        ("(= (map (λ x (size x)) (set Blue Red Purple)))", 1),
        ("(all (map (λ x (= (orient x) H)) (set Blue Red Purple)))", 1),
        ("(any (map (λ x (= (size x) 4)) (set Blue Red Purple)))", 1),
        ("(setSize (coloredTiles Water))", 1),
        ("(= 1 1)", 1),
    ]
    for loc in rng.sample(hidden, min(4, len(hidden))):
        q.append((f"(color {loc})", 3))
        q.append((f"(= (color {loc}) Water)", 1))
    return q


def main():
    rng = random.Random(7)
    root = os.path.join(os.path.dirname(__file__), "..", "data")
    os.makedirs(os.path.join(root, "contexts"), exist_ok=True)
    lines = []
    for cid in range(1, 9):
        grid = place(rng)
        view = reveal(rng, grid, rng.randint(8, 14), rng.randint(2, 4))
        with open(os.path.join(root, "contexts", f"{cid}.json"), "w") as f:
            json.dump({"id": str(cid), "grid": view}, f, indent=1)
            f.write("\n")
        qs = bank(rng, view)
        texts = [t for t, _ in qs]
        weights = [w for _, w in qs]
        for t in rng.choices(texts, weights, k=rng.randint(26, 36)):
            lines.append(json.dumps({"context": str(cid), "program": t}, ensure_ascii=False))
    with open(os.path.join(root, "questions.jsonl"), "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
