#!/usr/bin/env python3
"""Regenerate the bundled scenario maps (run from the repo root)."""

import os

RES = 0.1


def blank(w, h):
    return [["." for _ in range(w)] for _ in range(h)]


def rect(g, x0, y0, x1, y1):
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            g[y][x] = "#"


def border(g, t=2):
    w, h = len(g[0]), len(g)
    rect(g, 0, 0, w - 1, t - 1)
    rect(g, 0, h - t, w - 1, h - 1)
    rect(g, 0, 0, t - 1, h - 1)
    rect(g, w - t, 0, w - 1, h - 1)


def emit(name, g, start):
    w, h = len(g[0]), len(g)
    path = os.path.join("scenarios", name + ".txt")
    with open(path, "w") as f:
        f.write(f"{w} {h} {RES}\n")
        for row in g:  # row 0 is the minimum-y row
            f.write("".join(row) + "\n")
        f.write(f"{start[0]} {start[1]}\n")
    print(f"wrote {path} ({w}x{h})")


def corridor():
    w, h = 70, 24
    g = blank(w, h)
    border(g)
    rect(g, 28, 2, 31, 13)   # choke from the bottom wall
    rect(g, 46, 10, 49, 21)  # choke from the top wall
    emit("corridor", g, (0.8, 1.1))


def rooms():
    w, h = 80, 60
    g = blank(w, h)
    border(g)
    # vertical partition with two doorways
    rect(g, 38, 2, 40, 20)
    rect(g, 38, 30, 40, 40)
    rect(g, 38, 50, 40, 57)
    # horizontal partition on the left half, one doorway
    rect(g, 2, 28, 22, 30)
    # horizontal partition on the right half, one doorway
    rect(g, 52, 38, 77, 40)
    # furniture blocks
    rect(g, 12, 44, 16, 48)
    rect(g, 58, 12, 63, 16)
    rect(g, 62, 48, 66, 52)
    emit("rooms", g, (1.2, 1.2))


def open_hall():
    w, h = 60, 60
    g = blank(w, h)
    border(g)
    # pillars
    rect(g, 18, 18, 21, 21)
    rect(g, 40, 14, 43, 17)
    rect(g, 30, 34, 33, 37)
    rect(g, 14, 42, 17, 45)
    rect(g, 44, 44, 47, 47)
    emit("open_hall", g, (1.0, 1.0))


if __name__ == "__main__":
    os.makedirs("scenarios", exist_ok=True)
    corridor()
    rooms()
    open_hall()
