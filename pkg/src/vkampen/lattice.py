"""Closed paths in the unit-square grid: labeling, minimal cell-move counts,
explicit homotopy sequences, and fast winding/shoelace area paths.

Steps are the characters E, N, W, S.  The minimal number of type-2 moves
(slides across one grid cell) needed to contract a closed path is the
face count of a minimal diagram over the commutation presentation on two
generators; a validated winding-number sweep serves as the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import brackets as brk
from . import dpbs
from .words import BaumslagSolitar, Cost, Word

STEP_DELTA = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
STEP_INVERSE = {"E": "W", "W": "E", "N": "S", "S": "N"}
STEP_LETTER = {"E": 1, "W": -1, "N": 2, "S": -2}

GRID_GROUP = BaumslagSolitar(1, 1)


class PathNotClosed(ValueError):
    pass


class PathNotSimple(ValueError):
    pass


@dataclass(frozen=True)
class LatticePath:
    start: tuple[int, int]
    steps: str

    def __post_init__(self) -> None:
        if any(ch not in STEP_DELTA for ch in self.steps):
            raise ValueError("steps must be over ENWS")

    def __len__(self) -> int:
        return len(self.steps)

    def vertices(self) -> list[tuple[int, int]]:
        x, y = self.start
        out = [(x, y)]
        for ch in self.steps:
            dx, dy = STEP_DELTA[ch]
            x, y = x + dx, y + dy
            out.append((x, y))
        return out

    def end(self) -> tuple[int, int]:
        x, y = self.start
        for ch in self.steps:
            dx, dy = STEP_DELTA[ch]
            x, y = x + dx, y + dy
        return (x, y)

    def is_closed(self) -> bool:
        return self.end() == self.start

    def is_simple(self) -> bool:
        verts = self.vertices()
        if self.is_closed():
            verts = verts[:-1]
        return len(set(verts)) == len(verts)

    def reversed_path(self) -> "LatticePath":
        return LatticePath(
            self.end(), "".join(STEP_INVERSE[c] for c in reversed(self.steps))
        )


def parse_path(text: str) -> LatticePath:
    """Path text format: ``x y : ENWS...``."""
    head, _, steps = text.partition(":")
    xs = head.split()
    if len(xs) != 2:
        raise ValueError("path text must start with 'x y :'")
    return LatticePath((int(xs[0]), int(xs[1])), steps.strip())


def format_path(c: LatticePath) -> str:
    return f"{c.start[0]} {c.start[1]} : {c.steps}"


def label_path(c: LatticePath) -> Word:
    """East/west steps map to the first generator, north/south to the second."""
    return Word(STEP_LETTER[ch] for ch in c.steps)


def _require_closed(c: LatticePath) -> None:
    if not c.is_closed():
        raise PathNotClosed(f"path ends at {c.end()}, not {c.start}")


def m2(c: LatticePath, engine: str = "auto") -> Cost:
    """Minimal number of type-2 elementary homotopies contracting c.

    engine="auto" uses the corpus-validated winding sweep; engine="dp"
    runs the certified dynamic program.
    """
    _require_closed(c)
    if engine == "auto":
        return winding_area(c)
    if engine == "dp":
        return dpbs.mu3(label_path(c), GRID_GROUP)
    raise ValueError(f"unknown engine {engine!r}")


def winding_area(c: LatticePath) -> int:
    """Sum over grid cells of |winding number|, by a row sweep."""
    _require_closed(c)
    rows: dict[int, dict[int, int]] = {}
    x, y = c.start
    for ch in c.steps:
        if ch == "N":
            rows.setdefault(y, {}).setdefault(x, 0)
            rows[y][x] += 1
            y += 1
        elif ch == "S":
            y -= 1
            rows.setdefault(y, {}).setdefault(x, 0)
            rows[y][x] -= 1
        elif ch == "E":
            x += 1
        else:
            x -= 1
    total = 0
    for cols in rows.values():
        xs = sorted(x0 for x0, s in cols.items() if s != 0)
        if not xs:
            continue
        suffix = 0
        prev = None
        for x0 in reversed(xs):
            if prev is not None and suffix != 0:
                total += abs(suffix) * (prev - x0)
            suffix += cols[x0]
            prev = x0
        # cells left of the leftmost crossing see the full net sum, which is 0
    return total


def shoelace_simple(c: LatticePath) -> int:
    """Enclosed area of a simple closed lattice path, as an exact integer."""
    _require_closed(c)
    if not c.is_simple():
        raise PathNotSimple("path revisits a vertex")
    verts = c.vertices()
    twice = 0
    for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
        twice += x0 * y1 - x1 * y0
    return abs(twice) // 2


# -- elementary homotopies ----------------------------------------------------


@dataclass(frozen=True)
class Type1:
    position: int


@dataclass(frozen=True)
class Type2:
    position: int
    square: tuple[int, int]
    replacement: str  # the arc v^-1 substituted for the touched subpath u


EhMove = Type1 | Type2


def apply_eh(c: LatticePath, mv: EhMove) -> LatticePath:
    """Apply one elementary homotopy; the move must match the path exactly."""
    steps = c.steps
    if isinstance(mv, Type1):
        p = mv.position
        if not (0 <= p and p + 1 < len(steps)) or steps[p] != STEP_INVERSE[steps[p + 1]]:
            raise ValueError(f"no backtrack pair at position {p}")
        return LatticePath(c.start, steps[:p] + steps[p + 2 :])
    p = mv.position
    u_len = 4 - len(mv.replacement)
    if not (0 <= u_len <= 4) or p < 0 or p + u_len > len(steps):
        raise ValueError("type-2 move out of range")
    u = steps[p : p + u_len]
    verts = c.vertices()
    anchor = verts[p]
    _check_square_move(anchor, u, mv.replacement, mv.square)
    return LatticePath(c.start, steps[:p] + mv.replacement + steps[p + u_len :])


def _check_square_move(anchor, u, repl, square) -> None:
    cx, cy = square
    corners = {(cx, cy), (cx + 1, cy), (cx, cy + 1), (cx + 1, cy + 1)}

    def walk(start, ss):
        x, y = start
        out = [(x, y)]
        for ch in ss:
            dx, dy = STEP_DELTA[ch]
            x, y = x + dx, y + dy
            out.append((x, y))
        return out

    u_verts = walk(anchor, u)
    v_verts = walk(anchor, repl)
    if u_verts[-1] != v_verts[-1]:
        raise ValueError("replacement arc has wrong endpoints")
    if not set(u_verts) <= corners or not set(v_verts) <= corners:
        raise ValueError("move does not stay on the named square")
    if len(u) + len(repl) == 4:
        if set(u_verts) | set(v_verts) != corners:
            raise ValueError("arcs do not cover the square boundary")
    elif len(u) + len(repl) not in (0, 2, 4, 6, 8):
        raise ValueError("arc lengths do not fit a square")


# -- homotopy sequences from certificates -------------------------------------


def homotopy_sequence(c: LatticePath) -> list[EhMove]:
    """A contraction of c to its basepoint using exactly m2(c) type-2 moves."""
    _require_closed(c)
    if not c.steps:
        return []
    word = label_path(c)
    solver = dpbs.BsSolver(word, GRID_GROUP)
    lm = solver.lambda_mu()
    assert lm.lam == 0, "closed paths always label trivial words"
    ops = solver.to_ops()
    return _Replayer(c).run(ops)


class _Replayer:
    """Tracks the intermediate paths while replaying a certificate.

    The current path is a sequence of items: original-step runs and
    per-bracket horizontal runs, mirroring the bracketed factorization of
    the word; emitted moves are indexed into the current concrete path.
    """

    def __init__(self, c: LatticePath):
        self.orig = c.steps
        self.start = c.start
        # items: ("orig", lo, hi) over original step indices, or
        #        ("delta", key, b3) for a bracket's horizontal run
        self.items: list[tuple] = (
            [("orig", 0, len(c.steps))] if c.steps else []
        )
        self.moves: list[EhMove] = []

    # -- current-path helpers

    def _item_steps(self, item) -> str:
        if item[0] == "orig":
            return self.orig[item[1] : item[2]]
        b3 = item[2]
        return ("E" if b3 > 0 else "W") * abs(b3)

    def path_steps(self) -> str:
        return "".join(self._item_steps(it) for it in self.items)

    def _pos_of_item(self, idx: int) -> int:
        return sum(len(self._item_steps(it)) for it in self.items[:idx])

    def _coords_at(self, pos: int) -> tuple[int, int]:
        x, y = self.start
        for ch in self.path_steps()[:pos]:
            dx, dy = STEP_DELTA[ch]
            x, y = x + dx, y + dy
        return (x, y)

    def _delta_index(self, key) -> int:
        for i, it in enumerate(self.items):
            if it[0] == "delta" and it[1] == key:
                return i
        raise KeyError(key)

    def _emit_type1(self, pos: int) -> None:
        self.moves.append(Type1(pos))

    # -- replay

    def run(self, ops: Sequence[brk.ElemOp]) -> list[EhMove]:
        for op in ops:
            if isinstance(op, brk.Add):
                self._add(op.vertex)
            elif isinstance(op, brk.Ext1Left):
                self._ext1(op.target, left=True)
            elif isinstance(op, brk.Ext1Right):
                self._ext1(op.target, left=False)
            elif isinstance(op, brk.Ext2BS):
                self._ext2(op.target)
            elif isinstance(op, brk.Ext3):
                self._ext3(op.target)
            elif isinstance(op, brk.Merge):
                self._merge(op.left, op.right)
            else:
                raise ValueError(f"unsupported op {op!r}")
        assert not self.path_steps(), "replay did not contract the path"
        return self.moves

    def _add(self, v: int) -> None:
        out: list[tuple] = []
        placed = False
        for it in self.items:
            if it[0] == "orig" and it[1] <= v <= it[2] and not placed:
                if it[1] < v:
                    out.append(("orig", it[1], v))
                out.append(("delta", (v, v), 0))
                if v < it[2]:
                    out.append(("orig", v, it[2]))
                placed = True
            else:
                out.append(it)
        if not placed:
            # empty original word or v at the boundary of consumed runs
            out.append(("delta", (v, v), 0))
        self.items = out

    def _ext1(self, key, left: bool) -> None:
        idx = self._delta_index(key)
        _, (b1, b2), b3 = self.items[idx]
        nkey = (b1 - 1, b2) if left else (b1, b2 + 1)
        letter = STEP_LETTER[self.orig[b1 - 1 if left else b2]]
        eps = 1 if letter > 0 else -1
        if eps * b3 < 0:
            # sign clash: a backtrack pair disappears from the current path
            pos = self._pos_of_item(idx)
            self._emit_type1(pos - 1 if left else pos + abs(b3) - 1)
        nb = idx - 1 if left else idx + 1
        it = self.items[nb]
        assert it[0] == "orig"
        self.items[nb] = ("orig", it[1], it[2] - 1) if left else ("orig", it[1] + 1, it[2])
        if self.items[nb][1] == self.items[nb][2]:
            del self.items[nb]
            if left:
                idx -= 1
        self.items[idx] = ("delta", nkey, b3 + eps)

    def _ext2(self, key) -> None:
        idx = self._delta_index(key)
        _, (b1, b2), b3 = self.items[idx]
        k = abs(b3)
        pos = self._pos_of_item(idx)
        vertical = self.orig[b1 - 1]  # N or S
        horiz = "E" if b3 > 0 else "W"
        vx, vy = self._coords_at(pos - 1)
        up = vertical == "N"
        for t in range(k):
            hx = vx + t if b3 > 0 else vx - t - 1
            hy = vy if up else vy - 1
            if t < k - 1:
                u_len, repl = 2, horiz + vertical
            else:
                u_len, repl = 3, horiz
            self.moves.append(Type2(pos - 1 + t, (hx, hy), repl))
        # consume the flanking vertical steps from the neighbor runs
        for nb, left in ((idx + 1, False), (idx - 1, True)):
            it = self.items[nb]
            assert it[0] == "orig"
            self.items[nb] = (
                ("orig", it[1], it[2] - 1) if left else ("orig", it[1] + 1, it[2])
            )
        for nb in (idx + 1, idx - 1):
            if self.items[nb][1] == self.items[nb][2]:
                del self.items[nb]
                if nb < idx:
                    idx -= 1
        self.items[idx] = ("delta", (b1 - 1, b2 + 1), b3)

    def _ext3(self, key) -> None:
        idx = self._delta_index(key)
        _, (b1, b2), b3 = self.items[idx]
        assert b3 == 0
        pos = self._pos_of_item(idx)
        self._emit_type1(pos - 1)
        for nb, left in ((idx + 1, False), (idx - 1, True)):
            it = self.items[nb]
            self.items[nb] = (
                ("orig", it[1], it[2] - 1) if left else ("orig", it[1] + 1, it[2])
            )
        for nb in (idx + 1, idx - 1):
            if self.items[nb][1] == self.items[nb][2]:
                del self.items[nb]
                if nb < idx:
                    idx -= 1
        self.items[idx] = ("delta", (b1 - 1, b2 + 1), 0)

    def _merge(self, left_key, right_key) -> None:
        li = self._delta_index(left_key)
        ri = self._delta_index(right_key)
        assert ri == li + 1, "merged brackets must be adjacent"
        _, (b1, _), b3 = self.items[li]
        _, (_, c2), c3 = self.items[ri]
        if b3 * c3 < 0:
            pos = self._pos_of_item(li)
            junction = pos + abs(b3) - 1
            for _ in range(min(abs(b3), abs(c3))):
                self._emit_type1(junction)
                junction -= 1
        self.items[li : ri + 1] = [("delta", (b1, c2), b3 + c3)]
