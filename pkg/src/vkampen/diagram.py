"""Planar disk diagrams as dart-based combinatorial maps.

A diagram stores its darts (oriented edge sides) with an involution and
labels, the positively oriented face cycles, and the negatively oriented
outer boundary cycle with the basepoint at position 0.  The vertex
rotation system is derived: the next dart around a vertex is
``next_in_cycle(inv(d))``, so vertices are orbits of that permutation and
planarity is audited through the Euler relation V - E + F = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import (
    BaumslagSolitar,
    CyclicProducts,
    Presentation,
    Word,
    default_names,
    format_word,
)


@dataclass(frozen=True)
class TauSpec:
    """Ordered face-statistics selectors for lexicographic minimization."""

    selectors: tuple["Selector", ...]


@dataclass(frozen=True)
class FaceCount:
    sign: int = 1  # -1 ranks more faces as smaller (maximization)


@dataclass(frozen=True)
class FacesWithLabel:
    generator: int
    exponent: int | None = None  # match on |exponent| of the face label; None = any


@dataclass(frozen=True)
class BoundaryLengthSum:
    lower: int
    upper: int


Selector = FaceCount | FacesWithLabel | BoundaryLengthSum


def eval_selector_on_face(sel: Selector, generator: int, exponent: int) -> int:
    """Contribution of one face (label a_generator^exponent) to a selector."""
    length = abs(exponent)
    if isinstance(sel, FaceCount):
        return sel.sign
    if isinstance(sel, FacesWithLabel):
        if generator != sel.generator:
            return 0
        if sel.exponent is not None and abs(sel.exponent) != length:
            return 0
        return 1
    if sel.lower <= length <= sel.upper:
        return length
    return 0


class Diagram:
    """Immutable disk diagram over a presentation."""

    __slots__ = ("labels", "inv", "faces", "boundary", "presentation")

    def __init__(
        self,
        labels: dict[int, int],
        inv: dict[int, int],
        faces: Sequence[Sequence[int]],
        boundary: Sequence[int],
        presentation: Presentation | None = None,
    ):
        self.labels = dict(labels)
        self.inv = dict(inv)
        self.faces = tuple(tuple(f) for f in faces)
        self.boundary = tuple(boundary)
        self.presentation = presentation

    # -- basic queries ----------------------------------------------------

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def dart_ids(self) -> list[int]:
        return sorted(self.labels)

    def edge_count(self) -> int:
        return len(self.labels) // 2

    def _phi(self) -> dict[int, int]:
        """Next dart within its cycle (faces and boundary together)."""
        nxt: dict[int, int] = {}
        for cyc in list(self.faces) + [self.boundary]:
            for i, d in enumerate(cyc):
                nxt[d] = cyc[(i + 1) % len(cyc)]
        return nxt

    def vertex_orbits(self) -> list[tuple[int, ...]]:
        """Vertices as orbits of the derived rotation sigma = phi o inv."""
        phi = self._phi()
        seen: set[int] = set()
        orbits: list[tuple[int, ...]] = []
        for d in self.dart_ids():
            if d in seen:
                continue
            orbit = []
            x = d
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = phi[self.inv[x]]
            orbits.append(tuple(orbit))
        return orbits

    def vertex_of(self) -> dict[int, int]:
        """Map dart -> vertex id (tail of the dart), deterministically numbered."""
        orbits = self.vertex_orbits()
        by_dart: dict[int, int] = {}
        order: list[tuple[int, ...]] = []
        placed: set[int] = set()
        for d in self.boundary:
            for idx, orb in enumerate(orbits):
                if d in orb and idx not in placed:
                    placed.add(idx)
                    order.append(orb)
        for idx, orb in enumerate(orbits):
            if idx not in placed:
                placed.add(idx)
                order.append(orb)
        for v, orb in enumerate(order):
            for d in orb:
                by_dart[d] = v
        return by_dart

    def face_label(self, face: Sequence[int]) -> Word:
        return Word(self.labels[d] for d in face)

    # -- spec operations ---------------------------------------------------

    def boundary_word(self, basepoint: int = 0) -> Word:
        """Boundary label read from the basepoint position on the cycle."""
        n = len(self.boundary)
        if n == 0:
            if basepoint != 0:
                raise IndexError("basepoint not on boundary")
            return Word()
        if not 0 <= basepoint < n:
            raise IndexError("basepoint not on boundary")
        cyc = self.boundary[basepoint:] + self.boundary[:basepoint]
        return Word(self.labels[d] for d in cyc)

    def check_property_a(self) -> bool:
        on_boundary = set(self.boundary)
        return all(
            self.inv[d] in on_boundary for face in self.faces for d in face
        )

    def check_reduced(self) -> bool:
        return not self._find_reducible_pair()

    def _find_reducible_pair(self) -> tuple[int, int] | None:
        vertex = self.vertex_of()
        corners: dict[int, list[tuple[int, int]]] = {}
        for fi, face in enumerate(self.faces):
            for pos, d in enumerate(face):
                corners.setdefault(vertex[d], []).append((fi, pos))
        for at in corners.values():
            for a in range(len(at)):
                for b in range(a + 1, len(at)):
                    fi, pi = at[a]
                    fj, pj = at[b]
                    if fi == fj:
                        continue
                    w1 = self._face_word_from(fi, pi)
                    w2 = self._face_word_from(fj, pj)
                    if w1 == w2.inverse():
                        return fi, fj
        return None

    def _face_word_from(self, fi: int, pos: int) -> Word:
        face = self.faces[fi]
        return Word(self.labels[face[(pos + k) % len(face)]] for k in range(len(face)))

    def statistics(self, spec: TauSpec) -> tuple[int, ...]:
        totals = [0] * len(spec.selectors)
        for face in self.faces:
            lab = self.face_label(face)
            g = abs(lab[0])
            exp = sum(1 if x > 0 else -1 for x in lab)
            for i, sel in enumerate(spec.selectors):
                totals[i] += eval_selector_on_face(sel, g, exp)
        return tuple(totals)

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for orb in self.vertex_orbits():
            hist[len(orb)] = hist.get(len(orb), 0) + 1
        return hist

    def face_degree_histogram(self) -> dict[int, int]:
        vertex = self.vertex_of()
        per_vertex: dict[int, set[int]] = {}
        for fi, face in enumerate(self.faces):
            for d in face:
                per_vertex.setdefault(vertex[d], set()).add(fi)
        nverts = len(self.vertex_orbits())
        hist: dict[int, int] = {}
        for v in range(nverts):
            k = len(per_vertex.get(v, ()))
            hist[k] = hist.get(k, 0) + 1
        return hist

    def a2_bands(self) -> list["Band"]:
        """Partition the faces into maximal bands glued along a2-edges."""
        if not isinstance(self.presentation, BaumslagSolitar):
            raise ValueError("a2-bands are defined over Baumslag-Solitar diagrams")
        dart_face: dict[int, int] = {}
        for fi, face in enumerate(self.faces):
            for d in face:
                dart_face[d] = fi
        nbrs: dict[int, set[int]] = {fi: set() for fi in range(len(self.faces))}
        for fi, face in enumerate(self.faces):
            for d in face:
                if abs(self.labels[d]) < 2:
                    continue
                fj = dart_face.get(self.inv[d])
                if fj is not None and fj != fi:
                    nbrs[fi].add(fj)
        bands: list[Band] = []
        seen: set[int] = set()
        for fi in range(len(self.faces)):
            if fi in seen:
                continue
            comp = self._collect_component(fi, nbrs)
            seen.update(comp)
            chain = _order_chain(comp, nbrs)
            if chain is None:
                raise ClosedBandError("closed a2-band found")
            bands.append(self._band_from_chain(chain, dart_face))
        return bands

    def _collect_component(self, start: int, nbrs: dict[int, set[int]]) -> set[int]:
        comp = {start}
        todo = [start]
        while todo:
            f = todo.pop()
            for g in nbrs[f]:
                if g not in comp:
                    comp.add(g)
                    todo.append(g)
        return comp

    def _band_from_chain(self, chain: list[int], dart_face: dict[int, int]) -> "Band":
        boundary = self._subcomplex_boundary(set(chain), dart_face)
        start = next(
            i for i, d in enumerate(boundary) if self.labels[d] == 2
        )
        cyc = boundary[start:] + boundary[:start]
        f1 = cyc[0]
        second = next(i for i in range(1, len(cyc)) if abs(self.labels[cyc[i]]) == 2)
        s1 = cyc[1:second]
        f2 = cyc[second]
        s2 = cyc[second + 1 :]
        return Band(tuple(chain), f1, tuple(s1), f2, tuple(s2), self)

    def _subcomplex_boundary(self, face_set: set[int], dart_face: dict[int, int]) -> list[int]:
        """Boundary cycle of the union of the given faces (negatively oriented)."""
        in_sub = {
            d
            for fi in face_set
            for d in self.faces[fi]
        }
        pos_in_face: dict[int, tuple[int, int]] = {}
        for fi in face_set:
            for p, d in enumerate(self.faces[fi]):
                pos_in_face[d] = (fi, p)

        def next_dart(d: int) -> int:
            e = self.inv[d]
            while True:
                fi, p = pos_in_face[e]
                face = self.faces[fi]
                c = face[(p - 1) % len(face)]
                x = self.inv[c]
                if x not in in_sub:
                    return x
                e = x

        first_face = self.faces[next(iter(face_set))]
        start = None
        for d in first_face:
            if self.inv[d] not in in_sub:
                start = self.inv[d]
                break
        assert start is not None, "closed subcomplex has no boundary"
        out = [start]
        d = next_dart(start)
        while d != start:
            out.append(d)
            d = next_dart(d)
        return out

    def validate(self, p: Presentation | None = None) -> list[str]:
        """Well-formedness audit; an empty list means the diagram is valid."""
        p = p or self.presentation
        bad: list[str] = []
        for d, e in self.inv.items():
            if e not in self.labels or self.inv.get(e) != d or d == e:
                bad.append(f"involution broken at dart {d}")
            elif self.labels[d] != -self.labels[e]:
                bad.append(f"label-involution broken at dart {d}")
        placed: list[int] = [d for f in self.faces for d in f] + list(self.boundary)
        if sorted(placed) != self.dart_ids():
            bad.append("darts not partitioned into face cycles plus boundary")
            return bad
        if self.labels:
            nv = len(self.vertex_orbits())
            if nv - self.edge_count() + len(self.faces) != 1:
                bad.append("euler relation violated (not a planar disk)")
        for fi, face in enumerate(self.faces):
            if p is not None and not _is_relator_label(self.face_label(face), p):
                bad.append(f"bad-face-label at face {fi}")
        return bad

    # -- export ------------------------------------------------------------

    def to_json(self) -> bytes:
        names = _names_of(self.presentation)
        ids = {}
        order: list[int] = []
        for d in list(self.boundary) + [d for f in self.faces for d in f]:
            if d not in ids:
                ids[d] = len(ids)
                order.append(d)
        for d in self.dart_ids():
            if d not in ids:
                ids[d] = len(ids)
                order.append(d)
        vertex = self.vertex_of()
        payload = {
            "schema": 1,
            "generators": list(names),
            "darts": [
                {
                    "id": ids[d],
                    "inv": ids[self.inv[d]],
                    "label": _label_str(self.labels[d], names),
                    "vertex": vertex.get(d, 0),
                }
                for d in order
            ],
            "faces": [[ids[d] for d in f] for f in self.faces],
            "boundary": [ids[d] for d in self.boundary],
            "basepoint": 0,
        }
        return json.dumps(payload, indent=None, sort_keys=True).encode()

    def to_dot(self) -> bytes:
        names = _names_of(self.presentation)
        vertex = self.vertex_of()
        lines = ["graph diagram {"]
        seen: set[frozenset[int]] = set()
        for d in self.dart_ids():
            key = frozenset((d, self.inv[d]))
            if key in seen:
                continue
            seen.add(key)
            e = d if self.labels[d] > 0 else self.inv[d]
            tail, head = vertex.get(e, 0), vertex.get(self.inv[e], 0)
            lab = _label_str(self.labels[e], names)
            lines.append(f'  v{tail} -- v{head} [label="{lab}"];')
        for fi, face in enumerate(self.faces):
            lab = _label_str_word(self.face_label(face), names)
            lines.append(f'  // face {fi}: {lab}')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()


class ClosedBandError(ValueError):
    pass


@dataclass(frozen=True)
class Band:
    """A maximal chain of faces glued along a2-edges, with standard boundary."""

    faces: tuple[int, ...]
    f1: int
    s1: tuple[int, ...]
    f2: int
    s2: tuple[int, ...]
    diagram: Diagram = field(repr=False)

    def labels(self) -> tuple[Word, Word, Word, Word]:
        d = self.diagram
        return (
            Word([d.labels[self.f1]]),
            Word(d.labels[x] for x in self.s1),
            Word([d.labels[self.f2]]),
            Word(d.labels[x] for x in self.s2),
        )


def _order_chain(comp: set[int], nbrs: dict[int, set[int]]) -> list[int] | None:
    """Linear order of a band component, or None if it is closed."""
    if len(comp) == 1:
        f = next(iter(comp))
        return None if nbrs[f] & comp else [f]
    degree = {f: len(nbrs[f] & comp) for f in comp}
    if any(d > 2 for d in degree.values()):
        return None
    ends = [f for f in comp if degree[f] == 1]
    if len(ends) != 2:
        return None
    chain = [min(ends)]
    prev = None
    while len(chain) < len(comp):
        nxt = [g for g in nbrs[chain[-1]] & comp if g != prev]
        if len(nxt) != 1:
            return None
        prev = chain[-1]
        chain.append(nxt[0])
    return chain


def _is_relator_label(lab: Word, p: Presentation) -> bool:
    if isinstance(p, CyclicProducts):
        if not lab:
            return False
        first = lab[0]
        if any(x != first for x in lab):
            return False
        return p.exponent_set(abs(first)).contains(len(lab))
    rel = p.relator()
    if len(lab) != len(rel):
        return False
    for target in (rel, rel.inverse()):
        doubled = tuple(target) * 2
        for k in range(len(target)):
            if tuple(lab) == doubled[k : k + len(target)]:
                return True
    return False


def _names_of(p: Presentation | None) -> tuple[str, ...]:
    if p is None:
        return default_names(26)
    return p.names


def _label_str(x: int, names: Sequence[str]) -> str:
    name = names[abs(x) - 1]
    if x > 0:
        return name
    return name.upper() if len(name) == 1 else f"{name}^-1"


def _label_str_word(w: Word, names: Sequence[str]) -> str:
    return format_word(w, names)


def from_json(data: bytes) -> Diagram:
    payload = json.loads(data.decode())
    if payload.get("schema") != 1:
        raise ValueError("unsupported diagram schema")
    names = payload["generators"]
    labels: dict[int, int] = {}
    inv: dict[int, int] = {}
    for rec in payload["darts"]:
        labels[rec["id"]] = _parse_label(rec["label"], names)
        inv[rec["id"]] = rec["inv"]
    return Diagram(labels, inv, payload["faces"], payload["boundary"])


def _parse_label(s: str, names: Sequence[str]) -> int:
    if s.endswith("^-1"):
        return -(list(names).index(s[:-3]) + 1)
    if s in names:
        return list(names).index(s) + 1
    if s.lower() in names:
        return -(list(names).index(s.lower()) + 1)
    raise ValueError(f"unknown label {s!r}")


# -- construction toolkit (used by the solvers and the certificate replayer) --


class _Builder:
    """Mutable diagram under construction; darts are fresh nonnegative ints."""

    __slots__ = ("labels", "inv", "faces", "boundary", "_next")

    def __init__(self) -> None:
        self.labels: dict[int, int] = {}
        self.inv: dict[int, int] = {}
        self.faces: list[tuple[int, ...]] = []
        self.boundary: list[int] = []
        self._next = 0

    def new_edge(self, label: int) -> tuple[int, int]:
        d, e = self._next, self._next + 1
        self._next += 2
        self.labels[d] = label
        self.labels[e] = -label
        self.inv[d] = e
        self.inv[e] = d
        return d, e

    def freeze(self, presentation: Presentation | None = None) -> Diagram:
        return Diagram(self.labels, self.inv, self.faces, self.boundary, presentation)


def empty_diagram(p: Presentation | None = None) -> Diagram:
    return Diagram({}, {}, [], [], p)


def spur(letter: int, p: Presentation | None = None) -> Diagram:
    b = _Builder()
    d, e = b.new_edge(letter)
    b.boundary = [d, e]
    return b.freeze(p)


def polygon(boundary_letters: Sequence[int], p: Presentation | None = None) -> Diagram:
    """Single face whose outer boundary spells ``boundary_letters``."""
    b = _Builder()
    outer = [b.new_edge(x)[0] for x in boundary_letters]
    b.boundary = outer
    b.faces = [tuple(b.inv[d] for d in reversed(outer))]
    return b.freeze(p)


def tree_fold(letters: Sequence[int], p: Presentation | None = None) -> Diagram:
    """Zero-face diagram whose boundary spells a freely trivial word."""
    b = _Builder()
    out: list[int | None] = [None] * len(letters)
    stack: list[int] = []
    for i, x in enumerate(letters):
        if stack and letters[stack[-1]] == -x:
            j = stack.pop()
            d, e = b.new_edge(letters[j])
            out[j], out[i] = d, e
        else:
            stack.append(i)
    if stack:
        raise ValueError("word is not freely trivial")
    b.boundary = [d for d in out if d is not None]
    return b.freeze(p)


def rotate_basepoint(d: Diagram, k: int) -> Diagram:
    """Move the basepoint k positions forward along the boundary."""
    n = len(d.boundary)
    if n == 0:
        return d
    k %= n
    return Diagram(
        d.labels, d.inv, d.faces, d.boundary[k:] + d.boundary[:k], d.presentation
    )


def wedge(a: Diagram, b: Diagram, pos: int | None = None) -> Diagram:
    """Attach b's basepoint to the vertex at boundary position ``pos`` of a.

    The combined boundary is a[:pos] + b + a[pos:]; with the default pos,
    b is appended after a's full boundary (shared vertex = a's endpoint).
    """
    if pos is None:
        pos = len(a.boundary)
    return glue(a, b, pos, 0, 0)


def glue(a: Diagram, b: Diagram, ia: int, ib: int, r: int) -> Diagram:
    """Identify a.boundary[ia:ia+r] with b.boundary[ib:ib+r] reversed.

    Requires label(a.boundary[ia+t]) == -label(b.boundary[ib+r-1-t]).
    With r = 0 this is a vertex wedge at the two boundary positions.
    """
    if ia < 0 or ia + r > len(a.boundary) or ib < 0 or ib + r > len(b.boundary):
        raise IndexError("glue range out of boundary")
    rename: dict[int, int] = {}
    base = max(a.labels, default=-1) + 1
    for d in sorted(b.labels):
        rename[d] = base + d
    for t in range(r):
        x = a.boundary[ia + t]
        y = b.boundary[ib + r - 1 - t]
        if b.labels[y] != -a.labels[x]:
            raise ValueError("glued subpaths are not inverse-labeled")
        rename[y] = a.inv[x]
        rename[b.inv[y]] = x
    labels = dict(a.labels)
    inv = dict(a.inv)
    glued_b = {b.boundary[ib + t] for t in range(r)}
    glued_b |= {b.inv[b.boundary[ib + t]] for t in range(r)}
    for d, lab in b.labels.items():
        if d in glued_b:
            continue
        labels[rename[d]] = lab
        inv[rename[d]] = rename[b.inv[d]]
    faces = list(a.faces) + [tuple(rename[d] for d in f) for f in b.faces]
    b_rest = [rename[d] for d in b.boundary[ib + r :] + b.boundary[:ib]]
    boundary = list(a.boundary[:ia]) + b_rest + list(a.boundary[ia + r :])
    return Diagram(labels, inv, faces, boundary, a.presentation or b.presentation)


def close_face(d: Diagram, start: int, length: int) -> Diagram:
    """Turn the boundary darts [start, start+length) into a new face cycle.

    The removed subpath keeps its dart order; read from the face's side it
    is the positively oriented face boundary.
    """
    seg = tuple(d.boundary[start : start + length])
    if len(seg) != length:
        raise IndexError("face segment out of boundary")
    boundary = d.boundary[:start] + d.boundary[start + length :]
    return Diagram(d.labels, d.inv, list(d.faces) + [seg], boundary, d.presentation)


def band(k: int, q1: int, q2: int, rung_sign: int, p: Presentation | None = None) -> Diagram:
    """Standalone a2-band of k faces in a row.

    Each face reads a1^q2 a2^rung_sign a1^-q1 a2^-rung_sign around its
    positively oriented boundary (q1 = per-face top exponent, q2 = per-face
    bottom exponent, both read left to right).  The outer boundary cycle is
    listed as [top -> (k*q1 letters)] [right rung down] [bottom <-] [left
    rung up], so gluing the first k*|q1| boundary positions identifies the
    top side.
    """
    if k <= 0 or q1 == 0 or q2 == 0:
        raise ValueError("band needs k >= 1 and nonzero side exponents")
    b = _Builder()
    rung_up = [b.new_edge(2 * rung_sign) for _ in range(k + 1)]  # (up, down) darts
    s1, s2 = (1 if q1 > 0 else -1), (1 if q2 > 0 else -1)
    tops = [[b.new_edge(s1) for _ in range(abs(q1))] for _ in range(k)]
    bots = [[b.new_edge(s2) for _ in range(abs(q2))] for _ in range(k)]
    faces = []
    for i in range(k):
        cyc: list[int] = [d for d, _ in bots[i]]
        cyc.append(rung_up[i + 1][0])
        cyc += [e for _, e in reversed(tops[i])]
        cyc.append(rung_up[i][1])
        faces.append(tuple(cyc))
    b.faces = faces
    top_side = [d for i in range(k) for d, _ in tops[i]]
    bot_back = [e for i in reversed(range(k)) for _, e in reversed(bots[i])]
    b.boundary = top_side + [rung_up[k][1]] + bot_back + [rung_up[0][0]]
    return b.freeze(p)
