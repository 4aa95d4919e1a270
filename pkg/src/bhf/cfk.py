"""Knot Floer complexes over F2[U].

A complex is a finite set of generators with Alexander and Maslov gradings
and a set of arrows x -> U^r y.  Writing s = A(x) - A(y), the arrow's two
basepoint multiplicities are n_w = r and n_z = r + s; both must be
nonnegative and every arrow drops the Maslov grading by one after
accounting for U (M(x) - (M(y) - 2r) = 1).

Arrow families:
  * vertical arrows have n_w = 0 (u_power 0); they lower A,
  * horizontal arrows have n_z = 0 (A(y) = A(x) + r); they raise A.
The differential restricted to horizontal arrows is written dw, to
vertical arrows dz; both square to zero on their own.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace

from . import _linalg

__all__ = [
    "KnotGenerator", "KnotArrow", "KnotComplex",
    "validate", "is_valid", "is_reduced", "flip", "reduce",
    "vertical_simplify", "horizontal_simplify", "simultaneous_simplify",
    "is_vertically_simplified", "is_horizontally_simplified",
    "tau", "subquotient",
]


@dataclass(frozen=True, order=True)
class KnotGenerator:
    name: str
    alexander: int
    maslov: int


@dataclass(frozen=True, order=True)
class KnotArrow:
    source: str
    target: str
    u_power: int


@dataclass(frozen=True)
class KnotComplex:
    generators: tuple[KnotGenerator, ...]
    arrows: tuple[KnotArrow, ...]
    shift: tuple[int, int] | None = None

    def gen(self, name: str) -> KnotGenerator:
        return self.by_name()[name]

    def by_name(self) -> dict[str, KnotGenerator]:
        return {g.name: g for g in self.generators}

    def alexander_drop(self, a: KnotArrow) -> int:
        m = self.by_name()
        return m[a.source].alexander - m[a.target].alexander

    def n_z(self, a: KnotArrow) -> int:
        return a.u_power + self.alexander_drop(a)

    def is_vertical(self, a: KnotArrow) -> bool:
        return a.u_power == 0

    def is_horizontal(self, a: KnotArrow) -> bool:
        return self.n_z(a) == 0


def make_complex(gens, arrows, shift=None) -> KnotComplex:
    """Normalize to sorted tuples so equal complexes compare equal."""
    gtuple = tuple(sorted(gens))
    atuple = tuple(sorted(set(arrows)))
    return KnotComplex(gtuple, atuple, shift)


def validate(C: KnotComplex) -> list[str]:
    """Return a list of violations; empty means the complex is valid."""
    out: list[str] = []
    names = [g.name for g in C.generators]
    if len(set(names)) != len(names):
        out.append("duplicate generator names")
        return out
    by = C.by_name()
    for a in C.arrows:
        if a.source not in by or a.target not in by:
            out.append(f"arrow {a.source}->{a.target} references unknown generator")
            continue
        if a.u_power < 0:
            out.append(f"arrow {a.source}->{a.target} has negative U power")
        s = by[a.source].alexander - by[a.target].alexander
        if a.u_power + s < 0:
            out.append(f"arrow {a.source}->{a.target} has n_z = {a.u_power + s} < 0")
        drop = by[a.source].maslov - (by[a.target].maslov - 2 * a.u_power)
        if drop != 1:
            out.append(
                f"arrow {a.source}->{a.target} drops Maslov by {drop}, expected 1")
    if out:
        return out
    # d^2 = 0 over F2[U]: count two-step paths per (start, end, total U power).
    outs: dict[str, list[KnotArrow]] = {}
    for a in C.arrows:
        outs.setdefault(a.source, []).append(a)
    counts: dict[tuple[str, str, int], int] = {}
    for a in C.arrows:
        for b in outs.get(a.target, ()):
            key = (a.source, b.target, a.u_power + b.u_power)
            counts[key] = counts.get(key, 0) ^ 1
    for (src, tgt, r), parity in sorted(counts.items()):
        if parity:
            out.append(f"d^2 != 0: odd path count {src} -> U^{r} {tgt}")
    return out


def is_valid(C: KnotComplex) -> bool:
    return not validate(C)


def is_reduced(C: KnotComplex) -> bool:
    return all(a.u_power > 0 or C.alexander_drop(a) > 0 for a in C.arrows)


def flip(C: KnotComplex) -> KnotComplex:
    """Exchange the roles of the two basepoints.

    A(x) negates, M(x) becomes M(x) - 2A(x), and an arrow x -> U^r y with
    Alexander drop s becomes x -> U^(r+s) y.  An involution; vertical and
    horizontal arrows trade places.
    """
    by = C.by_name()
    gens = [replace(g, alexander=-g.alexander, maslov=g.maslov - 2 * g.alexander)
            for g in C.generators]
    arrows = [replace(a, u_power=a.u_power + by[a.source].alexander
                      - by[a.target].alexander)
              for a in C.arrows]
    return make_complex(gens, arrows, C.shift)


class _Mut:
    """Mutable arrow-set view used by base changes and cancellation."""

    def __init__(self, C: KnotComplex):
        self.gens: dict[str, KnotGenerator] = dict(C.by_name())
        self.arrows: set[tuple[str, str, int]] = {
            (a.source, a.target, a.u_power) for a in C.arrows}
        self.shift = C.shift

    def freeze(self) -> KnotComplex:
        return make_complex(
            self.gens.values(),
            [KnotArrow(s, t, r) for (s, t, r) in self.arrows],
            self.shift)

    def toggle(self, s: str, t: str, r: int) -> None:
        key = (s, t, r)
        if key in self.arrows:
            self.arrows.remove(key)
        else:
            self.arrows.add(key)

    def add_to(self, a: str, b: str, j: int) -> None:
        """Base change b := b + U^j a (a valid filtered change of basis)."""
        ga, gb = self.gens[a], self.gens[b]
        if a == b or j < 0:
            raise ValueError("invalid base change")
        if ga.maslov - 2 * j != gb.maslov or ga.alexander - j > gb.alexander:
            raise ValueError("base change violates gradings")
        snapshot = list(self.arrows)
        for (s, t, r) in snapshot:
            if s == a:
                self.toggle(b, t, r + j)
        for (s, t, r) in snapshot:
            if t == b:
                self.toggle(s, a, r + j)

    def drop(self, s: str, t: str) -> int:
        return self.gens[s].alexander - self.gens[t].alexander


def reduce(C: KnotComplex, seed: int | None = None) -> KnotComplex:
    """Cancel all arrows with u_power 0 and Alexander drop 0."""
    m = _Mut(C)
    rng = random.Random(seed) if seed is not None else None
    while True:
        eligible = sorted((s, t) for (s, t, r) in m.arrows
                          if r == 0 and m.drop(s, t) == 0)
        if not eligible:
            return m.freeze()
        x, y = rng.choice(eligible) if rng else eligible[0]
        for (s, t, r) in m.arrows:
            if s == x and t == y and r > 0:
                raise ValueError(
                    f"cannot cancel {x}->{y}: parallel arrow with positive U power")
        ins = [(s, r) for (s, t, r) in m.arrows if t == y and s != x]
        outs = [(t, r) for (s, t, r) in m.arrows if s == x and t != y]
        m.arrows = {(s, t, r) for (s, t, r) in m.arrows
                    if x not in (s, t) and y not in (s, t)}
        del m.gens[x], m.gens[y]
        for (s, r1) in ins:
            for (t, r2) in outs:
                m.toggle(s, t, r1 + r2)


def _simplify(C: KnotComplex, family: str) -> KnotComplex:
    if not is_reduced(C):
        raise ValueError("complex must be reduced before simplification")
    m = _Mut(C)

    def fam_arrows(live):
        if family == "vertical":
            sel = [(r, m.drop(s, t), s, t) for (s, t, r) in m.arrows
                   if r == 0 and s in live and t in live]
            # sort by length = drop
            return sorted((d, s, t) for (_r, d, s, t) in sel)
        sel = [(s, t, r) for (s, t, r) in m.arrows
               if r + m.drop(s, t) == 0 and s in live and t in live]
        return sorted((r, s, t) for (s, t, r) in sel)

    live = set(m.gens)
    while True:
        fam = fam_arrows(live)
        if not fam:
            break
        ln, x, y = fam[0]
        # clear further arrows of the family into y
        while True:
            extra = sorted(
                (s, r) for (s, t, r) in m.arrows
                if t == y and s != x
                and ((family == "vertical" and r == 0)
                     or (family == "horizontal" and r + m.drop(s, t) == 0)))
            if not extra:
                break
            s, r = extra[0]
            m.add_to(x, s, r - ln if family == "horizontal" else 0)
        # clear further arrows of the family out of x
        while True:
            extra = sorted(
                (t, r) for (s, t, r) in m.arrows
                if s == x and t != y
                and ((family == "vertical" and r == 0)
                     or (family == "horizontal" and r + m.drop(s, t) == 0)))
            if not extra:
                break
            t, r = extra[0]
            m.add_to(t, y, r - ln if family == "horizontal" else 0)
        live -= {x, y}
    return m.freeze()


def vertical_simplify(C: KnotComplex) -> KnotComplex:
    """Base-change until vertical arrows form a disjoint matching."""
    return _simplify(C, "vertical")


def horizontal_simplify(C: KnotComplex) -> KnotComplex:
    """Base-change until horizontal arrows form a disjoint matching."""
    return _simplify(C, "horizontal")


def _matched(C: KnotComplex, pred) -> bool:
    seen: set[str] = set()
    for a in C.arrows:
        if pred(a):
            if a.source in seen or a.target in seen:
                return False
            seen.add(a.source)
            seen.add(a.target)
    return True


def is_vertically_simplified(C: KnotComplex) -> bool:
    return _matched(C, C.is_vertical)


def is_horizontally_simplified(C: KnotComplex) -> bool:
    return _matched(C, C.is_horizontal)


def simultaneous_simplify(C: KnotComplex, max_passes: int = 64):
    """Alternate vertical and horizontal simplification until both hold.

    Returns the simplified complex, or None if the bound is hit.
    """
    if not is_reduced(C):
        raise ValueError("complex must be reduced before simplification")
    for _ in range(max_passes):
        if is_vertically_simplified(C) and is_horizontally_simplified(C):
            return C
        C = vertical_simplify(C)
        if is_vertically_simplified(C) and is_horizontally_simplified(C):
            return C
        C = horizontal_simplify(C)
    return None


def _family_survivor(C: KnotComplex, family: str) -> list[str]:
    """Generators surviving elimination of one arrow family (graph model)."""
    if family == "vertical":
        arrows = {(a.source, a.target) for a in C.arrows if a.u_power == 0}
    else:
        arrows = {(a.source, a.target) for a in C.arrows if C.n_z(a) == 0}
    gens = {g.name for g in C.generators}
    while arrows:
        x, y = min(arrows)
        ins = [s for (s, t) in arrows if t == y and s != x]
        outs = [t for (s, t) in arrows if s == x and t != y]
        arrows = {(s, t) for (s, t) in arrows if x not in (s, t) and y not in (s, t)}
        for s in ins:
            for t in outs:
                key = (s, t)
                if key in arrows:
                    arrows.remove(key)
                else:
                    arrows.add(key)
        gens -= {x, y}
    return sorted(gens)


def tau(C: KnotComplex) -> int:
    """Alexander grading of the generator of the vertical homology."""
    bad = validate(C)
    if bad:
        raise ValueError("invalid complex: " + bad[0])
    if not is_reduced(C):
        raise ValueError("complex must be reduced")
    survivors = _family_survivor(C, "vertical")
    if len(survivors) != 1:
        raise ValueError(
            f"vertical homology has rank {len(survivors)}, not a knot complex")
    return C.gen(survivors[0]).alexander


def subquotient(C: KnotComplex, sel: str, bound: int | None, diff: str) -> KnotComplex:
    """Sub/quotient complex of one arrow family.

    sel: "at" (A == bound), "le" (A <= bound), "ge" (A >= bound); a bound
    of None selects everything.  diff: "dw" keeps horizontal arrows (n_z=0),
    "dz" keeps vertical arrows (u_power=0).  Arrows with an endpoint outside
    the selection are dropped, which implements both the subcomplex and the
    quotient conventions.
    """
    if sel not in ("at", "le", "ge"):
        raise ValueError(f"unknown selector {sel!r}")
    if diff not in ("dw", "dz"):
        raise ValueError(f"unknown differential {diff!r}")

    def keep(g: KnotGenerator) -> bool:
        if bound is None:
            return True
        if sel == "at":
            return g.alexander == bound
        if sel == "le":
            return g.alexander <= bound
        return g.alexander >= bound

    gens = [g for g in C.generators if keep(g)]
    names = {g.name for g in gens}
    fam = C.is_horizontal if diff == "dw" else C.is_vertical
    arrows = [a for a in C.arrows
              if a.source in names and a.target in names and fam(a)]
    return make_complex(gens, arrows, C.shift)


def homology_support(C: KnotComplex, family: str) -> frozenset[str]:
    """Canonical cycle generating the rank-one homology of one arrow family.

    family "dw" uses horizontal arrows, "dz" vertical arrows.  Deterministic:
    kernel vectors are reduced modulo the image and the smallest survivor in
    the generator order is returned.
    """
    order = sorted(g.name for g in C.generators)
    index = {n: i for i, n in enumerate(order)}
    fam = C.is_horizontal if family == "dw" else C.is_vertical
    cols: dict[int, int] = {}
    for a in C.arrows:
        if fam(a):
            cols[index[a.source]] = cols.get(index[a.source], 0) ^ (1 << index[a.target])
    ker = _linalg.kernel_basis(cols, len(order))
    img = _linalg.rref([v for v in cols.values() if v])
    reduced = sorted({v for v in (_linalg.reduce_mod(k, img) for k in ker) if v})
    if len(reduced) != 1:
        raise ValueError(
            f"{family} homology has rank {len(reduced)}, expected 1")
    mask = reduced[0]
    return frozenset(n for n in order if mask & (1 << index[n]))


def cohomology_support(C: KnotComplex, family: str) -> frozenset[str]:
    """Canonical functional vanishing on boundaries and pairing 1 with the
    canonical homology cycle of the family; free coordinates are zero."""
    order = sorted(g.name for g in C.generators)
    index = {n: i for i, n in enumerate(order)}
    fam = C.is_horizontal if family == "dw" else C.is_vertical
    cols: dict[int, int] = {}
    for a in C.arrows:
        if fam(a):
            cols[index[a.source]] = cols.get(index[a.source], 0) ^ (1 << index[a.target])
    rep = homology_support(C, family)
    rep_mask = 0
    for n in rep:
        rep_mask |= 1 << index[n]
    eqs = [(v, 0) for v in cols.values() if v] + [(rep_mask, 1)]
    f = _linalg.solve(eqs, len(order))
    if f is None:
        raise ValueError("no chain functional found")
    return frozenset(n for n in order if f & (1 << index[n]))
