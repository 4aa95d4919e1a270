"""Left type D modules over the genus-1 surface algebra.

A module is a set of generators, each carrying an idempotent, and a set of
labelled arrows x -> a y with a a nonzero algebra element satisfying
iota(x) a iota(y) = a.  The structure equation is d^2 = 0: for every pair
of composable arrows the products along two-step paths cancel mod 2.
Arrows labelled by an idempotent are the differential part and are the
ones removed by homotopy reduction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (AlgebraElement, Idempotent, idem_element, is_idempotent,
                      left_idem, multiply, right_idem)

__all__ = [
    "DArrow", "TypeDModule", "ReductionTrace", "make_module",
    "validate_d", "is_valid_d", "is_reduced_d", "cancel", "reduce_d",
    "base_change", "minimize_d", "isomorphic_d", "to_dot",
]


@dataclass(frozen=True, order=True)
class DArrow:
    source: str
    target: str
    label: AlgebraElement


@dataclass(frozen=True)
class TypeDModule:
    generators: tuple[tuple[str, Idempotent], ...]
    arrows: tuple[DArrow, ...]
    tags: dict = field(default_factory=dict, compare=False)

    def idems(self) -> dict[str, Idempotent]:
        return dict(self.generators)

    def names(self) -> list[str]:
        return [n for n, _ in self.generators]


def make_module(gens, arrows, tags=None) -> TypeDModule:
    gtuple = tuple(sorted(gens))
    atuple = tuple(sorted(set(arrows)))
    return TypeDModule(gtuple, atuple, dict(tags or {}))


def validate_d(M: TypeDModule) -> list[str]:
    out: list[str] = []
    names = M.names()
    if len(set(names)) != len(names):
        return ["duplicate generator names"]
    idems = M.idems()
    for a in M.arrows:
        if a.source not in idems or a.target not in idems:
            out.append(f"arrow {a.source}->{a.target} references unknown generator")
            continue
        if a.label is AlgebraElement.ZERO:
            out.append(f"arrow {a.source}->{a.target} labelled zero")
            continue
        if left_idem(a.label) is not idems[a.source]:
            out.append(f"arrow {a.source}->{a.target}: label {a.label.value} "
                       f"does not start at {idems[a.source].value}")
        if right_idem(a.label) is not idems[a.target]:
            out.append(f"arrow {a.source}->{a.target}: label {a.label.value} "
                       f"does not end at {idems[a.target].value}")
    if out:
        return out
    outs: dict[str, list[DArrow]] = {}
    for a in M.arrows:
        outs.setdefault(a.source, []).append(a)
    counts: dict[tuple[str, str, AlgebraElement], int] = {}
    for a in M.arrows:
        for b in outs.get(a.target, ()):
            prod = multiply(a.label, b.label)
            if prod is not AlgebraElement.ZERO:
                key = (a.source, b.target, prod)
                counts[key] = counts.get(key, 0) ^ 1
    for (src, tgt, lab), parity in sorted(counts.items(), key=str):
        if parity:
            out.append(f"d^2 != 0: odd count {src} -> {lab.value} {tgt}")
    return out


def is_valid_d(M: TypeDModule) -> bool:
    return not validate_d(M)


def is_reduced_d(M: TypeDModule) -> bool:
    return all(not is_idempotent(a.label) for a in M.arrows)


def cancel(M: TypeDModule, source: str, target: str) -> TypeDModule:
    """Cancel one idempotent-labelled arrow by homotopy reduction."""
    idems = M.idems()
    edge = DArrow(source, target, idem_element(idems.get(source)) if source in idems
                  else AlgebraElement.ZERO)
    if source not in idems or target not in idems or edge not in M.arrows:
        raise ValueError(f"no idempotent arrow {source} -> {target}")
    # Parallel arrows source -> target contribute a correction term: the
    # inverse of (1 + N) with N the sum of their labels is 1 + N because
    # same-idempotent chords multiply to zero.
    parallel = [a.label for a in M.arrows
                if a.source == source and a.target == target and a is not edge
                and a.label is not edge.label]
    ins = [(a.source, a.label) for a in M.arrows
           if a.target == target and a.source not in (source, target)]
    outs = [(a.target, a.label) for a in M.arrows
            if a.source == source and a.target not in (source, target)]
    kept = {a for a in M.arrows if source not in (a.source, a.target)
            and target not in (a.source, a.target)}
    toggles: dict[DArrow, int] = {}
    for (s, c1) in ins:
        for (t, c2) in outs:
            for mid in [None] + parallel:
                c = multiply(c1, c2) if mid is None else multiply(multiply(c1, mid), c2)
                if c is not AlgebraElement.ZERO:
                    arr = DArrow(s, t, c)
                    toggles[arr] = toggles.get(arr, 0) ^ 1
    arrows = set(kept)
    for arr, parity in toggles.items():
        if parity:
            arrows ^= {arr}
    gens = [(n, i) for n, i in M.generators if n not in (source, target)]
    tags = {n: v for n, v in M.tags.items() if n not in (source, target)}
    return make_module(gens, arrows, tags)


@dataclass(frozen=True)
class ReductionTrace:
    pairs: tuple[tuple[str, str], ...]


def reduce_d(M: TypeDModule, order=None) -> tuple[TypeDModule, ReductionTrace]:
    """Cancel idempotent arrows until none remain.

    order: None for deterministic lexicographic choice, an int seed for a
    random order, or an explicit list of (source, target) pairs to replay.
    """
    trace: list[tuple[str, str]] = []
    if isinstance(order, (list, tuple)):
        for (s, t) in order:
            M = cancel(M, s, t)
            trace.append((s, t))
        return M, ReductionTrace(tuple(trace))
    rng = random.Random(order) if isinstance(order, int) else None
    while True:
        eligible = sorted((a.source, a.target) for a in M.arrows
                          if is_idempotent(a.label))
        if not eligible:
            return M, ReductionTrace(tuple(trace))
        s, t = rng.choice(eligible) if rng else eligible[0]
        M = cancel(M, s, t)
        trace.append((s, t))


def base_change(M: TypeDModule, gen: str, other: str,
                coeff: AlgebraElement) -> TypeDModule:
    """Invertible change of basis replacing gen by gen + coeff*other.

    Requires gen != other, iota(gen) = left(coeff) and
    iota(other) = right(coeff).  The result is isomorphic to the input.
    """
    idems = M.idems()
    if gen == other:
        raise ValueError("base change needs two distinct generators")
    if coeff is AlgebraElement.ZERO:
        raise ValueError("base change coefficient must be nonzero")
    if idems[gen] is not left_idem(coeff) or idems[other] is not right_idem(coeff):
        raise ValueError("base change coefficient has incompatible idempotents")
    toggles: dict[DArrow, int] = {}

    def flip_arrow(a: DArrow) -> None:
        toggles[a] = toggles.get(a, 0) ^ 1

    for a in M.arrows:
        flip_arrow(a)
        if a.source == other:
            lab = multiply(coeff, a.label)
            if lab is not AlgebraElement.ZERO:
                flip_arrow(DArrow(gen, a.target, lab))
    # rewrite targets: the old gen equals (new gen) + coeff*other
    for a, parity in list(toggles.items()):
        if parity and a.target == gen:
            lab = multiply(a.label, coeff)
            if lab is not AlgebraElement.ZERO:
                flip_arrow(DArrow(a.source, other, lab))
    arrows = [a for a, p in toggles.items() if p]
    return make_module(M.generators, arrows, M.tags)


def minimize_d(M: TypeDModule, max_steps: int = 10000) -> TypeDModule:
    """Greedily shrink the arrow set of a reduced module by base changes.

    Homotopy reduction can leave arrows that an invertible change of basis
    removes; repeatedly apply the first strictly-improving change until
    none exists.  The output is isomorphic to the input.
    """
    idems = M.idems()
    for _ in range(max_steps):
        best = None
        names = sorted(idems)
        for gen in names:
            for other in names:
                if other == gen:
                    continue
                for coeff in sorted(AlgebraElement, key=lambda e: e.value):
                    if coeff is AlgebraElement.ZERO:
                        continue
                    if (idems[gen] is not left_idem(coeff)
                            or idems[other] is not right_idem(coeff)):
                        continue
                    cand = base_change(M, gen, other, coeff)
                    if len(cand.arrows) < len(M.arrows):
                        best = cand
                        break
                if best:
                    break
            if best:
                break
        if best is None:
            return M
        M = best
    raise ValueError("basis minimization did not converge")


def _signature_d(M: TypeDModule, name: str) -> tuple:
    idems = M.idems()
    outs = sorted((a.label.value, idems[a.target].value)
                  for a in M.arrows if a.source == name)
    ins = sorted((a.label.value, idems[a.source].value)
                 for a in M.arrows if a.target == name)
    return (idems[name].value, tuple(outs), tuple(ins))


def isomorphic_d(M: TypeDModule, N: TypeDModule) -> dict[str, str] | None:
    """Search for a generator bijection matching idempotents and arrows.

    Returns the mapping M -> N, or None when no permutation-level
    isomorphism exists (base-change isomorphisms are not attempted).
    """
    if len(M.generators) != len(N.generators) or len(M.arrows) != len(N.arrows):
        return None
    sig_m = {n: _signature_d(M, n) for n in M.names()}
    sig_n = {n: _signature_d(N, n) for n in N.names()}
    if sorted(sig_m.values()) != sorted(sig_n.values()):
        return None
    m_arrows = set(M.arrows)
    n_arrows = set(N.arrows)
    m_out: dict[str, list[DArrow]] = {}
    for a in M.arrows:
        m_out.setdefault(a.source, []).append(a)
    # most-constrained-first: rarest signatures early
    order = sorted(sig_m, key=lambda n: (sorted(sig_m.values()).count(sig_m[n]), n))
    candidates = {n: sorted(k for k in sig_n if sig_n[k] == sig_m[n]) for n in order}

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(n: str, k: str) -> bool:
        for a in M.arrows:
            if a.source == n and a.target in mapping:
                if DArrow(k, mapping[a.target], a.label) not in n_arrows:
                    return False
            if a.target == n and a.source in mapping:
                if DArrow(mapping[a.source], k, a.label) not in n_arrows:
                    return False
            if a.source == n and a.target == n:
                if DArrow(k, k, a.label) not in n_arrows:
                    return False
        # reverse direction: arrows of N between already-chosen images
        inv = {v: u for u, v in mapping.items()}
        for b in N.arrows:
            if b.source == k and b.target == k:
                if DArrow(n, n, b.label) not in m_arrows:
                    return False
                continue
            if b.source == k and b.target in inv:
                if DArrow(n, inv[b.target], b.label) not in m_arrows:
                    return False
            if b.target == k and b.source in inv:
                if DArrow(inv[b.source], n, b.label) not in m_arrows:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        n = order[i]
        for k in candidates[n]:
            if k in used or not consistent(n, k):
                continue
            mapping[n] = k
            used.add(k)
            if search(i + 1):
                return True
            del mapping[n]
            used.remove(k)
        return False

    return dict(mapping) if search(0) else None


def to_dot(M: TypeDModule) -> str:
    lines = ["digraph {"]
    for n, i in sorted(M.generators):
        lines.append(f'  "{n}" [label="{n} [{i.value}]"];')
    for a in sorted(M.arrows):
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.label.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
