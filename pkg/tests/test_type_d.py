import pytest

from bhf import cfk, ktd, type_d
from bhf.algebra import AlgebraElement as A, Idempotent as I
from conftest import load_cfk

DArrow = type_d.DArrow


def chain(n, label=A.R23, idem=I.I1, loop=False):
    gens = [(f"s{i}", idem) for i in range(n)]
    arrows = [DArrow(f"s{i}", f"s{i+1}", label) for i in range(n - 1)]
    if loop:
        arrows.append(DArrow(f"s{n-1}", "s0", label))
    return type_d.make_module(gens, arrows)


@pytest.fixture
def boxed():
    """A module with cancellable idempotent arrows."""
    from bhf import type_da
    D = ktd.ktd_basefree(load_cfk("five_gen"), 7)
    return type_da.box_da_d(type_da.builtin_H(), D)


def test_validate_accepts_chain():
    assert type_d.validate_d(chain(4)) == []


def test_validate_rejects_idempotent_mismatch():
    M = type_d.make_module([("x", I.I1), ("y", I.I1)],
                           [DArrow("x", "y", A.R2)])
    assert type_d.validate_d(M)


def test_validate_rejects_d_squared():
    M = type_d.make_module(
        [("x", I.I0), ("y", I.I1), ("z", I.I1)],
        [DArrow("x", "y", A.R1), DArrow("y", "z", A.R23)])
    assert any("d^2" in e for e in type_d.validate_d(M))


def test_cancel_basic():
    M = type_d.make_module(
        [("x", I.I1), ("y", I.I1), ("s", I.I0), ("t", I.I0)],
        [DArrow("x", "y", A.I1), DArrow("s", "y", A.R1),
         DArrow("x", "t", A.R2)])
    R = type_d.cancel(M, "x", "y")
    assert {n for n, _ in R.generators} == {"s", "t"}
    assert R.arrows == (DArrow("s", "t", A.R12),)


def test_cancel_parallel_arrow_correction():
    # cancelling x->y in the presence of a parallel labelled arrow keeps
    # the correction path s -> x -> y -> t alive
    M = type_d.make_module(
        [("x", I.I1), ("y", I.I1), ("s", I.I1), ("t", I.I1)],
        [DArrow("x", "y", A.I1), DArrow("x", "y", A.R23),
         DArrow("s", "x", A.R23), DArrow("y", "t", A.R23)])
    R = type_d.cancel(M, "x", "y")
    assert type_d.validate_d(R) == []


def test_reduce_removes_all_idempotent_arrows(boxed):
    R, trace = type_d.reduce_d(boxed)
    assert type_d.is_reduced_d(R)
    assert trace.pairs  # something was cancelled


def test_reduce_replay(boxed):
    R1, trace = type_d.reduce_d(boxed)
    R2, _ = type_d.reduce_d(boxed, list(trace.pairs))
    assert R1 == R2


def test_reduce_confluent(boxed):
    # Different cancellation orders can land on different (but base-change
    # equivalent) reduced forms, so compare after normalizing.
    base = type_d.minimize_d(type_d.reduce_d(boxed)[0])
    for seed in range(12):
        R = type_d.minimize_d(type_d.reduce_d(boxed, seed)[0])
        assert ktd._match_up_to_base_change(base, R) is not None


def test_d_squared_after_each_cancel(boxed):
    M = boxed
    while True:
        pairs = sorted((a.source, a.target) for a in M.arrows
                       if a.label in (A.I0, A.I1) and a.source != a.target)
        if not pairs:
            break
        M = type_d.cancel(M, *pairs[0])
        assert type_d.validate_d(M) == []


def test_isomorphic_identity():
    M = chain(5)
    mapping = type_d.isomorphic_d(M, M)
    assert mapping == {f"s{i}": f"s{i}" for i in range(5)}


def test_isomorphic_relabelled():
    M = chain(4)
    N = type_d.make_module(
        [(f"t{i}", I.I1) for i in range(4)],
        [DArrow(f"t{i}", f"t{i+1}", A.R23) for i in range(3)])
    mapping = type_d.isomorphic_d(M, N)
    assert mapping == {f"s{i}": f"t{i}" for i in range(4)}


def test_isomorphic_distinguishes_direction():
    M = type_d.make_module(
        [("x", I.I0), ("y", I.I1), ("z", I.I1)],
        [DArrow("x", "y", A.R1), DArrow("z", "y", A.R23)])
    N = type_d.make_module(
        [("x", I.I0), ("y", I.I1), ("z", I.I1)],
        [DArrow("x", "y", A.R1), DArrow("y", "z", A.R23)])
    assert type_d.isomorphic_d(M, N) is None


def test_isomorphic_symmetric(boxed):
    R, _ = type_d.reduce_d(boxed)
    S, _ = type_d.reduce_d(boxed, 3)
    assert (type_d.isomorphic_d(R, S) is None) == \
           (type_d.isomorphic_d(S, R) is None)


def test_base_change_is_involution():
    M = chain(3)
    B = type_d.base_change(M, "s0", "s1", A.I1)
    assert B != M
    assert type_d.base_change(B, "s0", "s1", A.I1) == M


def test_base_change_preserves_validity(boxed):
    R, _ = type_d.reduce_d(boxed)
    idems = R.idems()
    names = sorted(idems)
    done = 0
    for g in names:
        for h in names:
            if g != h and idems[g] is idems[h]:
                B = type_d.base_change(R, g, h, A.I1 if idems[g] is I.I1 else A.I0)
                assert type_d.validate_d(B) == []
                done += 1
                if done >= 10:
                    return


def test_minimize_removes_spurious_arrow():
    # replacing k1 by k1 + k2 merges the two parallel rho1 arrows
    M = type_d.make_module(
        [("x", I.I0), ("k1", I.I1), ("k2", I.I1)],
        [DArrow("x", "k1", A.R1), DArrow("x", "k2", A.R1)])
    R = type_d.minimize_d(M)
    assert len(R.arrows) == 1
    assert type_d.validate_d(R) == []


def test_minimize_fixed_point(boxed):
    R, _ = type_d.reduce_d(boxed)
    M = type_d.minimize_d(R)
    assert type_d.minimize_d(M) == M
    assert type_d.validate_d(M) == []


def test_to_dot(boxed):
    R, _ = type_d.reduce_d(boxed)
    dot = type_d.to_dot(R)
    assert dot.startswith("digraph")
    assert dot == type_d.to_dot(R)
