import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrec import BoundExceeded, Quiver, direct_sum, hom_basis
from qrec.config import override
from qrec.homology import cokernel, decompose, ext_middle_terms, image, kernel
from qrec.quiver import RepMor
from qrec.subcat import (KIND_OPS, Subcat, close, enumerate_subcats, find_violation,
                         hasse_edges, is_epibrick, is_ice, is_monobrick, is_torsion,
                         is_wide, satisfies, to_dot)
from qrec.universe import all_indecomposables


def linear_a(n: int) -> Quiver:
    return Quiver([str(k) for k in range(n)], [(f"e{k}", str(k), str(k + 1)) for k in range(n - 1)])


@pytest.fixture(scope="module")
def a3_universe():
    return all_indecomposables(linear_a(3), 2)


def S(u, *names):
    return Subcat.from_names(u, names)


# --- close ----------------------------------------------------------------------------

def test_close_examples(a2_universe):
    u = a2_universe
    assert close(S(u, "1", "4/1"), {"cokernels"}) == S(u, "1", "4/1", "4")
    assert close(S(u, "4", "1"), {"extensions"}) == S(u, "4", "1", "4/1")
    for ops in (["images"], ["extensions", "kernels"], ["quotients"]):
        assert len(close(Subcat(u, []), ops)) == 0


def test_close_rejects_unknown_operation(a2_universe):
    with pytest.raises(ValueError):
        close(Subcat(a2_universe, []), {"pushouts"})


OPS = sorted(KIND_OPS["ice"] | KIND_OPS["torsion"] | KIND_OPS["wide"])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_close_extensive_monotone_idempotent(a3_universe, data):
    u = a3_universe
    idx = list(range(len(u)))
    small = data.draw(st.sets(st.sampled_from(idx), max_size=3))
    extra = data.draw(st.sets(st.sampled_from(idx), max_size=2))
    ops = data.draw(st.sets(st.sampled_from(OPS), min_size=1))
    a, b = Subcat(u, small), Subcat(u, small | extra)
    ca, cb = close(a, ops), close(b, ops)
    assert a <= ca
    assert ca <= cb
    assert close(ca, ops) == ca


# --- predicates ---------------------------------------------------------------------

def test_is_ice_examples(a2_universe):
    u = a2_universe
    assert is_ice(S(u, "4", "4/1"))
    assert not is_ice(S(u, "1", "4/1"))
    assert is_ice(Subcat(u, range(len(u))))


def test_violation_witness(a2_universe):
    u = a2_universe
    v = find_violation(S(u, "1", "4/1"), KIND_OPS["ice"])
    assert v.op == "cokernels"
    assert [u.names[i] for i in v.escaped] == ["4"]
    assert "escapes 4" in v.describe(u)


def test_brick_examples(a2_universe):
    u = a2_universe
    assert is_epibrick(S(u, "4", "1")) and is_monobrick(S(u, "4", "1"))
    assert is_monobrick(S(u, "1", "4/1")) and not is_epibrick(S(u, "1", "4/1"))
    assert is_epibrick(S(u, "4/1", "4")) and not is_monobrick(S(u, "4/1", "4"))


def _oracle_closed(u, members, ops, cap=2):
    """Brute force over every morphism between sums of at most ``cap`` members."""
    mem = sorted(members)
    objs = [()] + [t for k in range(1, cap + 1) for t in itertools.combinations_with_replacement(mem, k)]
    built = {t: direct_sum([u[i] for i in t], u.quiver, u.p) for t in objs}

    def inside(rep):
        return all(i in members for part in decompose(rep) for i in u.identify(part))

    for s, t in itertools.product(objs, repeat=2):
        basis = hom_basis(built[s], built[t])
        for coeffs in itertools.product(range(u.p), repeat=len(basis)):
            f = RepMor.zero(built[s], built[t])
            for c, g in zip(coeffs, basis):
                f = f + g.scale(c)
            if "images" in ops and not inside(image(f)[0]):
                return False
            if "cokernels" in ops and not inside(cokernel(f)[0]):
                return False
            if "kernels" in ops and not inside(kernel(f)[0]):
                return False
    if "quotients" in ops:
        for n in range(len(u)):
            if n in members:
                continue
            for s in objs:
                if any(_surjects(built[s], u[n])):
                    return False
    if "extensions" in ops:
        for a, b in itertools.product(mem, repeat=2):
            if not all(inside(x) for x in ext_middle_terms(u[a], u[b])):
                return False
    return True


def _surjects(m, n):
    basis = hom_basis(m, n)
    for coeffs in itertools.product(range(m.p), repeat=len(basis)):
        f = RepMor.zero(m, n)
        for c, g in zip(coeffs, basis):
            f = f + g.scale(c)
        yield f.is_epi()


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["ice", "torsion", "wide"])
def test_predicates_match_brute_force_on_a3(a3_universe, kind):
    u = a3_universe
    for k in range(len(u) + 1):
        for s in itertools.combinations(range(len(u)), k):
            members = frozenset(s)
            assert satisfies(Subcat(u, members), kind) == _oracle_closed(u, members, KIND_OPS[kind]), \
                (kind, [u.names[i] for i in s])


# --- enumeration ------------------------------------------------------------------

def test_enumerate_examples(a2_universe):
    got = [str(c) for c in enumerate_subcats(a2_universe, "ice")]
    assert sorted(got) == sorted(["add{0}", "add{1}", "add{4}", "add{4/1}", "add{4,1,4/1}", "add{4,4/1}"])
    b = all_indecomposables(Quiver(["2", "3"], [("c", "2", "3")]), 2)
    got = [str(c) for c in enumerate_subcats(b, "ice")]
    assert sorted(got) == sorted(["add{0}", "add{2}", "add{3}", "add{2/3}", "add{2,3,2/3}", "add{2,2/3}"])
    one = all_indecomposables(Quiver(["s"]), 2)
    assert [str(c) for c in enumerate_subcats(one, "ice")] == ["add{0}", "add{s}"]


@pytest.mark.parametrize("n,ice,catalan", [(2, 6, 5), (3, 22, 14), (4, 90, 42)])
def test_enumeration_counts_linear_a(n, ice, catalan):
    u = all_indecomposables(linear_a(n), 2)
    assert len(enumerate_subcats(u, "ice")) == ice
    assert len(enumerate_subcats(u, "torsion")) == catalan
    assert len(enumerate_subcats(u, "wide")) == catalan


def test_torsion_and_wide_are_ice(a4_setting):
    u = a4_setting.ul
    ice = set(enumerate_subcats(u, "ice"))
    for kind in ("torsion", "wide"):
        for c in enumerate_subcats(u, kind):
            assert c.with_kind("ice") in ice


def test_canonical_order_and_determinism(a3_universe):
    first = enumerate_subcats(a3_universe, "ice")
    again = enumerate_subcats(a3_universe, "ice")
    assert [c.indices for c in first] == [c.indices for c in again]
    keys = [(len(c), c.indices) for c in first]
    assert keys == sorted(keys)


def test_include_empty_for_bricks(a2_universe):
    with_empty = enumerate_subcats(a2_universe, "epibrick", include_empty=True)
    without = enumerate_subcats(a2_universe, "epibrick")
    assert len(with_empty) == len(without) + 1 and len(with_empty[0]) == 0


def test_enumeration_cap(a4_setting):
    with override(enumeration_cap=5):
        with pytest.raises(BoundExceeded):
            enumerate_subcats(a4_setting.ul, "ice")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_brick_predicates_ignore_member_order(a3_universe, data):
    u = a3_universe
    members = data.draw(st.lists(st.sampled_from(range(len(u))), unique=True, max_size=4))
    shuffled = data.draw(st.permutations(members))
    assert is_epibrick(Subcat(u, members)) == is_epibrick(Subcat(u, shuffled))
    assert is_monobrick(Subcat(u, members)) == is_monobrick(Subcat(u, shuffled))


def test_semibricks_pass_both(a4_setting):
    u = a4_setting.ul
    for k in range(1, 4):
        for s in itertools.combinations(range(len(u)), k):
            zero_cross = all(u.hom_table[a, b] == 0 for a in s for b in s if a != b)
            if zero_cross and all(u.hom_table[a, a] == 1 for a in s):
                c = Subcat(u, s)
                assert is_epibrick(c) and is_monobrick(c)


def test_is_torsion_and_wide_examples(a2_universe):
    u = a2_universe
    assert is_torsion(S(u, "4", "4/1")) and not is_torsion(S(u, "4/1"))
    assert is_wide(S(u, "4")) and not is_wide(S(u, "4", "4/1"))


# --- Hasse / DOT ----------------------------------------------------------------------

def test_hasse_and_dot(a2_universe):
    cats = enumerate_subcats(a2_universe, "ice")
    edges = hasse_edges(cats)
    for i, j in edges:
        assert cats[i] <= cats[j] and cats[i] != cats[j]
    assert (0, 1) in edges
    dot = to_dot(cats)
    assert dot.startswith("digraph") and dot.count("->") == len(edges)
    assert np.all([f"n{i}" in dot for i in range(len(cats))])
