import pytest

from qrec import HypothesisFailed
from qrec.io import parse_subcat_file
from qrec.subcat import Subcat, enumerate_subcats, is_ice, is_torsion
from qrec.tables import correspondence_tables, render_text
from qrec.transfer import (DIRECTIONS, glue_bricks, preimage, transfer, verify_bijection,
                           verify_sub_recollement)

from conftest import data_path


def S(u, *names):
    return Subcat.from_names(u, names)


# --- transfer maps ------------------------------------------------------------------

def test_from_i_side(a4_setting):
    st = a4_setting
    out, cert = transfer(st, "ice", "from_i_side", S(st.ua, "4", "4/1"))
    assert out == S(st.ul, "4", "4/1") and cert.ok


def test_preimage_of_zero_is_the_j_side(a4_setting):
    st = a4_setting
    out, cert = transfer(st, "ice", "preimage_i_upper", Subcat(st.ua, []))
    assert out == S(st.ul, "2", "3", "2/3") and cert.ok
    with pytest.raises(HypothesisFailed):
        transfer(st, "ice", "preimage_i_shriek", Subcat(st.ua, []))


def test_preimage_j_row(a4_setting):
    st = a4_setting
    out, cert = transfer(st, "ice", "preimage_j", S(st.ub, "2", "2/3"))
    assert out == S(st.ul, "4", "1", "4/1", "4/1/2", "1/2", "2", "2/3", "4/1/2/3", "1/2/3")
    assert cert.ok
    out, _ = transfer(st, "ice", "preimage_j", Subcat(st.ub, []))
    assert out == S(st.ul, "4", "1", "4/1")


def test_from_j_side_branches(a4_setting):
    st = a4_setting
    out, cert = transfer(st, "ice", "from_j_side_shriek", S(st.ub, "2"))
    assert out == S(st.ul, "2") and cert.ok
    out, cert = transfer(st, "ice", "from_j_side_star", S(st.ub, "2"))
    assert out == S(st.ul, "4/1/2") and cert.ok
    with pytest.raises(HypothesisFailed) as exc:
        transfer(st, "torsion", "from_j_side_star", S(st.ub, "2"))
    assert "P(4)" in str(exc.value.witness)


def test_restrict_directions(a4_setting):
    st = a4_setting
    c = S(st.ul, "4", "1", "4/1", "2", "1/2", "4/1/2")
    out, cert = transfer(st, "ice", "restrict_j", c)
    assert out == S(st.ub, "2") and cert.ok
    with pytest.raises(HypothesisFailed):
        transfer(st, "ice", "restrict_j", S(st.ul, "2"))
    out, cert = transfer(st, "ice", "restrict_i_upper", S(st.ul, "4/1"))
    assert out == S(st.ua, "4/1") and cert.ok


def test_wrong_universe_is_rejected(a4_setting):
    with pytest.raises(ValueError):
        transfer(a4_setting, "ice", "from_i_side", S(a4_setting.ub, "2"))
    with pytest.raises(ValueError):
        transfer(a4_setting, "wide", "from_i_side", S(a4_setting.ua, "4"))


@pytest.mark.parametrize("kind", ["ice", "torsion"])
def test_every_applicable_transfer_certifies(a4_setting, kind):
    """The theorems as executable assertions: hypotheses pass implies certificate passes."""
    st = a4_setting
    sources = {"from_i_side": st.ua, "preimage_i_upper": st.ua, "preimage_i_shriek": st.ua,
               "from_j_side_star": st.ub, "from_j_side_shriek": st.ub, "preimage_j": st.ub}
    ran = 0
    for direction in DIRECTIONS:
        u = sources.get(direction, st.ul)
        cats = enumerate_subcats(u, kind)
        for c in cats:
            try:
                out, cert = transfer(st, kind, direction, c)
            except HypothesisFailed:
                continue
            ran += 1
            assert cert.ok, (direction, str(c), cert.violation)
            assert (is_ice if kind == "ice" else is_torsion)(out)
    assert ran > 0


# --- tables -----------------------------------------------------------------------------

def test_tables_match_golden(a4_setting):
    tables = correspondence_tables(a4_setting)
    assert all(t.ok for t in tables)
    assert render_text(tables) == open(data_path("a4_split_tables.txt")).read()
    rows = dict(tables[1].rows)
    assert rows["add{1}"] == "add{1,2,3,1/2,2/3,1/2/3}"
    assert dict(tables[0].rows)["add{1}"] == "add{1}"
    assert dict(tables[3].rows)["add{0}"] == "add{4,1,4/1}"


def test_table_two_row_for_add3(a4_setting):
    st = a4_setting
    w = preimage(st, "j_upper", S(st.ub, "3"))
    assert w == S(st.ul, "4", "1", "4/1", "3")


# --- bijection ---------------------------------------------------------------------

def test_bijection(a4_setting):
    rep = verify_bijection(a4_setting)
    assert rep.ok and len(rep.ambient) == len(rep.quotient) == 6
    js = rep.to_json()
    assert len(js["matching"]) == 6 and not js["problems"]


def test_bijection_without_filter_fails(a4_setting):
    rep = verify_bijection(a4_setting, use_filter=False)
    assert not rep.ok and len(rep.ambient) > 6


def test_bijection_minimal_split():
    from qrec import Quiver
    from qrec.transfer import Setting
    st = Setting.of(Quiver(["u", "v"], [("a", "u", "v")]), ["v"])
    rep = verify_bijection(st)
    assert rep.ok and len(rep.ambient) == len(rep.quotient) == 2


# --- sub-recollements ---------------------------------------------------------------

def test_sub_recollement_examples(a4_setting):
    st = a4_setting
    full = Subcat(st.ul, range(len(st.ul)))
    assert verify_sub_recollement(st, full)["ok"]
    c, _ = transfer(st, "ice", "preimage_j", S(st.ub, "2", "2/3"))
    rep = verify_sub_recollement(st, c)
    assert rep["ok"] and rep["quotient_part"] == "add{2,2/3}"
    base = S(st.ul, "4", "1", "4/1")
    rep = verify_sub_recollement(st, base)
    assert rep["ok"] and rep["quotient_part"] == "add{0}"


def test_sub_recollement_hypotheses(a4_setting):
    st = a4_setting
    with pytest.raises(HypothesisFailed):
        verify_sub_recollement(st, S(st.ul, "1", "4/1"))
    with pytest.raises(HypothesisFailed):
        verify_sub_recollement(st, S(st.ul, "2"))


# --- brick gluing ----------------------------------------------------------------------

def test_glue_examples(a4_setting, mirror_setting):
    st = a4_setting
    out, cert, table = glue_bricks(st, S(st.ua, "4/1"), S(st.ub, "2/3"), "monobrick", "intermediate")
    assert out == S(st.ul, "4/1", "2/3") and cert.ok
    assert table["4/1->2/3"] == 0 and table["2/3->4/1"] == 0
    m = mirror_setting
    out, cert, _ = glue_bricks(m, S(m.ua, "4", "1"), S(m.ub, "2", "3"), "epibrick", "star")
    assert len(out) == 4 and cert.ok
    out, cert, _ = glue_bricks(st, Subcat(st.ua, []), S(st.ub, "2"), "epibrick", "shriek")
    assert out == S(st.ul, "2") and cert.ok


def test_glue_star_needs_i_shriek_exact(a4_setting):
    st = a4_setting
    with pytest.raises(HypothesisFailed):
        glue_bricks(st, S(st.ua, "4", "1"), S(st.ub, "2", "3"), "epibrick", "star")


def test_glue_rejects_non_brick_inputs(a4_setting):
    st = a4_setting
    with pytest.raises(HypothesisFailed):
        glue_bricks(st, S(st.ua, "1", "4/1"), Subcat(st.ub, []), "epibrick", "intermediate")


def test_subcat_file_forms(a4_setting):
    u = a4_setting.ul
    assert parse_subcat_file({"members": ["4/1", "0"]}, u) == S(u, "4/1")
    assert parse_subcat_file(["2/3"], u) == S(u, "2/3")
    by_dims = parse_subcat_file({"members": [{"dims": {"4": 1, "1": 1, "2": 0, "3": 0}}]}, u)
    assert by_dims == S(u, "4/1")
