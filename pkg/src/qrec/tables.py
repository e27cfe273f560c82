"""The four correspondence tables of a split: two from the i-side, two from the j-side."""

from __future__ import annotations

from dataclasses import dataclass

from .subcat import enumerate_subcats
from .transfer import Setting, transfer


@dataclass
class Table:
    title: str
    direction: str
    left: str
    right: str
    rows: list[tuple[str, str]]
    certified: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.certified)


def correspondence_tables(st: Setting, kind: str = "ice") -> list[Table]:
    """i_* and an i-side preimage on mod A; a j-side extension and the j^* preimage on mod B.

    Whichever of i^*/i^! (and j_!/j_*) is exact for this split is used.
    """
    ex = st.r.exactness
    a_list = enumerate_subcats(st.ua, kind, st.mult_cap)
    b_list = enumerate_subcats(st.ub, kind, st.mult_cap)
    i_pre = "preimage_i_upper" if ex["i_upper"] else "preimage_i_shriek"
    j_ext = "from_j_side_shriek" if ex["j_lower_shriek"] else "from_j_side_star"
    plan = [
        ("i_* : mod A -> mod Lambda", "from_i_side", "A", a_list),
        (f"preimage under {'i^*' if ex['i_upper'] else 'i^!'} : mod A -> mod Lambda", i_pre, "A", a_list),
        (f"{'j_!' if ex['j_lower_shriek'] else 'j_*'} : mod B -> mod Lambda", j_ext, "B", b_list),
        ("preimage under j^* : mod B -> mod Lambda", "preimage_j", "B", b_list),
    ]
    out = []
    for title, direction, side, cats in plan:
        rows, certs = [], []
        for c in cats:
            res, cert = transfer(st, kind, direction, c)
            rows.append((str(c), str(res)))
            certs.append(cert.ok)
        out.append(Table(title, direction, f"mod {side}_{kind}", f"mod Lambda_{kind}", rows, certs))
    return out


def render_text(tables: list[Table]) -> str:
    chunks = []
    for t in tables:
        lines = [f"== {t.title} ==", f"{t.left} | {t.right}"]
        lines += [f"{a} | {b}" for a, b in t.rows]
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
