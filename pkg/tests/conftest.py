import io
from importlib import resources

import numpy as np
import pytest

from qrec import Quiver, Rep
from qrec.io import parse_quiver_file
from qrec.transfer import Setting
from qrec.universe import all_indecomposables


def data_path(name: str) -> str:
    return str(resources.files("qrec") / "data" / name)


def run_cli(*argv: str) -> tuple[int, str]:
    from qrec.cli import main
    buf = io.StringIO()
    rc = main(list(argv), out=buf)
    return rc, buf.getvalue()


def random_acyclic(rng: np.random.Generator, n: int, density: float = 0.4) -> Quiver:
    """Random acyclic quiver on vertices 0..n-1, arrows only from smaller to larger labels."""
    vs = [str(k) for k in range(n)]
    arrows = [(f"a{a}_{b}", vs[a], vs[b])
              for a in range(n) for b in range(a + 1, n) if rng.random() < density]
    if not arrows:
        arrows = [("a0_1", "0", "1")]
    return Quiver(vs, arrows)


@pytest.fixture(scope="session")
def a2():
    return Quiver(["4", "1"], [("a", "4", "1")])


@pytest.fixture(scope="session")
def a2_universe(a2):
    return all_indecomposables(a2, 2)


@pytest.fixture(scope="session")
def a2_simples(a2):
    s4 = Rep.simple(a2, 2, "4")
    s1 = Rep.simple(a2, 2, "1")
    p = Rep(a2, 2, {"4": 1, "1": 1}, {"a": [[1]]})
    return s4, s1, p


@pytest.fixture(scope="session")
def a4_setting():
    qf = parse_quiver_file(data_path("a4_split.json"))
    return Setting.of(qf.quiver, qf.quotient_part, qf.p, qf.dim_bound, qf.mult_cap)


@pytest.fixture(scope="session")
def mirror_setting():
    qf = parse_quiver_file(data_path("a4_mirror_split.json"))
    return Setting.of(qf.quiver, qf.quotient_part, qf.p, qf.dim_bound, qf.mult_cap)


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, printed in the terminal summary."""
    def record(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(ACCEPTANCE[number])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
