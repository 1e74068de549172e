import pytest
from hypothesis import strategies as st

from drazinlab.fields import GF, QQ
from drazinlab.linalg import Matrix

ACCEPTANCE_LINES = []

EXACT_FIELDS = [QQ, GF(2), GF(5), GF(7)]


@st.composite
def matrices(draw, field=None, n=None, rows=None, cols=None, bound=3):
    F = field if field is not None else draw(st.sampled_from(EXACT_FIELDS))
    if n is not None:
        rows = cols = n
    r = rows if rows is not None else draw(st.integers(1, 4))
    c = cols if cols is not None else draw(st.integers(1, 4))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return Matrix(F, [entries[i * c:(i + 1) * c] for i in range(r)], c)


@st.composite
def square_pairs(draw, count=2):
    F = draw(st.sampled_from(EXACT_FIELDS))
    n = draw(st.integers(1, 4))
    return tuple(draw(matrices(field=F, n=n)) for _ in range(count))


def M(rows, field=QQ):
    return Matrix(field, rows)


@pytest.fixture
def record_acceptance():
    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
