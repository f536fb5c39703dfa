import pytest

from ellq.elements import q_delta_element, random_symmetric
from ellq.errors import ExprSyntaxError, UnknownIdentifierError
from ellq.expr import to_text
from ellq.library import dump, dumps, load, loads
from ellq.roots import Grade, RootData, WeightForm
from ellq.star import equal_numeric

TEXT = """\
# two elements
@ grade=1 label=q
theta(x_1_1 + u_1/2 - 0.3) * theta(x_1_1 + u_1/2 + 0.3 - tau)

@ grade=2 label=pair
theta(x_1_1 - x_2_1 - 2*tau) / theta(x_1_1 - x_2_1)
"""


def test_loads():
    els = loads(TEXT)
    assert [e.label for e in els] == ["q", "pair"]
    assert els[1].grade == Grade((2,))


def test_round_trip(params, rng, tmp_path):
    A2 = RootData.type_A(2)
    els = [random_symmetric(Grade((1, 1)), A2, rng, label="f"),
           q_delta_element(0, WeightForm((1, 1)), A2, rng)]
    again = loads(dumps(els))
    assert [to_text(e.body) for e in again] == [to_text(e.body) for e in els]
    assert [e.grade for e in again] == [e.grade for e in els]
    assert dumps(again) == dumps(els)
    for a, b in zip(again, els):
        assert equal_numeric(a, b, params, rng).passed
    path = tmp_path / "lib.txt"
    dump(els, path)
    assert dumps(load(path)) == dumps(els)


def test_identifier_outside_context_reports_line():
    bad = "@ grade=1\ntheta(x_2_1)\n"
    with pytest.raises(UnknownIdentifierError) as info:
        loads(bad)
    assert "line 2" in str(info.value) or getattr(info.value, "line", None) == 2


def test_syntax_error_reports_line():
    with pytest.raises(ExprSyntaxError) as info:
        loads("# comment\n@ grade=1\ntheta(x_1_1 -\n")
    assert info.value.line == 3


def test_missing_header():
    with pytest.raises(ExprSyntaxError):
        loads("theta(x_1_1)\n")
