import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ellq.errors import ContextError, ExprSyntaxError, NearPoleError, UnknownIdentifierError
from ellq.expr import (AffineForm, Add, Const, Div, ExpTwoPiI, IntPow, Mul, Sub, Theta, Var,
                       evaluate, parse, pole_divisors, substitute, to_text, variables)
from ellq.sampling import admissible_points

NAMES = ["x_1_1", "x_2_1", "x_1_2", "u_1", "u_2", "y_1_1"]


def test_parse_theta_quotient():
    e = parse("theta(x_1_1 - x_1_2 - tau)/theta(x_1_1 - x_1_2)")
    assert isinstance(e, Div)
    assert isinstance(e.num, Theta) and isinstance(e.den, Theta)
    assert pole_divisors(e) == {AffineForm({"x_1_1": 1, "x_1_2": -1})}


def test_parse_exponential():
    e = parse("e2pi(-(x_1_1))")
    assert isinstance(e, ExpTwoPiI)
    assert e.arg == AffineForm({"x_1_1": -1})


def test_syntax_error_location():
    with pytest.raises(ExprSyntaxError) as info:
        parse("theta(x_1_1 -")
    assert info.value.line == 1
    assert info.value.column == 14


def test_syntax_error_on_second_line():
    with pytest.raises(ExprSyntaxError) as info:
        parse("theta(x_1_1)\n * * 2")
    assert info.value.line == 2


def test_unknown_identifier_lists_context():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("theta(z)", context=["x_1_1", "u_1"])
    assert "u_1" in str(info.value) and "x_1_1" in str(info.value)


def test_evaluate_basics(params):
    assert evaluate(Const(3 + 2j), {}, params) == 3 + 2j
    assert abs(evaluate(parse("theta(x_1_1)"), {"x_1_1": 0.0}, params)) < params.series_eps * 10
    e = parse("theta(x_1_1 - y_1_1) / theta(x_1_1 - y_1_1)")
    assert abs(evaluate(e, {"x_1_1": 0.3 + 0.1j, "y_1_1": -0.2j}, params) - 1) < params.tol


def test_evaluate_errors(params):
    with pytest.raises(ContextError):
        evaluate(parse("theta(x_1_1)"), {}, params)
    with pytest.raises(NearPoleError):
        evaluate(parse("1/theta(x_1_1)"), {"x_1_1": 0.0}, params)


def test_substitute_u_shift():
    e = substitute(parse("theta(u_1)"), {"u_1": AffineForm.var("u_1") - AffineForm.var("tau") * 2})
    assert to_text(e) == "theta(u_1 - 2*tau)"


def test_identity_substitution_is_structural_identity():
    e = parse("theta(x_1_1 + u_1/2) * e2pi(x_2_1) / theta(x_1_1 - x_2_1 - tau)")
    assert substitute(e, {}) is e
    assert substitute(e, {v: AffineForm.var(v) for v in variables(e)}) is e


def test_translation_substitution(params, rng):
    e = Theta(AffineForm.var("x_1_1"))
    shifted = substitute(e, {"x_1_1": AffineForm.var("x_1_1") + 1})
    xs = rng.normal(size=20) + 1j * rng.normal(size=20) * 0.3
    assert np.allclose(evaluate(shifted, {"x_1_1": xs}, params),
                       evaluate(e, {"x_1_1": xs + 1}, params), rtol=1e-10)


# ---------------------------------------------------------------------------
# generated expressions

coef = st.sampled_from([1, -1, 2, 0.5, -0.25, 3, 1.5])
const = st.sampled_from([0, 0.5, 0.25 + 0.5j, -1, 1j, 0.125])


@st.composite
def affine(draw):
    names = draw(st.lists(st.sampled_from(NAMES), min_size=1, max_size=3, unique=True))
    coeffs = {n: draw(coef) for n in names}
    if draw(st.booleans()):
        coeffs["tau"] = draw(coef)
    return AffineForm(coeffs) + draw(const)


leaf = st.one_of(
    affine().map(Theta),
    affine().map(ExpTwoPiI),
    st.sampled_from(NAMES).map(Var),
    st.sampled_from([2, 0.5, 1.5 - 2j, 3j]).map(Const),
)


def _node(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: Add(*t)),
        st.tuples(children, children).map(lambda t: Sub(*t)),
        st.tuples(children, children).map(lambda t: Mul(*t)),
        st.tuples(children, children).map(lambda t: Div(*t)),
        st.tuples(children, st.integers(-3, 3)).map(lambda t: IntPow(*t)),
    )


exprs = st.recursive(leaf, _node, max_leaves=8)


@settings(max_examples=60, deadline=None)
@given(exprs)
def test_print_parse_round_trip(e):
    text = to_text(e)
    again = parse(text)
    assert to_text(again) == text
    assert again is e


@st.composite
def affine_map(draw):
    target = draw(st.sampled_from(NAMES[:4]))
    return {target: AffineForm.var(target) * draw(st.sampled_from([1, -1, 2]))
            + AffineForm.var(draw(st.sampled_from(NAMES[4:]))) * draw(coef) + draw(const)}


@settings(max_examples=30, deadline=None)
@given(exprs, affine_map(), st.integers(0, 2**32 - 1))
def test_substitution_commutes_with_evaluation(e, sigma, seed):
    from ellq.elliptic import EllipticParams

    params = EllipticParams()
    rng = np.random.default_rng(seed)
    sub = substitute(e, sigma)
    pts = admissible_points(NAMES, params, rng, 20, exprs=[e, sub])
    moved = dict(pts)
    for name, form in sigma.items():
        moved[name] = form.evaluate(pts, params)
    try:
        a = evaluate(sub, pts, params)
        b = evaluate(e, moved, params)
    except NearPoleError:
        return
    a, b = np.broadcast_arrays(a, b)
    ok = np.isfinite(a) & np.isfinite(b) & (np.abs(a) < 1e8)
    assert np.all(np.abs(a[ok] - b[ok]) <= 1e-7 * (1 + np.abs(b[ok])))
