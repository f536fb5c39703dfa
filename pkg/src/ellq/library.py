"""Element libraries on disk.

One element per header line followed by one expression line::

    # comments start with '#'
    @ grade=2,0 label=f1
    theta(x_1_1 - x_2_1 - 2*tau) * theta(x_2_1 - x_1_1 - 2*tau) / ...

The variable context is the one of the grade (``x_a_i`` for ``a <= l_i`` and
``u_1..u_h``); identifiers outside it are rejected with the line number.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import ExprSyntaxError, UnknownIdentifierError
from .expr import parse, to_text
from .roots import Grade
from .star import GradedElement


def _header(line: str, lineno: int) -> tuple[Grade, str]:
    fields = {}
    for tok in line[1:].split():
        if "=" not in tok:
            raise ExprSyntaxError(f"header field {tok!r} is not key=value", lineno, 1)
        k, v = tok.split("=", 1)
        fields[k] = v
    if "grade" not in fields:
        raise ExprSyntaxError("header needs grade=", lineno, 1)
    try:
        grade = Grade([int(c) for c in fields["grade"].split(",")])
    except ValueError:
        raise ExprSyntaxError(f"bad grade {fields['grade']!r}", lineno, 1) from None
    return grade, fields.get("label", "")


def loads(text: str) -> list[GradedElement]:
    out = []
    pending = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            if pending is not None:
                raise ExprSyntaxError("header without expression", pending[2], 1)
            grade, label = _header(line, lineno)
            pending = (grade, label, lineno)
            continue
        if pending is None:
            raise ExprSyntaxError("expression before any header", lineno, 1)
        grade, label, _ = pending
        ctx = GradedElement(grade, None).context()
        try:
            body = parse(line, ctx)
        except ExprSyntaxError as exc:
            raise ExprSyntaxError(str(exc).rsplit(" (line", 1)[0], lineno, exc.column) from None
        except UnknownIdentifierError as exc:
            raise UnknownIdentifierError(f"{exc.name} (line {lineno})", exc.context) from None
        out.append(GradedElement(grade, body, label))
        pending = None
    if pending is not None:
        raise ExprSyntaxError("header without expression", pending[2], 1)
    return out


def dumps(elements: Iterable[GradedElement]) -> str:
    lines = []
    for el in elements:
        head = "@ grade=" + ",".join(str(c) for c in el.grade)
        if el.label and " " not in el.label:
            head += f" label={el.label}"
        lines += [head, to_text(el.body)]
    return "\n".join(lines) + "\n"


def load(path) -> list[GradedElement]:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump(elements: Iterable[GradedElement], path) -> None:
    Path(path).write_text(dumps(elements), encoding="utf-8")
