"""JSON / CSV / text encodings of a potential.

Rationals are written as "p/q" strings in lowest terms (sign on the
numerator), coefficients are sorted by (m, alpha) and zeros are omitted, so the
output is byte-deterministic.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Optional

from .orbifold import OrbifoldData, new_orbifold
from .series import CoeffKey, MultiIndex, Potential, alpha_from_dict, alpha_to_dict, is_admissible


class ParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None, pos: Optional[int] = None):
        self.line, self.pos = line, pos
        where = f" (line {line}, column {pos})" if line is not None else ""
        super().__init__(msg + where)


def fmt_rational(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(s: str) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"rational must be a 'p/q' string, got {s!r}")
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational must be a 'p/q' string, got {s!r}")
    return Fraction(s)


def alpha_json(A: OrbifoldData, alpha: MultiIndex) -> dict[str, int]:
    return {f"{i},{j}": e for (i, j), e in alpha_to_dict(A, alpha).items()}


def alpha_csv(A: OrbifoldData, alpha: MultiIndex) -> str:
    return ";".join(f"{i},{j}:{e}" for (i, j), e in alpha_to_dict(A, alpha).items())


def header(P: Potential) -> dict[str, Any]:
    out: dict[str, Any] = {
        "A": list(P.A.a),
        "mu": P.A.mu,
        "chi": fmt_rational(P.A.chi),
        "max_m": P.max_m,
    }
    if P.max_len is not None:
        out["max_len"] = P.max_len
    return out


def to_json(P: Potential, unverified: bool = False) -> str:
    doc = header(P)
    if unverified:
        doc["unverified"] = True
    doc["coefficients"] = [
        {"alpha": alpha_json(P.A, alpha), "m": m, "c": fmt_rational(v)} for (alpha, m), v in P.nonzero()
    ]
    return json.dumps(doc, separators=(",", ":")) + "\n"


def _parse_alpha(A: OrbifoldData, raw: dict[str, Any]) -> MultiIndex:
    exps = {}
    for label, e in raw.items():
        try:
            i, j = (int(x) for x in label.split(","))
        except ValueError:
            raise ValueError(f"bad coordinate label {label!r}") from None
        if not (1 <= i <= 3 and 1 <= j < A.a[i - 1]):
            raise ValueError(f"coordinate {label!r} does not exist for A={A}")
        if not isinstance(e, int) or e <= 0:
            raise ValueError(f"exponent of {label!r} must be a positive integer")
        exps[(i, j)] = e
    return alpha_from_dict(A, exps)


def _complete(P: Potential) -> Potential:
    for key in P.keys_in_bounds():
        P.known.setdefault(key, Fraction(0))
    return P


def from_json(text: str) -> Potential:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    try:
        A = new_orbifold(*doc["A"])
        P = Potential(A, int(doc["max_m"]), doc.get("max_len"))
        if doc.get("mu") != A.mu or parse_rational(doc.get("chi")) != A.chi:
            raise ValueError("mu/chi do not match A")
        for n, entry in enumerate(doc["coefficients"]):
            try:
                key: CoeffKey = (_parse_alpha(A, entry["alpha"]), int(entry["m"]))
                if not is_admissible(A, key):
                    raise ValueError("key violates homogeneity")
                P.set(key, parse_rational(entry["c"]))
            except (KeyError, TypeError, ValueError) as e:
                raise ParseError(f"coefficient #{n}: {e}") from None
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid potential document: {e}") from None
    return _complete(P)


def to_csv(P: Potential) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    w.writerow(["alpha", "m", "c"])
    for (alpha, m), v in P.nonzero():
        w.writerow([alpha_csv(P.A, alpha), m, fmt_rational(v)])
    return buf.getvalue()


def from_csv(text: str, A: OrbifoldData, max_m: int, max_len: Optional[int] = None) -> Potential:
    P = Potential(A, max_m, max_len)
    rows = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(rows, start=1):
        if lineno == 1:
            if row != ["alpha", "m", "c"]:
                raise ParseError("expected header alpha,m,c", lineno, 1)
            continue
        try:
            raw_alpha, m, c = row
            exps = {}
            for part in filter(None, raw_alpha.split(";")):
                label, e = part.split(":")
                exps[label] = int(e)
            key = (_parse_alpha(A, exps), int(m))
            if not is_admissible(A, key):
                raise ValueError("key violates homogeneity")
            P.set(key, parse_rational(c))
        except ValueError as e:
            raise ParseError(str(e), lineno, 1) from None
    return _complete(P)


def to_text(P: Potential, unverified: bool = False) -> str:
    A = P.A
    lines = [f"A = {A}  mu = {A.mu}  chi = {A.chi}  max_m = {P.max_m}"]
    if unverified:
        lines.append("unverified")
    for (alpha, m), v in P.nonzero():
        mono = " ".join(f"t{i}{j}^{e}" if e > 1 else f"t{i}{j}" for (i, j), e in alpha_to_dict(A, alpha).items())
        lines.append(f"c({mono or '1'}; {m}) = {v}")
    return "\n".join(lines) + "\n"
