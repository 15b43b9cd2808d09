"""Skew-product text format.

One record per line, '#' starts a comment:

    p <i> <re> <im>          coefficient of z^i in p
    q <i> <j> <re> <im>      coefficient b_ij of z^i w^j in q

Exponents are decimal integers, coefficients decimal floats; duplicate
exponent lines are rejected.  A file may instead declare a builtin
constructor on its first non-comment line:

    builtin semiconjugate <degenerate|nondegenerate> <alpha> <delta> ; h: <k> <re> <im> [...]

where the triples after ``h:`` give the terms of the monic h(w).
"""

from __future__ import annotations

from pathlib import Path

from .algebra import BiPoly, SkewProduct, UniPoly
from .oracles import OneDimPoly, SemiconjugateSpec, build_semiconjugate


class FormatError(ValueError):
    pass


def _parse_builtin(line: str) -> SkewProduct:
    head, sep, tail = line.partition(";")
    fields = head.split()
    if len(fields) != 5 or fields[1] != "semiconjugate" or not sep:
        raise FormatError(f"malformed builtin line: {line!r}")
    kind, alpha, delta = fields[2], int(fields[3]), int(fields[4])
    tail = tail.strip()
    if not tail.startswith("h:"):
        raise FormatError("builtin semiconjugate needs an 'h:' section")
    toks = tail[2:].split()
    if len(toks) % 3 != 0 or not toks:
        raise FormatError("h terms must be '<k> <re> <im>' triples")
    terms = {}
    for k in range(0, len(toks), 3):
        deg = int(toks[k])
        if deg in terms:
            raise FormatError(f"duplicate h exponent {deg}")
        terms[deg] = complex(float(toks[k + 1]), float(toks[k + 2]))
    h = OneDimPoly.from_terms(terms)
    return build_semiconjugate(SemiconjugateSpec(h, alpha, delta, kind))


def parse_skew_product(text: str) -> SkewProduct:
    p_terms: dict[int, complex] = {}
    q_terms: dict[tuple[int, int], complex] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "builtin":
            if p_terms or q_terms:
                raise FormatError("builtin line must be the only record")
            return _parse_builtin(line)
        try:
            if fields[0] == "p" and len(fields) == 4:
                i = int(fields[1])
                if i in p_terms:
                    raise FormatError(f"line {lineno}: duplicate p exponent {i}")
                p_terms[i] = complex(float(fields[2]), float(fields[3]))
            elif fields[0] == "q" and len(fields) == 5:
                key = (int(fields[1]), int(fields[2]))
                if key in q_terms:
                    raise FormatError(f"line {lineno}: duplicate q exponent {key}")
                q_terms[key] = complex(float(fields[3]), float(fields[4]))
            else:
                raise FormatError(f"line {lineno}: unrecognized record {line!r}")
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if not p_terms or not q_terms:
        raise FormatError("file must define both p and q")
    return SkewProduct(UniPoly(p_terms), BiPoly(q_terms))


def load_skew_product(path: str | Path) -> SkewProduct:
    return parse_skew_product(Path(path).read_text())


def dump_skew_product(f: SkewProduct) -> str:
    lines = ["# skew product f(z,w) = (p(z), q(z,w))"]
    for i, coeff in f.p.terms.items():
        lines.append(f"p {i} {coeff.real!r} {coeff.imag!r}")
    for (i, j), coeff in f.q.terms.items():
        lines.append(f"q {i} {j} {coeff.real!r} {coeff.imag!r}")
    return "\n".join(lines) + "\n"
