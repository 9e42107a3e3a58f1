"""Instance files: line-oriented ``section { key = value }`` documents.

Two kinds share the grammar.  A difference instance uses the sections
base, gens, ext, sigma, sigma_inverse, refine and options; a lattice
instance uses lattice, alpha, U, V, W and options.  Values are a quoted
string, a bare word or integer, or a word followed by a quoted string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..diffext.presentation import ALGEBRAIC, TRANSCENDENTAL, DifferencePresentation, GeneratorSpec, InverseData
from ..errors import ParseError
from ..expr import evaluate, parse_expr, render, symbols

DIFFERENCE = "difference"
LATTICE = "lattice"

DIFF_SECTIONS = ("base", "gens", "ext", "sigma", "sigma_inverse", "refine", "options")
LATTICE_SECTIONS = ("lattice", "alpha", "U", "V", "W", "options")

OPTION_KEYS = {
    "max_depth": int,
    "window": int,
    "seed": int,
    "cap": int,
    "trials": int,
    "distant_length": int,
    "stabilization_depth": int,
    "lmax": int,
    "kmax": int,
    "blocks": str,
    "power_check": int,
}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEY = re.compile(r"(?:\d+|[A-Za-z_][A-Za-z0-9_]*)(?:\.[A-Za-z_][A-Za-z0-9_]*)?")
_WORD = re.compile(r"[A-Za-z0-9_./+-]+")


@dataclass
class Entry:
    key: str
    word: str | None
    text: str | None
    line: int
    col: int  # column of the value start
    text_col: int = 0  # column of the first character inside the quotes
    key_col: int = 1


@dataclass
class Section:
    name: str
    line: int
    col: int
    entries: list = field(default_factory=list)


@dataclass
class LatticeProblem:
    prime: int
    dim: int
    alpha: tuple
    U: tuple | None = None
    V: tuple | None = None
    W: tuple | None = None


@dataclass
class InstanceFile:
    kind: str
    presentation: DifferencePresentation | None = None
    lattice: LatticeProblem | None = None
    options: dict = field(default_factory=dict)


# -- lexical layer -----------------------------------------------------------------


def _strip_comment(line):
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def _read_value(s, pos, lineno):
    """Parse ``word``, ``"text"`` or ``word "text"`` starting at pos."""
    n = len(s)
    word = text = None
    text_col = 0
    if pos < n and s[pos] != '"':
        m = _WORD.match(s, pos)
        if not m:
            raise ParseError("malformed value", lineno, pos + 1, ("word", "quoted string"))
        word = m.group()
        pos = m.end()
        while pos < n and s[pos] in " \t":
            pos += 1
    if pos < n and s[pos] == '"':
        end = s.find('"', pos + 1)
        if end < 0:
            raise ParseError("unterminated string", lineno, pos + 1, ('"',))
        text = s[pos + 1 : end]
        text_col = pos + 2
        pos = end + 1
    if word is None and text is None:
        raise ParseError("missing value", lineno, pos + 1, ("word", "quoted string"))
    while pos < n and s[pos] in " \t":
        pos += 1
    if pos < n:
        raise ParseError("trailing characters after value", lineno, pos + 1, ("end of line",))
    return word, text, text_col


def read_sections(source):
    """Split the document into sections of raw entries."""
    sections = []
    current = None
    last_line = 1
    for lineno, raw in enumerate(source.splitlines(), start=1):
        last_line = lineno
        s = _strip_comment(raw).rstrip()
        stripped = s.lstrip()
        if not stripped:
            continue
        col = len(s) - len(stripped) + 1
        if current is None:
            m = _IDENT.match(s, col - 1)
            if not m:
                raise ParseError("expected a section name", lineno, col, ("section",))
            rest = s[m.end() :].strip()
            if rest != "{":
                raise ParseError("expected '{' after section name", lineno, m.end() + 1, ("{",))
            current = Section(m.group(), lineno, col)
            continue
        if stripped == "}":
            sections.append(current)
            current = None
            continue
        m = _KEY.match(s, col - 1)
        if not m:
            raise ParseError("expected a key", lineno, col, ("key", "}"))
        pos = m.end()
        while pos < len(s) and s[pos] in " \t":
            pos += 1
        if pos >= len(s) or s[pos] != "=":
            raise ParseError("expected '='", lineno, pos + 1, ("=",))
        pos += 1
        while pos < len(s) and s[pos] in " \t":
            pos += 1
        word, text, text_col = _read_value(s, pos, lineno)
        current.entries.append(Entry(m.group(), word, text, lineno, pos + 1, text_col, col))
    if current is not None:
        raise ParseError(f"section {current.name!r} is not closed", last_line + 1, 1, ("}",))
    if not sections:
        raise ParseError("empty instance", 1, 1, ("section",))
    return sections


# -- semantic layer ----------------------------------------------------------------


def _expr(entry):
    if entry.text is None:
        raise ParseError("expected a quoted expression", entry.line, entry.col, ("quoted string",))
    return parse_expr(entry.text, entry.line, entry.text_col)


def _int(entry):
    v = entry.word if entry.word is not None else entry.text
    try:
        return int(v)
    except (TypeError, ValueError):
        raise ParseError(f"expected an integer for {entry.key!r}", entry.line, entry.col, ("integer",)) from None


def _check_symbols(entry, allowed):
    extra = sorted(symbols(_expr(entry)) - set(allowed))
    if extra:
        raise ParseError(f"undeclared symbols {extra}", entry.line, entry.text_col, tuple(sorted(allowed)))


def _unknown(entry, allowed):
    raise ParseError(f"unknown key {entry.key!r}", entry.line, entry.key_col, tuple(sorted(allowed)))


def _options(sec):
    out = {}
    for e in sec.entries:
        if e.key not in OPTION_KEYS:
            _unknown(e, OPTION_KEYS)
        if OPTION_KEYS[e.key] is int:
            out[e.key] = _int(e)
        else:
            out[e.key] = e.text if e.text is not None else e.word
    return out


def _rational_row(entry, dim):
    if entry.text is None:
        raise ParseError("expected a quoted row", entry.line, entry.col, ("quoted string",))
    vals = []
    offset = 0
    for part in entry.text.split(","):
        node = parse_expr(part.strip() or "", entry.line, entry.text_col + offset)
        try:
            vals.append(evaluate(node, {}, Fraction))
        except (KeyError, ZeroDivisionError) as exc:
            raise ParseError(f"row entry is not a rational number: {exc}", entry.line, entry.text_col + offset, ("rational",)) from None
        offset += len(part) + 1
    if dim is not None and len(vals) != dim:
        raise ParseError(f"row has {len(vals)} entries, dimension is {dim}", entry.line, entry.col, (f"{dim} entries",))
    return tuple(Fraction(v) for v in vals)


def _parse_lattice(sections):
    by = {}
    for s in sections:
        if s.name not in LATTICE_SECTIONS:
            raise ParseError(f"unknown section {s.name!r}", s.line, s.col, LATTICE_SECTIONS)
        if s.name in by:
            raise ParseError(f"section {s.name!r} repeated", s.line, s.col, ())
        by[s.name] = s
    head = by["lattice"]
    prime = dim = None
    where = head
    for e in head.entries:
        if e.key == "prime":
            prime = _int(e)
            where = e
        elif e.key == "dim":
            dim = _int(e)
        else:
            _unknown(e, ("prime", "dim"))
    if prime is None or dim is None:
        raise ParseError("lattice section needs prime and dim", head.line, head.col, ("prime", "dim"))
    import gmpy2

    if prime < 2 or not gmpy2.is_prime(prime):
        raise ParseError(f"{prime} is not a prime", where.line, where.col, ("prime",))
    if "alpha" not in by:
        raise ParseError("missing alpha section", head.line, head.col, ("alpha",))

    def rows(name, key):
        sec = by.get(name)
        if sec is None:
            return None
        out = []
        for e in sec.entries:
            if e.key != key:
                _unknown(e, (key,))
            out.append(_rational_row(e, dim))
        return tuple(out)

    alpha = rows("alpha", "row")
    if len(alpha) != dim:
        raise ParseError(f"alpha has {len(alpha)} rows, dimension is {dim}", by["alpha"].line, by["alpha"].col, ())
    prob = LatticeProblem(prime, dim, alpha, rows("U", "gen"), rows("V", "gen"), rows("W", "gen"))
    opts = _options(by["options"]) if "options" in by else {}
    return InstanceFile(LATTICE, lattice=prob, options=opts)


def _parse_difference(sections):
    by = {}
    for s in sections:
        if s.name not in DIFF_SECTIONS:
            raise ParseError(f"unknown section {s.name!r}", s.line, s.col, DIFF_SECTIONS)
        if s.name in by:
            raise ParseError(f"section {s.name!r} repeated", s.line, s.col, ())
        by[s.name] = s
    if "gens" not in by:
        raise ParseError("missing gens section", 1, 1, ("gens",))
    characteristic = 0
    base_vars = ()
    base_sigma = {}
    if "base" in by:
        declared = None
        for e in by["base"].entries:
            if e.key == "characteristic":
                characteristic = _int(e)
            elif e.key == "vars":
                raw = e.text if e.text is not None else e.word
                base_vars = tuple(v.strip() for v in raw.split(",") if v.strip())
                declared = set(base_vars)
            elif declared is not None and e.key in declared:
                base_sigma[e.key] = _expr(e)
            else:
                _unknown(e, ("characteristic", "vars") + base_vars)
    gens = []
    for e in by["gens"].entries:
        kind = e.word
        if kind == TRANSCENDENTAL and e.text is None:
            gens.append(GeneratorSpec(e.key))
        elif kind == ALGEBRAIC and e.text is not None:
            gens.append(GeneratorSpec(e.key, ALGEBRAIC, _expr(e)))
        else:
            raise ParseError(
                f"generator {e.key!r}: expected 'transcendental' or 'algebraic \"minpoly\"'",
                e.line, e.col, (TRANSCENDENTAL, ALGEBRAIC),
            )
    ext = [(e.key, _expr(e)) for e in by["ext"].entries] if "ext" in by else []
    if "sigma" not in by:
        raise ParseError("missing sigma section", by["gens"].line, by["gens"].col, ("sigma",))
    known = set(base_vars) | {g.name for g in gens}
    for e in by["gens"].entries:
        if e.text is not None:
            _check_symbols(e, known | {"X"})
    # an ext minpoly may use earlier ext names
    for e in by["ext"].entries if "ext" in by else []:
        _check_symbols(e, known | {"X"})
        known.add(e.key)
    for e in by["sigma"].entries:
        _check_symbols(e, known)
    sigma = {}
    for e in by["sigma"].entries:
        if e.key in sigma:
            raise ParseError(f"sigma({e.key}) given twice", e.line, e.col, ())
        sigma[e.key] = _expr(e)
    inverse = None
    if "sigma_inverse" in by:
        images, inv_ext, inv_base = {}, [], {}
        for e in by["sigma_inverse"].entries:
            head, _, tail = e.key.partition(".")
            if not tail:
                images[e.key] = _expr(e)
            elif head == "ext":
                inv_ext.append((tail, _expr(e)))
            elif head == "base":
                inv_base[tail] = _expr(e)
            else:
                _unknown(e, ("<generator>", "ext.<name>", "base.<var>"))
        inverse = InverseData(images=images, ext=tuple(inv_ext), base=inv_base)
    refinements = {}
    for e in by["refine"].entries if "refine" in by else ():
        level, _, name = e.key.partition(".")
        if not level.isdigit() or not name:
            raise ParseError("refinement keys look like <level>.<generator>", e.line, e.col, ("<level>.<generator>",))
        refinements[(int(level), name)] = _expr(e)
    opts = _options(by["options"]) if "options" in by else {}
    P = DifferencePresentation(
        gens=tuple(gens),
        sigma=sigma,
        ext=tuple(ext),
        characteristic=characteristic,
        base_vars=base_vars,
        base_sigma=base_sigma,
        refinements=refinements,
        stabilization_depth=opts.pop("stabilization_depth", 0),
        inverse=inverse,
    )
    return InstanceFile(DIFFERENCE, presentation=P, options=opts)


def parse_text(source):
    sections = read_sections(source)
    if sections[0].name == "lattice":
        return _parse_lattice(sections)
    return _parse_difference(sections)


def parse(path):
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


# -- rendering ---------------------------------------------------------------------


def _block(name, lines):
    return [f"{name} {{"] + [f"  {ln}" for ln in lines] + ["}"]


def _opt_lines(opts):
    out = []
    for k in sorted(opts):
        v = opts[k]
        out.append(f'{k} = "{v}"' if OPTION_KEYS.get(k) is str else f"{k} = {v}")
    return out


def render_instance(inst):
    """Canonical text; parse_text(render_instance(x)) == x."""
    out = []
    if inst.kind == LATTICE:
        L = inst.lattice
        out += _block("lattice", [f"prime = {L.prime}", f"dim = {L.dim}"])
        out += _block("alpha", [f'row = "{", ".join(str(x) for x in r)}"' for r in L.alpha])
        for name in ("U", "V", "W"):
            rows = getattr(L, name)
            if rows is not None:
                out += _block(name, [f'gen = "{", ".join(str(x) for x in r)}"' for r in rows])
        if inst.options:
            out += _block("options", _opt_lines(inst.options))
        return "\n".join(out) + "\n"
    P = inst.presentation
    base = [f"characteristic = {P.characteristic}"]
    if P.base_vars:
        base.append(f'vars = "{", ".join(P.base_vars)}"')
        base += [f'{v} = "{render(P.base_sigma[v])}"' for v in P.base_vars if v in P.base_sigma]
    out += _block("base", base)
    out += _block(
        "gens",
        [f"{g.name} = {g.kind}" + (f' "{render(g.minpoly)}"' if g.minpoly is not None else "") for g in P.gens],
    )
    if P.ext:
        out += _block("ext", [f'{n} = "{render(e)}"' for n, e in P.ext])
    out += _block("sigma", [f'{g} = "{render(P.sigma[g])}"' for g in P.names])
    if P.inverse is not None:
        inv = P.inverse
        lines = [f'{g} = "{render(inv.images[g])}"' for g in P.names]
        lines += [f'ext.{n} = "{render(e)}"' for n, e in inv.ext]
        lines += [f'base.{v} = "{render(e)}"' for v, e in sorted(inv.base.items())]
        out += _block("sigma_inverse", lines)
    if P.refinements:
        out += _block("refine", [f'{k}.{n} = "{render(e)}"' for (k, n), e in sorted(P.refinements.items())])
    opts = dict(inst.options)
    if P.stabilization_depth:
        opts["stabilization_depth"] = P.stabilization_depth
    if opts:
        out += _block("options", _opt_lines(opts))
    return "\n".join(out) + "\n"


def lattice_objects(prob):
    """(alpha, U, V, W) as library objects."""
    from ..lattice import Lattice, LinearAuto

    alpha = LinearAuto(prob.alpha, prob.prime)

    def lat(rows):
        return None if rows is None else Lattice(prob.prime, prob.dim, rows)

    U = lat(prob.U) or Lattice.standard(prob.prime, prob.dim)
    return alpha, U, lat(prob.V), lat(prob.W)


__all__ = [
    "DIFFERENCE",
    "LATTICE",
    "InstanceFile",
    "LatticeProblem",
    "lattice_objects",
    "parse",
    "parse_text",
    "render_instance",
]
