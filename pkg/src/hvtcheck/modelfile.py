"""Reader and writer for the ``.hvt`` model-file format.

Line-oriented; ``#`` starts a comment.  See the README for the grammar.
Syntax problems raise ``ParseError``; well-formed files describing an
invalid model raise ``ValidationError``.  Both carry the line number.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .core import (
    Alphabet,
    GlobalDeterministic,
    HVTModel,
    LocalDeterministic,
    LocalStochastic,
    PredictionsOnly,
)
from .errors import HVTError, ParseError, ValidationError
from .exact import format_number, parse_number
from .predicates import Predicate
from .rules import GLOBAL_RULES
from .spacetime import Lattice, Region
from .wiring import BellWiring

_KV = re.compile(r"^(\w+)=(\S+)$")
_RECT = re.compile(r"^\(\s*(-?\d+)(?:\.\.(-?\d+))?\s*,\s*(-?\d+)(?:\.\.(-?\d+))?\s*\)$")
_RULE = re.compile(r"^rule\s+(\S+)\s*->\s*(\S+)(?:\s+(\S+))?$")
_TABLE = re.compile(r"^table\s+a=(\S+)\s+b=(\S+)\s+A=([+-]1)\s+B=([+-]1)\s+(.+)$")
_CLASS = re.compile(r"^(setting-left|setting-right|outcome-left|outcome-right)\s+(\S+?)\s*:\s*(.+)$")


def parse_region(text: str, line: int) -> Region:
    pts = []
    for part in text.split("+"):
        m = _RECT.match(part.strip())
        if not m:
            raise ParseError(f"bad region {part.strip()!r}", line)
        x0, x1, t0, t1 = m.groups()
        x1 = x1 if x1 is not None else x0
        t1 = t1 if t1 is not None else t0
        pts.extend(Region.rect(int(x0), int(x1), int(t0), int(t1)).points)
    return Region(pts)


def format_region(region: Region) -> str:
    parts = []
    for t in sorted({p.t for p in region.points}):
        xs = sorted(p.x for p in region.points if p.t == t)
        start = prev = xs[0]
        for x in xs[1:] + [None]:
            if x is not None and x == prev + 1:
                prev = x
                continue
            parts.append(f"({start}..{prev},{t}..{t})" if start != prev else f"({start},{t})")
            if x is not None:
                start = prev = x
    return "+".join(parts)


def _kv(tokens, line) -> dict:
    out = {}
    for tok in tokens:
        m = _KV.match(tok)
        if not m:
            raise ParseError(f"expected key=value, got {tok!r}", line)
        out[m.group(1)] = m.group(2)
    return out


def _int(value, line, name):
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{name} must be an integer", line)


def _pred(text: str, line: int) -> Predicate:
    try:
        return Predicate.parse(text)
    except ValueError as e:
        raise ParseError(str(e), line)


def _number(text: str, line: int, approx: bool):
    try:
        return float(text) if approx else parse_number(text)
    except ValueError as e:
        raise ParseError(str(e), line)


class _Reader:
    def __init__(self, text: str):
        self.name = None
        self.lattice = None
        self.alphabet = None
        self.law_kind = None
        self.law_line = None
        self.law_args = {}
        self.rules = []  # (line, nbhd, symbol, prob)
        self.tables = []  # (line, a, b, A, B, value)
        self.measure = []  # (line, config, weight)
        self.measure_uniform = None
        self.wiring = {}
        self.wiring_line = None
        self.classes = {"setting-left": [], "setting-right": [], "outcome-left": [], "outcome-right": []}
        self.system = {}
        self.section = None
        for no, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self._line(body, no)

    def _line(self, body, no):
        head, _, rest = body.partition(" ")
        tokens = rest.split()
        if head == "model":
            self.name = rest.strip()
        elif head == "lattice":
            kv = _kv(tokens, no)
            try:
                self.lattice = Lattice(_int(kv["width"], no, "width"), _int(kv["height"], no, "height"))
            except KeyError:
                raise ParseError("lattice needs width= and height=", no)
            except HVTError as e:
                raise ValidationError(str(e), no)
        elif head == "alphabet":
            try:
                self.alphabet = Alphabet(tokens)
            except ValidationError as e:
                raise ValidationError(str(e), no)
        elif head == "law":
            if not tokens:
                raise ParseError("law needs a kind", no)
            self.law_kind, self.law_line = tokens[0], no
            flags = [t for t in tokens[1:] if "=" not in t]
            self.law_args = _kv([t for t in tokens[1:] if "=" in t], no)
            self.law_args.update({f: True for f in flags})
            self.section = "law"
        elif head == "rule":
            m = _RULE.match(body)
            if not m:
                raise ParseError("expected: rule l,c,r->symbol [p/q]", no)
            nb, sym, p = m.groups()
            self.rules.append((no, tuple(nb.split(",")), sym, p))
        elif head == "table":
            m = _TABLE.match(body)
            if not m:
                raise ParseError("expected: table a=<id> b=<id> A=+-1 B=+-1 <number>", no)
            self.tables.append((no,) + m.groups())
        elif head == "measure":
            self.section = "measure"
            if tokens == ["uniform"]:
                self.measure_uniform = no
            elif len(tokens) == 2:
                self.measure.append((no, tuple(tokens[0].split(",")), tokens[1]))
            else:
                raise ParseError("expected: measure uniform | measure s1,...,sW p/q", no)
        elif head == "wiring":
            self.section = "wiring"
            self.wiring_line = no
        elif self.section == "wiring":
            self._wiring_line(body, head, rest, no)
        else:
            raise ParseError(f"unknown statement {head!r}", no)

    def _wiring_line(self, body, head, rest, no):
        if head == "region":
            name, eq, spec = rest.partition("=")
            if not eq or name.strip() not in ("Ra", "Rb", "RA", "RB"):
                raise ParseError("expected: region Ra|Rb|RA|RB=<region>", no)
            self.wiring[name.strip()] = parse_region(spec.strip(), no)
        elif head == "system":
            m = re.match(r"^tau=(\d+)\s+(.+)$", rest.strip())
            if not m:
                raise ParseError("expected: system tau=N <region>", no)
            self.system[int(m.group(1))] = parse_region(m.group(2), no)
        elif _CLASS.match(body):
            kind, label, text = _CLASS.match(body).groups()
            self.classes[kind].append((label, _pred(text, no), no))
        else:
            kv = _kv(body.split(), no)
            for k, v in kv.items():
                if k not in ("tP", "tM", "t", "tprime"):
                    raise ParseError(f"unknown wiring key {k!r}", no)
                self.wiring[k] = _int(v, no, k)

    # -- assembly --------------------------------------------------------
    def law(self):
        kind, no = self.law_kind, self.law_line
        if kind is None:
            raise ValidationError("no law given")
        if kind == "predictions-only":
            return self._predictions(no)
        if self.alphabet is None or self.lattice is None:
            raise ValidationError("lattice and alphabet must precede the law", no)
        if kind == "local-deterministic":
            radius = _int(self.law_args.get("radius", "1"), no, "radius")
            table = {}
            for line, nb, sym, p in self.rules:
                self._check_nbhd(nb, sym, line, radius)
                if p is not None:
                    raise ParseError("deterministic rules take no probability", line)
                if nb in table:
                    raise ValidationError(f"duplicate rule for {','.join(nb)}", line)
                table[nb] = sym
            law = LocalDeterministic(table, radius)
        elif kind == "local-stochastic":
            radius = _int(self.law_args.get("radius", "1"), no, "radius")
            kernel: dict = {}
            for line, nb, sym, p in self.rules:
                self._check_nbhd(nb, sym, line, radius)
                if p is None:
                    raise ParseError("stochastic rules need a probability", line)
                w = _number(p, line, False)
                dist = kernel.setdefault(nb, {})
                dist[sym] = dist.get(sym, 0) + w
            law = LocalStochastic(kernel, radius)
        elif kind == "global-deterministic":
            name = self.law_args.get("rule")
            if name not in GLOBAL_RULES:
                raise ValidationError(f"unknown global rule {name!r}; known: {sorted(GLOBAL_RULES)}", no)
            law = GlobalDeterministic(name, GLOBAL_RULES[name])
        else:
            raise ParseError(f"unknown law kind {kind!r}", no)
        try:
            law.validate(self.alphabet)
        except ValidationError as e:
            raise ValidationError(str(e), no)
        return law

    def _check_nbhd(self, nb, sym, line, radius):
        if len(nb) != 2 * radius + 1:
            raise ParseError(f"neighbourhood needs {2 * radius + 1} symbols", line)
        for s in nb + (sym,):
            if s not in self.alphabet:
                raise ValidationError(f"symbol {s!r} not in alphabet", line)

    def _predictions(self, no):
        approx = bool(self.law_args.get("approx"))
        table, a_ids, b_ids = {}, [], []
        for line, a, b, A, B, val in self.tables:
            for ids, v in ((a_ids, a), (b_ids, b)):
                if v not in ids:
                    ids.append(v)
            table[(a, b, int(A), int(B))] = _number(val.strip(), line, approx)
        try:
            law = PredictionsOnly(table, tuple(a_ids), tuple(b_ids), approx)
            law.validate()
        except HVTError as e:
            raise ValidationError(str(e), no)
        return law

    def measure_dict(self):
        if self.measure_uniform is not None:
            import itertools

            configs = list(itertools.product(self.alphabet.symbols, repeat=self.lattice.width))
            w = Fraction(1, len(configs))
            return {c: w for c in configs}
        out = {}
        for line, config, w in self.measure:
            if len(config) != self.lattice.width:
                raise ValidationError(
                    f"configuration has {len(config)} sites, lattice width is {self.lattice.width}", line
                )
            bad = [s for s in config if s not in self.alphabet]
            if bad:
                raise ValidationError(f"unknown symbols {bad}", line)
            if config in out:
                raise ValidationError("configuration listed twice", line)
            out[config] = Fraction(_number(w, line, False))
        if not out:
            raise ValidationError("no measure given")
        total = sum(out.values())
        if total != 1:
            raise ValidationError(f"measure sums to {format_number(total)}, not 1", self.measure[-1][0])
        return out

    def bell_wiring(self):
        if self.wiring_line is None:
            return None
        no = self.wiring_line
        need = ("Ra", "Rb", "RA", "RB", "tP", "tM", "t", "tprime")
        missing = [k for k in need if k not in self.wiring]
        if missing:
            raise ValidationError(f"wiring misses {missing}", no)
        groups = {}
        for kind, items in self.classes.items():
            if len(items) != 2:
                raise ValidationError(f"{kind} needs exactly two classes", no)
            groups[kind] = tuple((label, p) for label, p, _ in items)
        w = self.wiring
        wiring = BellWiring(
            R_a=w["Ra"], R_b=w["Rb"], R_A=w["RA"], R_B=w["RB"],
            t_P=w["tP"], t_M=w["tM"], t=w["t"], t_prime=w["tprime"],
            settings_left=groups["setting-left"], settings_right=groups["setting-right"],
            outcomes_left=groups["outcome-left"], outcomes_right=groups["outcome-right"],
            system=dict(self.system),
        )
        try:
            wiring.validate(self.lattice)
        except HVTError as e:
            raise ValidationError(str(e), no)
        return wiring


def parse_model_text(text: str, default_name: str = "model"):
    """Return (HVTModel, BellWiring or None)."""
    r = _Reader(text)
    law = r.law()
    name = r.name or default_name
    if isinstance(law, PredictionsOnly):
        return HVTModel(name, None, None, law), None
    if r.lattice is None or r.alphabet is None:
        raise ValidationError("spacetime models need lattice and alphabet lines")
    model = HVTModel(name, r.lattice, r.alphabet, law, r.measure_dict())
    return model, r.bell_wiring()


def parse_model(path):
    path = Path(path)
    return parse_model_text(path.read_text(), path.stem)


# -- coarse partition files ----------------------------------------------------


def parse_partition_text(text: str):
    """``region <region>`` then ``cell <label>: <pred>`` lines -> (Region, [(label, Predicate)])."""
    region, cells = None, []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("region "):
            region = parse_region(body[len("region "):].strip(), no)
        elif body.startswith("cell "):
            label, colon, p = body[len("cell "):].partition(":")
            if not colon:
                raise ParseError("expected: cell <label>: <predicate>", no)
            cells.append((label.strip(), _pred(p, no)))
        else:
            raise ParseError(f"unknown statement {body.split()[0]!r}", no)
    if region is None or not cells:
        raise ValidationError("partition file needs a region and at least one cell")
    return region, cells


# -- writer ---------------------------------------------------------------------


def _fmt_value(v, approx):
    return repr(float(v)) if approx else format_number(v)


def format_model(model: HVTModel, wiring=None) -> str:
    out = [f"model {model.name}"]
    law = model.law
    if isinstance(law, PredictionsOnly):
        out.append("law predictions-only" + (" approx" if law.approx else ""))
        for x in law.a_ids:
            for y in law.b_ids:
                for A in (1, -1):
                    for B in (1, -1):
                        v = law.table[(x, y, A, B)]
                        out.append(f"table a={x} b={y} A={A:+d} B={B:+d} {_fmt_value(v, law.approx)}")
        return "\n".join(out) + "\n"
    L = model.lattice
    out.append(f"lattice width={L.width} height={L.height}")
    out.append("alphabet " + " ".join(model.alphabet.symbols))
    if isinstance(law, LocalDeterministic):
        out.append(f"law local-deterministic radius={law.radius}")
        for nb in sorted(law.table, key=lambda nb: [model.alphabet.symbols.index(s) for s in nb]):
            out.append(f"rule {','.join(nb)}->{law.table[nb]}")
    elif isinstance(law, LocalStochastic):
        out.append(f"law local-stochastic radius={law.radius}")
        for nb in sorted(law.kernel, key=lambda nb: [model.alphabet.symbols.index(s) for s in nb]):
            for sym, p in sorted(law.kernel[nb].items()):
                if p:
                    out.append(f"rule {','.join(nb)}->{sym} {format_number(p)}")
    elif isinstance(law, GlobalDeterministic):
        out.append(f"law global-deterministic rule={law.name}")
    for config in model.support():
        out.append(f"measure {','.join(config)} {format_number(model.measure[config])}")
    if wiring is not None:
        out.append("wiring")
        for key, region in (("Ra", wiring.R_a), ("Rb", wiring.R_b), ("RA", wiring.R_A), ("RB", wiring.R_B)):
            out.append(f"region {key}={format_region(region)}")
        out.append(f"tP={wiring.t_P} tM={wiring.t_M} t={wiring.t} tprime={wiring.t_prime}")
        for tau in sorted(wiring.system):
            out.append(f"system tau={tau} {format_region(wiring.system[tau])}")
        for kind, group in (
            ("setting-left", wiring.settings_left),
            ("setting-right", wiring.settings_right),
            ("outcome-left", wiring.outcomes_left),
            ("outcome-right", wiring.outcomes_right),
        ):
            for label, p in group:
                out.append(f"{kind} {label}: {p}")
    return "\n".join(out) + "\n"


def write_model(path, model, wiring=None) -> None:
    Path(path).write_text(format_model(model, wiring))
