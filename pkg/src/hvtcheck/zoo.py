"""Reference models, each paired with a Bell wiring and expected verdicts.

All spacetime entries except the skip-slice model share one geometry on a
width-19, height-5 diamond: settings at (5,4) and (13,4), outcomes at
(5,5) and (13,5), thick slices between t'=2 and t=3, preparation at t=0.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    Alphabet,
    GlobalDeterministic,
    HVTModel,
    LocalDeterministic,
    LocalStochastic,
    PredictionsOnly,
    product_measure,
    uniform_measure,
)
from .errors import UnsupportedAngle
from .exact import cos_quarter_pi
from .predicates import pred
from .rules import GLOBAL_RULES
from .spacetime import Lattice, Region, SitePoint
from .verdict import FAIL, PASS, VACUOUS
from .wiring import BellWiring, TimeFamily

WIDTH, HEIGHT = 19, 5
LATTICE = Lattice(WIDTH, HEIGHT)


@dataclass
class ZooEntry:
    name: str
    model: HVTModel
    wiring: Optional[BellWiring]
    expected: dict
    families: dict = field(default_factory=dict)
    notes: str = ""


def standard_wiring(a_sym, a2_sym, b_sym, b2_sym, plus_left, plus_right, system=None) -> BellWiring:
    """Wiring on the shared geometry; classes are single-cell symbol tests."""

    def two(point, sym, sym2):
        if isinstance(sym2, str):
            return (pred(f"{point}={sym}"), pred(f"{point}={sym2}"))
        return (pred(f"{point}={sym}"), pred(f"{point}!={sym}"))

    sa, sa2 = two("(5,4)", a_sym, a2_sym)
    sb, sb2 = two("(13,4)", b_sym, b2_sym)
    ol, ol2 = two("(5,5)", plus_left, None)
    orr, orr2 = two("(13,5)", plus_right, None)
    system = system if system is not None else {0: Region([(8, 0), (10, 0)])}
    return BellWiring(
        R_a=Region([(5, 4)]),
        R_b=Region([(13, 4)]),
        R_A=Region([(5, 5)]),
        R_B=Region([(13, 5)]),
        t_P=0,
        t_M=4,
        t=3,
        t_prime=2,
        settings_left=(("a", sa), ("a'", sa2)),
        settings_right=(("b", sb), ("b'", sb2)),
        outcomes_left=(("+1", ol), ("-1", ol2)),
        outcomes_right=(("+1", orr), ("-1", orr2)),
        system=system,
    )


def _table(alphabet, fn) -> dict:
    return {nb: fn(*nb) for nb in itertools.product(alphabet, repeat=3)}


def _config(background, **cells) -> tuple:
    row = [background] * WIDTH
    for key, sym in cells.items():
        row[int(key[1:])] = sym
    return tuple(row)


# -- reversible cellular automaton -------------------------------------------


def left_shift_law(alphabet=("0", "1")) -> LocalDeterministic:
    return LocalDeterministic(_table(alphabet, lambda l, c, r: r))


def reversible_ca(variant: str = "full") -> ZooEntry:
    """Left shift, so v(x,t) = v0(x+t); a=v0(9), A=v0(10), b=v0(17), B=v0(18).

    ``variant``: "full" randomizes those four cells (16 configurations);
    "single" keeps one configuration; "two" correlates a with b so that
    exactly two thick-slice states are realized.
    """
    active = (9, 10, 17, 18)
    if variant == "full":
        configs = [
            _config("0", **{f"x{x}": v for x, v in zip(active, bits)})
            for bits in itertools.product("01", repeat=4)
        ]
    elif variant == "single":
        configs = [_config("0")]
    elif variant == "two":
        configs = [_config("0"), _config("0", x9="1", x17="1")]
    else:
        raise ValueError(f"unknown variant {variant}")
    model = HVTModel(
        f"reversible_ca" + ("" if variant == "full" else f"_{variant}"),
        LATTICE,
        Alphabet("01"),
        left_shift_law(),
        uniform_measure(configs),
    )
    wiring = standard_wiring("0", "1", "0", "1", "0", "0")
    expected = {
        "deterministic": PASS,
        "locally-deterministic": PASS,
        "factorizability:thick-slices": PASS,
        "settings-independence:thick-slices": FAIL if variant != "single" else PASS,
        "settings-compatibility": FAIL,
        "local-causality-fine": PASS,
        "local-causality-coarse": PASS,
        "derivation": PASS,
        "temporal-locality": PASS,
    }
    if variant == "full":
        expected["chsh-abs-le-2"] = PASS
    return ZooEntry(model.name, model, wiring, expected)


# -- true spin -----------------------------------------------------------------

SPINS = ("+", "-")
L_TOKENS = tuple(f"L{x}{y}" for x in SPINS for y in SPINS)
R_TOKENS = tuple(f"R{x}{y}" for x in SPINS for y in SPINS)
TRUE_SPIN_ALPHABET = (".", "r0", "r1", "l0", "l1") + L_TOKENS + R_TOKENS + ("+", "-")
_RIGHT = ("r0", "r1") + R_TOKENS
_LEFT = ("l0", "l1") + L_TOKENS


def _true_spin_rule(l, c, r):
    if c in ("r0", "r1") and l in L_TOKENS:
        return l[1] if c == "r0" else l[2]
    if c in ("l0", "l1") and r in R_TOKENS:
        return r[1] if c == "l0" else r[2]
    if c in ("+", "-"):
        return c
    incoming = [s for s, ok in ((l, l in _RIGHT), (r, r in _LEFT)) if ok]
    return incoming[0] if len(incoming) == 1 else "."


def true_spin_model() -> ZooEntry:
    """Spin pair carriers leave (8,0) and (10,0); setting tokens leave the edges.

    The left carrier holds (s_a, s_a'), the right carrier (s_b, s_b').  A
    setting token meeting its carrier writes the selected spin as outcome.
    """
    configs = []
    for ka, kb, L, R in itertools.product("01", "01", L_TOKENS, R_TOKENS):
        configs.append(_config(".", x1=f"r{ka}", x17=f"l{kb}", x8=L, x10=R))
    model = HVTModel(
        "true_spin",
        LATTICE,
        Alphabet(TRUE_SPIN_ALPHABET),
        LocalDeterministic(_table(TRUE_SPIN_ALPHABET, _true_spin_rule)),
        uniform_measure(configs),
    )
    wiring = standard_wiring("r0", "r1", "l0", "l1", "+", "+")
    spin = TimeFamily(
        {tau: Region([(8 - tau, tau), (10 + tau, tau)]) for tau in range(0, 5)},
        _spin_payload,
        "spin-quadruple",
    )
    position = TimeFamily(
        {tau: Region.rect(8 - tau, 10 + tau, tau, tau) for tau in range(0, 5)},
        _left_carrier_position,
        "left-carrier-position",
    )
    expected = {
        "deterministic": PASS,
        "factorizability:preparation": PASS,
        "settings-independence:preparation": PASS,
        "factorizability:thick-slices": PASS,
        "settings-independence:thick-slices": FAIL,
        "local-causality-fine": PASS,
        "local-causality-coarse": PASS,
        "derivation": PASS,
        "A1:spin-quadruple": PASS,
        "A2:spin-quadruple": PASS,
        "factorizability-tilde:spin-quadruple": PASS,
        "A1:left-carrier-position": FAIL,
        "chsh-abs-le-2": PASS,
    }
    return ZooEntry(
        "true_spin", model, wiring, expected, {"spin-quadruple": spin, "left-carrier-position": position}
    )


def _spin_payload(d: dict) -> str:
    return "".join(s[1:] for _, s in sorted(d.items()))


def _left_carrier_position(d: dict) -> str:
    xs = [p.x for p, s in d.items() if s in L_TOKENS]
    return str(xs[0]) if len(xs) == 1 else "none"


# -- PR box on the lattice -------------------------------------------------------

PR_ALPHABET = (".", "r0", "r1", "l0", "l1", "h0", "h1", "+", "-")


def pr_box_spacetime() -> ZooEntry:
    configs = [
        _config(".", x1=f"r{a}", x17=f"l{b}", x9=f"h{h}")
        for a, b, h in itertools.product("01", repeat=3)
    ]
    model = HVTModel(
        "pr_box_spacetime",
        LATTICE,
        Alphabet(PR_ALPHABET),
        GlobalDeterministic("pr-box", GLOBAL_RULES["pr-box"]),
        uniform_measure(configs),
    )
    wiring = standard_wiring("r0", "r1", "l0", "l1", "+", "+", {0: Region([(9, 0)])})
    expected = {
        "deterministic": PASS,
        "locally-deterministic": FAIL,
        "factorizability:thick-slices": FAIL,
        "settings-independence:thick-slices": FAIL,
        "local-causality-fine": FAIL,
        "local-causality-coarse": FAIL,
        "derivation": FAIL,
        "sufficiency:trivial": FAIL,
        "search": "None",
        "chsh": "4/1",
    }
    return ZooEntry("pr_box_spacetime", model, wiring, expected)


# -- local stochastic ---------------------------------------------------------------

STOCH_ALPHABET = (".", "w", "Hr", "Lr", "Hl", "Ll", "0", "1")  # r/l: direction of motion
BIAS = {"H": Fraction(3, 4), "L": Fraction(1, 4)}


def _stoch_kernel(l, c, r):
    if c == "w" and l in ("Hr", "Lr"):
        p1 = BIAS[l[0]]
        return {"1": p1, "0": 1 - p1}
    if c == "w" and r in ("Hl", "Ll"):
        p1 = BIAS[r[0]]
        return {"1": p1, "0": 1 - p1}
    if c in ("w", "0", "1"):
        return {c: Fraction(1)}
    movers = [s for s, ok in ((l, l in ("Hr", "Lr")), (r, r in ("Hl", "Ll"))) if ok]
    return {movers[0] if len(movers) == 1 else ".": Fraction(1)}


def local_stochastic() -> ZooEntry:
    """Biased tokens from the edges hit walls at columns 5 and 13 and each toss
    a fresh coin there; the coin is the setting and is then frozen as outcome."""
    configs = [
        _config(".", x1=left, x5="w", x13="w", x17=right)
        for left, right in itertools.product(("Hr", "Lr"), ("Hl", "Ll"))
    ]
    model = HVTModel(
        "local_stochastic",
        LATTICE,
        Alphabet(STOCH_ALPHABET),
        LocalStochastic({nb: _stoch_kernel(*nb) for nb in itertools.product(STOCH_ALPHABET, repeat=3)}),
        uniform_measure(configs),
    )
    wiring = standard_wiring("0", "1", "0", "1", "0", "0")
    expected = {
        "locally-deterministic": FAIL,
        "factorizability:thick-slices": PASS,
        "settings-independence:thick-slices": FAIL,
        "settings-compatibility": PASS,
        "local-causality-fine": PASS,
        "local-causality-coarse": PASS,
        "derivation": PASS,
        "search": "Some",
        "chsh-abs-le-2": PASS,
    }
    return ZooEntry("local_stochastic", model, wiring, expected)


# -- deterministic but not locally deterministic ------------------------------------


def deterministic_nonlocal_settings() -> ZooEntry:
    """Bits at columns 6 (near), 14 (far) and 13 (right setting); a = near xor far."""
    configs = [
        _config("0", x6=n, x14=f, x13=b) for n, f, b in itertools.product("01", repeat=3)
    ]
    model = HVTModel(
        "deterministic_nonlocal_settings",
        LATTICE,
        Alphabet("01"),
        GlobalDeterministic("nonlocal-settings", GLOBAL_RULES["nonlocal-settings"]),
        uniform_measure(configs),
    )
    wiring = standard_wiring("0", "1", "0", "1", "0", "0")
    expected = {
        "deterministic": PASS,
        "locally-deterministic": FAIL,
    }
    return ZooEntry("deterministic_nonlocal_settings", model, wiring, expected)


# -- skip-slice dependence -------------------------------------------------------


def skip_slice_model() -> ZooEntry:
    lattice = Lattice(7, 3)
    model = HVTModel(
        "skip_slice",
        lattice,
        Alphabet("01"),
        GlobalDeterministic("skip-slice", GLOBAL_RULES["skip-slice"]),
        uniform_measure(itertools.product("01", repeat=7)),
    )
    return ZooEntry("skip_slice", model, None, {"temporal-locality": FAIL})


# -- singlet predictions ------------------------------------------------------------

STANDARD_ANGLES = (0, 2, 1, -1)  # theta_a, theta_a', theta_b, theta_b' in units of pi/4


def _quarter_pi_units(angle: float) -> int:
    k = angle / (math.pi / 4)
    if abs(k - round(k)) > 1e-9:
        raise UnsupportedAngle(f"{angle} is not a multiple of pi/4")
    return int(round(k))


def singlet_table(angles=STANDARD_ANGLES, unit: str = "quarter-pi", float_mode: bool = False) -> ZooEntry:
    """P(A,B|a,b) = (1 - A B cos(theta_a - theta_b)) / 4.

    Exact for multiples of pi/4; other angles need ``float_mode`` and the
    resulting table is flagged approximate.
    """
    if unit not in ("quarter-pi", "radian"):
        raise ValueError(f"bad angle unit {unit}")
    rad = [a * math.pi / 4 for a in angles] if unit == "quarter-pi" else list(angles)
    exact = not float_mode
    if exact:
        ks = [a if unit == "quarter-pi" and isinstance(a, int) else _quarter_pi_units(r) for a, r in zip(angles, rad)]
    table = {}
    a_ids, b_ids = ("a", "a'"), ("b", "b'")
    for i, x in enumerate(a_ids):
        for j, y in enumerate(b_ids):
            for A in (1, -1):
                for B in (1, -1):
                    if exact:
                        c = cos_quarter_pi(ks[i] - ks[2 + j])
                        table[(x, y, A, B)] = (1 - A * B * c) / 4
                    else:
                        table[(x, y, A, B)] = (1 - A * B * math.cos(rad[i] - rad[2 + j])) / 4
    law = PredictionsOnly(table, a_ids, b_ids, approx=not exact)
    model = HVTModel("singlet", None, None, law)
    expected = {"chsh": "(0-2*sqrt2)/1"} if exact and tuple(angles) == STANDARD_ANGLES else {}
    return ZooEntry("singlet", model, None, expected)


# -- generated models -------------------------------------------------------------


def random_reversible(seed: int, width: int = 9, height: Optional[int] = None, geometry: bool = False) -> ZooEntry:
    """A random reversible radius-1 rule with a random rational product measure.

    Rules are either a symbol permutation applied to one neighbour (left,
    centre or right) or a two-lane transport rule on four symbols.  With
    ``geometry`` the model lives on the shared Bell geometry and gets the
    standard wiring, with the cells feeding the setting sites randomized.
    """
    rng = random.Random(seed)
    kind = rng.choice(["perm", "perm", "transport"])
    if kind == "perm":
        k = rng.choice([2, 3])
        alphabet = tuple(str(i) for i in range(k))
        perm = list(alphabet)
        rng.shuffle(perm)
        pi = dict(zip(alphabet, perm))
        src = rng.choice([0, 1, 2])
        table = {nb: pi[nb[src]] for nb in itertools.product(alphabet, repeat=3)}
        offset = src - 1

        def feeders(x, t):
            return [x + t * offset]
    else:
        alphabet = ("0", "1", "2", "3")  # bit 1: right lane, bit 0: left lane
        flip_r, flip_l = rng.randint(0, 1), rng.randint(0, 1)

        def lane(nb):
            l, _, r = (int(s) for s in nb)
            return str((((l >> 1) ^ flip_r) << 1) | ((r & 1) ^ flip_l))

        table = {nb: lane(nb) for nb in itertools.product(alphabet, repeat=3)}

        def feeders(x, t):
            return [x - t, x + t]

    if geometry:
        lattice = LATTICE
        width = WIDTH
        active = sorted({x for site in ((5, 4), (13, 4)) for x in feeders(*site)})
        extra = [x for x in range(width) if x not in active]
        active += rng.sample(extra, 1)
    else:
        lattice = Lattice(width, height if height is not None else (width - 1) // 2)
        active = sorted(rng.sample(range(width), rng.choice([3, 4])))
    background = rng.choice(alphabet)
    cells = {}
    for x in active:
        ws = [rng.randint(1, 4) for _ in alphabet]
        total = sum(ws)
        cells[x] = {s: Fraction(w, total) for s, w in zip(alphabet, ws)}
    measure = product_measure(width, cells, background)
    name = f"random_reversible_{seed}" + ("_bell" if geometry else "")
    model = HVTModel(name, lattice, Alphabet(alphabet), LocalDeterministic(table), measure)
    wiring = None
    if geometry:
        s0 = alphabet[0]
        wiring = standard_wiring(s0, None, s0, None, s0, s0)
    return ZooEntry(name, model, wiring, {"locally-deterministic": PASS, "deterministic": PASS})


def random_rule(seed: int, width: int = 7) -> ZooEntry:
    """Arbitrary (usually irreversible) radius-1 rule; a negative control."""
    rng = random.Random(seed)
    alphabet = ("0", "1")
    table = {nb: rng.choice(alphabet) for nb in itertools.product(alphabet, repeat=3)}
    lattice = Lattice(width, (width - 1) // 2)
    active = sorted(rng.sample(range(width), 4))
    cells = {x: {"0": Fraction(1, 2), "1": Fraction(1, 2)} for x in active}
    measure = product_measure(width, cells, "0")
    model = HVTModel(f"random_rule_{seed}", lattice, Alphabet(alphabet), LocalDeterministic(table), measure)
    return ZooEntry(model.name, model, None, {})


def all_entries() -> list:
    return [
        true_spin_model(),
        reversible_ca(),
        pr_box_spacetime(),
        local_stochastic(),
        deterministic_nonlocal_settings(),
        singlet_table(),
        skip_slice_model(),
    ]


def by_name(name: str) -> ZooEntry:
    for e in all_entries() + [reversible_ca("single"), reversible_ca("two")]:
        if e.name == name:
            return e
    raise KeyError(name)
