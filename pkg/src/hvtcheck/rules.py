"""Built-in global (nonlocal) rules, addressable by name from model files.

A rule maps the history of slices so far to the next slice.  Row ``t``
holds sites ``t .. width-1-t``, so site ``x`` sits at index ``x - t``.
"""

from __future__ import annotations

RIGHT_MOVERS = ("r0", "r1")
LEFT_MOVERS = ("l0", "l1")


def _get(row, t, x, default="."):
    i = x - t
    return row[i] if 0 <= i < len(row) else default


def _transport(row, t):
    """Next row for settings tokens moving at light speed; hidden bits stay put."""
    out = []
    for x in range(t + 1, t + len(row) - 1):
        here, left, right = _get(row, t, x), _get(row, t, x - 1), _get(row, t, x + 1)
        if here in ("h0", "h1", "+", "-"):
            out.append(here)
        elif left in RIGHT_MOVERS and right in LEFT_MOVERS:
            out.append(".")
        elif left in RIGHT_MOVERS:
            out.append(left)
        elif right in LEFT_MOVERS:
            out.append(right)
        else:
            out.append(".")
    return out


def pr_box(history, lattice):
    """Shared bit h at column 9; the right outcome reads the far setting.

    A = h and B = h xor (a and b), written on the step into the top slice.
    """
    t = len(history) - 1
    row = history[-1]
    out = _transport(row, t)
    if t + 1 == lattice.height:
        h = int(_get(row, t, 9)[1])
        a = int(_get(row, t, 5)[1])
        b = int(_get(row, t, 13)[1])
        out[5 - (t + 1)] = "+" if h == 0 else "-"
        out[13 - (t + 1)] = "+" if (h ^ (a & b)) == 0 else "-"
    return out


def nonlocal_settings(history, lattice):
    """Left setting cell (5,4) becomes n xor f, with f read at column 14.

    Every other cell is stationary; the top outcome cell copies the setting.
    """
    t = len(history) - 1
    row = history[-1]
    out = [_get(row, t, x) for x in range(t + 1, t + len(row) - 1)]
    if t + 1 == 4:
        n, f = int(_get(row, t, 6)), int(_get(row, t, 14))
        out[5 - 4] = str(n ^ f)
    if t + 1 == 5:
        out[5 - 5] = _get(row, t, 5)
    return out


def skip_slice(history, lattice):
    """Slices 1 and 2 are blank; slice 3 reproduces slice 0 directly."""
    t = len(history) - 1
    width = len(history[-1]) - 2
    if t + 1 == 3:
        first = history[0]
        return [first[x] for x in range(3, 3 + width)]
    return ["0"] * width


GLOBAL_RULES = {
    "pr-box": pr_box,
    "nonlocal-settings": nonlocal_settings,
    "skip-slice": skip_slice,
}
