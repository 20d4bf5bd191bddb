"""Deterministic instance families, emitted as script fragments.

Every fragment declares a ring ``R`` and a module ``M`` (some also ``N``),
so fragments can be parsed on their own and printed as counterexamples.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import InputError

GORENSTEIN_FIXTURES: Dict[str, str] = {
    "A2": "QQ[x, y]",
    "A3": "QQ[x, y, z]",
    "H2": "QQ[x, y] / (x^2)",
    "Q3": "QQ[x, y, z] / (x*y - z^2)",
    "CI2": "QQ[x, y] / (x^2, y^2)",
}
NON_GORENSTEIN_FIXTURES: Dict[str, str] = {
    "N2": "QQ[x, y] / (x^2, x*y)",
}
REDUCED_RING = "QQ[x, y] / (x*y)"


def fixture_vars(spec: str) -> List[str]:
    inside = spec[spec.index("[") + 1:spec.index("]")]
    return [v.strip() for v in inside.split(",")]


def _mono_text(names: Sequence[str], e: Sequence[int]) -> str:
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) or "1"


def _monomials(n: int, d: int):
    if n == 1:
        return [(d,)]
    return [(a,) + rest for a in range(d, -1, -1) for rest in _monomials(n - 1, d - a)]


def random_poly_text(rng: random.Random, names: Sequence[str], d: int, terms: int = 2) -> str:
    """Random homogeneous polynomial of degree d with small integer coefficients."""
    if d < 0:
        return "0"
    mons = _monomials(len(names), d)
    pick = rng.sample(mons, min(terms, len(mons)))
    out = []
    for e in pick:
        c = rng.choice([1, 1, 1, -1, 2, -2, 3])
        m = _mono_text(names, e)
        if m == "1":
            s = str(abs(c))
        else:
            s = m if abs(c) == 1 else f"{abs(c)}*{m}"
        if not out:
            out.append(("-" if c < 0 else "") + s)
        else:
            out.append(("- " if c < 0 else "+ ") + s)
    return " ".join(out)


def random_matrix_text(rng: random.Random, names: Sequence[str], rows: int, cols: int,
                       max_deg: int = 2, density: float = 0.75) -> str:
    """``[[...]] target (...) source (...)`` with homogeneous entries of degree 1..max_deg."""
    tdeg = [0] * rows
    sdeg = [rng.randint(1, max_deg) for _ in range(cols)]
    grid = [["0"] * cols for _ in range(rows)]
    for j in range(cols):
        filled = False
        for i in range(rows):
            if rng.random() < density:
                grid[i][j] = random_poly_text(rng, names, sdeg[j] - tdeg[i], rng.choice([1, 1, 2]))
                filled = True
        if not filled:
            i = rng.randrange(rows)
            grid[i][j] = random_poly_text(rng, names, sdeg[j] - tdeg[i], 1)
    body = ", ".join("[" + ", ".join(r) + "]" for r in grid)
    return (f"[{body}] target ({', '.join(map(str, tdeg))}) "
            f"source ({', '.join(map(str, sdeg))})")


def random_module_fragment(rng: random.Random, ring_spec: str, name: str = "M",
                           max_rows: int = 2, max_cols: int = 3, max_deg: int = 2) -> str:
    names = fixture_vars(ring_spec)
    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max_cols)
    return f"module {name} = coker R {random_matrix_text(rng, names, rows, cols, max_deg)};"


def _ring_line(spec: str) -> str:
    return f"ring R = {spec};"


def generate_family(name: str, params: Optional[dict] = None, seed: int = 0) -> List[str]:
    """Script fragments for a named family; identical (name, params, seed) give identical output."""
    params = dict(params or {})
    rng = random.Random(f"{name}:{seed}")
    count = int(params.get("count", 5))
    if name == "prop8":
        n = int(params.get("n", 3))
        ks = params.get("ks", range(n))
        names = [f"x{i + 1}" for i in range(n)]
        out = []
        for k in ks:
            if not 0 <= k < n:
                raise InputError("prop8 family needs 0 <= k < n")
            col = ", ".join(f"[{v}]" for v in names[:k + 1])
            tgt = ", ".join(["-1"] * (k + 1))
            out.append(f"ring R = QQ[{', '.join(names)}];\n"
                       f"module M = coker R [{col}] target ({tgt}) source (0);")
        return out
    if name == "hypersurface":
        f = params.get("f", "x^2")
        spec = f"QQ[x, y] / ({f})"
        out = [f"{_ring_line(spec)}\nmodule M = coker R [[x]];",
               f"{_ring_line(spec)}\nmodule M = residue R;"]
        for _ in range(int(params.get("count", 0))):
            out.append(f"{_ring_line(spec)}\n{random_module_fragment(rng, spec)}")
        return out
    if name == "reduced":
        out = []
        for _ in range(count):
            frag = random_module_fragment(rng, REDUCED_RING, "N")
            out.append(f"{_ring_line(REDUCED_RING)}\n{frag}\nmodule M = dual N;")
        return out
    if name == "random":
        specs = _ring_specs(params.get("rings", "gorenstein"))
        out = []
        for i in range(count):
            spec = specs[i % len(specs)]
            out.append(f"{_ring_line(spec)}\n"
                       f"{random_module_fragment(rng, spec, 'M', int(params.get('rows', 2)), int(params.get('cols', 3)), int(params.get('max_deg', 2)))}")
        return out
    if name == "koszul":
        spec = GORENSTEIN_FIXTURES["A3"]
        names = fixture_vars(spec)
        out = []
        for _ in range(count):
            r = rng.randint(1, 3)
            forms = [random_poly_text(rng, names, 1, rng.randint(1, 2)) for _ in range(r)]
            out.append(f"{_ring_line(spec)}\nmodule M = coker R [[{', '.join(forms)}]];")
        return out
    if name == "monomial":
        names = ["x", "y", "z"]
        mons = [_mono_text(names, e) for e in _monomials(3, 2)]
        out = []
        for _ in range(count):
            gens = rng.sample(mons, rng.randint(1, 3))
            spec = f"QQ[x, y, z] / ({', '.join(gens)})"
            mod = rng.choice(["module M = residue R;", "module M = coker R [[x]];",
                              "module M = coker R [[x, y]];"])
            out.append(f"{_ring_line(spec)}\n{mod}")
        return out
    raise InputError(f"unknown family {name!r}")


def _ring_specs(which) -> List[str]:
    if isinstance(which, (list, tuple)):
        return list(which)
    if which == "gorenstein":
        return list(GORENSTEIN_FIXTURES.values())
    if which == "all":
        return list(GORENSTEIN_FIXTURES.values()) + list(NON_GORENSTEIN_FIXTURES.values())
    if which in GORENSTEIN_FIXTURES:
        return [GORENSTEIN_FIXTURES[which]]
    if which in NON_GORENSTEIN_FIXTURES:
        return [NON_GORENSTEIN_FIXTURES[which]]
    return [which]


FAMILIES = ("prop8", "hypersurface", "reduced", "random", "koszul", "monomial")
