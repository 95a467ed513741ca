"""Registry of named code instances shipped with the package.

The registry file is line-oriented text: one `family key=value ...` entry per
code. Surface entries carry the distance; bicycle entries carry (l, m), the
block exponents, the certified [[n, k, d]] and the tuned ancilla count.
BB6 entries are search-derived (the defining polynomials are not published),
kept as the first hit of the documented canonical search order.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

from . import codes
from .codes import Bb5Spec, Bb6Spec, CssCode


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    family: str  # surface | bb5 | bb6
    n: int
    k: int
    d: int
    n_a: int  # tuned ancilla count
    params: dict


def _parse_line(line: str) -> RegistryEntry:
    parts = line.split()
    family = parts[0]
    kv = dict(p.split("=", 1) for p in parts[1:])
    params: dict = {}
    if family == "surface":
        params["d"] = int(kv["d"])
    elif family == "bb5":
        params["l"] = int(kv["l"])
        params["m"] = int(kv["m"])
        params["exps"] = tuple(
            tuple(int(x) for x in pair.split(":")) for pair in kv["exps"].split(",")
        )
    elif family == "bb6":
        params["l"] = int(kv["l"])
        params["m"] = int(kv["m"])
        params["a"] = tuple((g[0], int(g[1:])) for g in kv["a"].split(","))
        params["b"] = tuple((g[0], int(g[1:])) for g in kv["b"].split(","))
    else:
        raise ValueError(f"unknown registry family {family!r}")
    return RegistryEntry(
        name=kv["name"], family=family, n=int(kv["n"]), k=int(kv["k"]),
        d=int(kv["d"]), n_a=int(kv["na"]), params=params,
    )


def registry_text() -> str:
    return importlib.resources.files("ionqec.data").joinpath("registry.txt").read_text()


def entries() -> list[RegistryEntry]:
    out = []
    for line in registry_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(_parse_line(line))
    return out


def names() -> list[str]:
    return [e.name for e in entries()]


def get_entry(name: str) -> RegistryEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(f"unknown code {name!r}; available: {', '.join(names())}")


def build(name: str, *, with_logicals: bool = True) -> CssCode:
    """Construct a registry code by name, parameters cross-checked."""
    e = get_entry(name)
    if e.family == "surface":
        code = codes.build_surface(e.params["d"])
    elif e.family == "bb5":
        code = codes.build_bb5(Bb5Spec(e.params["l"], e.params["m"], e.params["exps"]))
    else:
        code = codes.build_bb6(Bb6Spec(e.params["l"], e.params["m"], e.params["a"] + e.params["b"]))
    if (code.n, code.k) != (e.n, e.k):
        raise AssertionError(f"{name}: registry says [[{e.n},{e.k}]], built [[{code.n},{code.k}]]")
    code = codes.CssCode(
        name=e.name, hx=code.hx, hz=code.hz, n=code.n, k=code.k, d=e.d,
        warnings=code.warnings,
    )
    return codes.compute_logicals(code) if with_logicals else code


def tuned_ancillas(name: str) -> int:
    return get_entry(name).n_a
