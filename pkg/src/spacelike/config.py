"""Flat ``key=value`` configuration for surfaces and runs.

A config is a sequence of ``key=value`` pairs separated by whitespace or
newlines; ``#`` starts a comment. A word without ``=`` continues the value of
the previous pair, so expressions may contain spaces. Vectors are comma
lists; matrix rows and polynomial terms are separated by ``;``.

Surface keys::

    kind=plane        m n c=<n x m rows> [b=<n values>]
    kind=hyperboloid  m [R=1] [center=<m values>]          (n = 1)
    kind=polynomial   m n p1=<coef:e1,..,em;...> .. pn=..  (degree <= 4)
    kind=radial       m coeffs=<a0,a1,..> [center=..]      f = sum a_k |x|^(2k)
    kind=expression   m n f1=<expr> .. fn=<expr>
    name=<label>

Run keys::

    command  points=<x;x;..>  n_points  box  radii  n_int  n_bd  samples
    h_samples  horoball  seed  tol  format  out
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import surfaces
from .errors import ConfigError, GeometryError
from .expression import expression_surface, parse_expression
from .geometry import SurfaceDef

KINDS = ("plane", "hyperboloid", "polynomial", "radial", "expression")
COMMANDS = ("analyze", "stokes", "growth", "models", "suite")
FORMATS = ("json-lines", "csv")

SURFACE_KEYS = {"kind", "m", "n", "name", "c", "b", "R", "center", "coeffs"}
RUN_KEYS = {
    "command",
    "points",
    "n_points",
    "box",
    "radii",
    "n_int",
    "n_bd",
    "samples",
    "h_samples",
    "horoball",
    "seed",
    "tol",
    "format",
    "out",
}


@dataclass
class Entry:
    value: str
    line: int
    column: int  # column of the first value character


def tokenize_config(text: str) -> Dict[str, Entry]:
    entries: Dict[str, Entry] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        for word in line.split():
            col = line.index(word, pos) + 1
            pos = col - 1 + len(word)
            if "=" in word:
                key, _, value = word.partition("=")
                if not key or not (key[0].isalpha() or key[0] == "_"):
                    raise ConfigError(f"malformed key in {word!r}", lineno, col)
                if key in entries:
                    raise ConfigError(f"duplicate key {key!r}", lineno, col)
                current = key
                entries[key] = Entry(value, lineno, col + len(key) + 1)
            elif current is None:
                raise ConfigError(f"expected key=value, found {word!r}", lineno, col)
            else:
                e = entries[current]
                if e.line != lineno:
                    raise ConfigError(f"expected key=value, found {word!r}", lineno, col)
                # keep single spaces between continuation words
                e.value = f"{e.value} {word}" if e.value else word
    return entries


def _float(e: Entry, key: str) -> float:
    try:
        return float(e.value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {e.value!r}", e.line, e.column) from None


def _int(e: Entry, key: str) -> int:
    try:
        return int(e.value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {e.value!r}", e.line, e.column) from None


def _floats(e: Entry, key: str, text: Optional[str] = None) -> List[float]:
    text = e.value if text is None else text
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"{key}: expected a comma list of numbers, got {text!r}", e.line, e.column) from None


def _rows(e: Entry, key: str) -> List[List[float]]:
    return [_floats(e, key, row) for row in e.value.split(";") if row.strip()]


@dataclass
class SurfaceSpec:
    kind: str
    m: int
    n: int
    params: dict
    name: str

    def build(self) -> SurfaceDef:
        p = self.params
        if self.kind == "plane":
            return surfaces.plane(p["c"], p["b"], name=self.name)
        if self.kind == "hyperboloid":
            return surfaces.hyperboloid(self.m, p["R"], p["center"], name=self.name)
        if self.kind == "polynomial":
            return surfaces.polynomial(p["terms"], self.m, name=self.name)
        if self.kind == "radial":
            return surfaces.radial(p["coeffs"], self.m, p["center"], name=self.name)
        return expression_surface(p["nodes"], self.m, name=self.name)


def _surface_from_entries(entries: Dict[str, Entry]) -> SurfaceSpec:
    if "kind" not in entries:
        raise ConfigError("missing required key 'kind'")
    ek = entries["kind"]
    kind = ek.value
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}", ek.line, ek.column)
    if "m" not in entries:
        raise ConfigError("missing required key 'm'")
    m = _int(entries["m"], "m")
    if m < 1:
        raise ConfigError("m must be >= 1", entries["m"].line, entries["m"].column)
    n = _int(entries["n"], "n") if "n" in entries else 1
    if n < 1:
        raise ConfigError("n must be >= 1", entries["n"].line, entries["n"].column)
    name = entries["name"].value if "name" in entries else kind
    params: dict = {}

    def vec(key, length, default):
        if key not in entries:
            return default
        e = entries[key]
        v = _floats(e, key)
        if len(v) != length:
            raise ConfigError(f"{key}: expected {length} values, got {len(v)}", e.line, e.column)
        return np.array(v)

    def center():
        return vec("center", m, np.zeros(m))

    if kind == "plane":
        if "c" not in entries:
            raise ConfigError("plane needs slope matrix 'c'")
        e = entries["c"]
        c = _rows(e, "c")
        if len(c) != n or any(len(row) != m for row in c):
            raise ConfigError(f"c: expected {n} row(s) of {m} values", e.line, e.column)
        params = {"c": np.array(c), "b": vec("b", n, np.zeros(n))}
    elif kind == "hyperboloid":
        if n != 1:
            raise ConfigError("hyperboloid requires n = 1", entries["n"].line, entries["n"].column)
        R = _float(entries["R"], "R") if "R" in entries else 1.0
        if not R > 0:
            raise ConfigError("hyperboloid requires R > 0", entries["R"].line, entries["R"].column)
        params = {"R": R, "center": center()}
    elif kind == "radial":
        if n != 1:
            raise ConfigError("radial requires n = 1", entries["n"].line, entries["n"].column)
        if "coeffs" not in entries:
            raise ConfigError("radial needs 'coeffs'")
        params = {"coeffs": _floats(entries["coeffs"], "coeffs"), "center": center()}
    elif kind == "polynomial":
        terms = []
        for s in range(1, n + 1):
            key = f"p{s}"
            if key not in entries:
                raise ConfigError(f"polynomial needs {key}")
            e = entries[key]
            out = []
            for term in e.value.split(";"):
                if not term.strip():
                    continue
                coef, sep, exps = term.partition(":")
                if not sep:
                    raise ConfigError(f"{key}: term {term!r} must be coef:e1,..,em", e.line, e.column)
                try:
                    ex = [int(v) for v in exps.split(",")]
                    cf = float(coef)
                except ValueError:
                    raise ConfigError(f"{key}: malformed term {term!r}", e.line, e.column) from None
                if len(ex) != m or min(ex) < 0:
                    raise ConfigError(f"{key}: term {term!r} needs {m} non-negative exponents", e.line, e.column)
                if sum(ex) > 4:
                    raise ConfigError(f"{key}: term {term!r} has degree > 4", e.line, e.column)
                out.append((cf, ex))
            terms.append(out)
        params = {"terms": terms}
    else:
        nodes = []
        for s in range(1, n + 1):
            key = f"f{s}"
            if key not in entries:
                raise ConfigError(f"expression surface needs {key}")
            e = entries[key]
            nodes.append(parse_expression(e.value, m, e.line, e.column))
        params = {"nodes": nodes}

    extra = {
        k
        for k in entries
        if k not in SURFACE_KEYS and k not in RUN_KEYS and not _is_component_key(k, kind, n)
    }
    if extra:
        k = sorted(extra)[0]
        raise ConfigError(f"unknown key {k!r}", entries[k].line, entries[k].column - len(k) - 1)
    return SurfaceSpec(kind, m, n, params, name)


def _is_component_key(key: str, kind: str, n: int) -> bool:
    prefix = {"polynomial": "p", "expression": "f"}.get(kind)
    if prefix is None or not key.startswith(prefix) or not key[1:].isdigit():
        return False
    return 1 <= int(key[1:]) <= n


def parse_surface(text: str) -> SurfaceSpec:
    """Parse the surface part of a config; unknown keys are rejected."""
    return _surface_from_entries(tokenize_config(text))


@dataclass
class RunConfig:
    command: Optional[str]
    surface: SurfaceSpec
    points: Optional[List[List[float]]] = None
    n_points: int = 20
    box: float = 2.0
    radii: Optional[List[float]] = None
    n_int: int = 64
    n_bd: int = 512
    samples: int = 64
    h_samples: int = 16
    horoball: float = 0.5
    seed: int = 0
    tol: Optional[float] = None
    output_format: str = "json-lines"
    output_path: Optional[str] = None

    def sample_points(self) -> Tuple[np.ndarray, str]:
        """Configured points, or ``n_points`` seeded uniform draws in ``[-box, box]^m``."""
        m = self.surface.m
        if self.points is not None:
            return np.array(self.points, dtype=float), "configured"
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-self.box, self.box, size=(self.n_points, m)), f"uniform(seed={self.seed})"


def parse_config(text: str) -> RunConfig:
    entries = tokenize_config(text)
    spec = _surface_from_entries(entries)
    cfg = RunConfig(command=None, surface=spec)

    def positive_int(key):
        e = entries[key]
        v = _int(e, key)
        if v < 1:
            raise ConfigError(f"{key} must be positive", e.line, e.column)
        return v

    if "command" in entries:
        e = entries["command"]
        if e.value not in COMMANDS:
            raise ConfigError(f"command must be one of {', '.join(COMMANDS)}", e.line, e.column)
        cfg.command = e.value
    if "points" in entries:
        e = entries["points"]
        pts = _rows(e, "points")
        if not pts or any(len(p) != spec.m for p in pts):
            raise ConfigError(f"points: each point needs {spec.m} coordinates", e.line, e.column)
        cfg.points = pts
    for key in ("n_points", "n_int", "n_bd", "samples", "h_samples"):
        if key in entries:
            setattr(cfg, key, positive_int(key))
    if "box" in entries:
        cfg.box = _float(entries["box"], "box")
    if "radii" in entries:
        e = entries["radii"]
        radii = _floats(e, "radii")
        if not radii or min(radii) <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConfigError("radii must be positive and strictly increasing", e.line, e.column)
        cfg.radii = radii
    if "horoball" in entries:
        e = entries["horoball"]
        cfg.horoball = _float(e, "horoball")
        if not cfg.horoball > 0:
            raise ConfigError("horoball height must be positive", e.line, e.column)
    if "seed" in entries:
        cfg.seed = _int(entries["seed"], "seed")
    if "tol" in entries:
        cfg.tol = _float(entries["tol"], "tol")
    if "format" in entries:
        e = entries["format"]
        if e.value not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}", e.line, e.column)
        cfg.output_format = e.value
    if "out" in entries:
        cfg.output_path = entries["out"].value
    return cfg


def build_surface(spec: SurfaceSpec) -> SurfaceDef:
    try:
        return spec.build()
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc
