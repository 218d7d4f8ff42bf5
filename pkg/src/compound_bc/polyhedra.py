"""Symbolic rate-region inequality systems and 2-D polyhedral geometry.

A RegionSystem is a list of linear inequalities over named rate variables,
whose right-hand sides are exact-rational combinations of opaque information
atoms (strings like "I(U;Y1|Q)" or "H(X|Q)").  Fourier-Motzkin elimination is
carried out over Fractions so projections are exact; geometry only happens
after `instantiate` plugs numeric values into the atoms.

Numeric regions are always intersected with the box [0, BOX]^d, so vertex
enumeration never has to deal with unbounded polyhedra.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .info import mi_groups

BOX = 50.0
VERTEX_TOL = 1e-9
PRUNE_TOL = 1e-7

F0 = Fraction(0)
F1 = Fraction(1)


class EmptyRegionError(ValueError):
    """Raised when a numeric region has no feasible point."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class InfoExpr:
    """Exact-rational linear combination of info atoms plus a constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=0):
        self.coeffs = {a: _frac(c) for a, c in (coeffs or {}).items() if c != 0}
        self.const = _frac(const)

    @classmethod
    def atom(cls, name, coeff=1) -> "InfoExpr":
        return cls({name: coeff})

    def __add__(self, other):
        if not isinstance(other, InfoExpr):
            return InfoExpr(self.coeffs, self.const + _frac(other))
        coeffs = dict(self.coeffs)
        for a, c in other.coeffs.items():
            coeffs[a] = coeffs.get(a, F0) + c
        return InfoExpr(coeffs, self.const + other.const)

    def __sub__(self, other):
        return self + (other * -1 if isinstance(other, InfoExpr)
                       else InfoExpr(const=-_frac(other)))

    def __mul__(self, k):
        k = _frac(k)
        return InfoExpr({a: c * k for a, c in self.coeffs.items()}, self.const * k)

    __rmul__ = __mul__

    def evaluate(self, values: dict) -> float:
        total = float(self.const)
        for a, c in self.coeffs.items():
            total += float(c) * values[a]
        return total

    def key(self):
        return (tuple(sorted((a, c) for a, c in self.coeffs.items())), self.const)

    def __repr__(self):
        parts = [f"{c}*{a}" for a, c in sorted(self.coeffs.items())]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


@dataclass
class LinIneq:
    """sum_v lhs[v] * v  (<= or <)  rhs, with rhs an InfoExpr."""

    lhs: dict
    rel: str
    rhs: InfoExpr

    def __post_init__(self):
        self.lhs = {v: _frac(c) for v, c in self.lhs.items() if c != 0}
        if self.rel not in ("<=", "<"):
            raise ValueError(f"relation must be '<=' or '<', got {self.rel!r}")
        if not isinstance(self.rhs, InfoExpr):
            self.rhs = InfoExpr(const=self.rhs)

    def key(self):
        return (tuple(sorted(self.lhs.items())), self.rel, self.rhs.key())

    def scaled(self, k) -> "LinIneq":
        k = _frac(k)
        if k <= 0:
            raise ValueError("inequalities may only be scaled by positive factors")
        return LinIneq({v: c * k for v, c in self.lhs.items()}, self.rel,
                       self.rhs * k)

    def normalized(self) -> "LinIneq":
        """Scale so the first nonzero coefficient (vars, then atoms) is +-1."""
        for _, c in sorted(self.lhs.items()):
            return self.scaled(F1 / abs(c))
        for _, c in sorted(self.rhs.coeffs.items()):
            return self.scaled(F1 / abs(c))
        if self.rhs.const != 0:
            return self.scaled(F1 / abs(self.rhs.const))
        return self

    def __repr__(self):
        lhs = " + ".join(f"{c}*{v}" for v, c in sorted(self.lhs.items())) or "0"
        return f"{lhs} {self.rel} {self.rhs!r}"


def ineq(lhs, rel, rhs) -> LinIneq:
    """Convenience builder: ineq({'R1':1,'R2':1}, '<=', expr_or_atom_name)."""
    if isinstance(rhs, str):
        rhs = InfoExpr.atom(rhs)
    return LinIneq(lhs, rel, rhs)


@dataclass
class RegionSystem:
    rate_vars: list
    ineqs: list = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.rate_vars)) != len(self.rate_vars):
            raise ValueError("rate variables must be distinct")
        for iq in self.ineqs:
            unknown = set(iq.lhs) - set(self.rate_vars)
            if unknown:
                raise ValueError(f"inequality uses unknown rate vars {unknown}")
            if "const" in iq.rhs.coeffs:
                raise ValueError("atom name 'const' is reserved")

    def atoms(self) -> list:
        seen = {}
        for iq in self.ineqs:
            for a in iq.rhs.coeffs:
                seen[a] = None
        return list(seen)

    def conjoin(self, other: "RegionSystem") -> "RegionSystem":
        merged = list(self.rate_vars)
        merged += [v for v in other.rate_vars if v not in merged]
        return RegionSystem(merged, _dedupe(self.ineqs + other.ineqs))

    def to_json(self) -> dict:
        return {
            "rate_vars": list(self.rate_vars),
            "atoms": self.atoms(),
            "ineqs": [
                {
                    "lhs": {v: str(c) for v, c in sorted(iq.lhs.items())},
                    "rel": iq.rel,
                    "rhs": dict(
                        {a: str(c) for a, c in sorted(iq.rhs.coeffs.items())},
                        const=str(iq.rhs.const)),
                }
                for iq in self.ineqs
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RegionSystem":
        ineqs = []
        for row in obj["ineqs"]:
            rhs = dict(row.get("rhs", {}))
            const = rhs.pop("const", "0")
            ineqs.append(LinIneq({v: Fraction(c) for v, c in row["lhs"].items()},
                                 row["rel"], InfoExpr(rhs, const)))
        return cls(list(obj["rate_vars"]), ineqs)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "RegionSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _dedupe(ineqs):
    """Drop exact duplicates; of a <=/< pair on the same row keep the strict one."""
    best = {}
    order = []
    for iq in ineqs:
        n = iq.normalized()
        k = (tuple(sorted(n.lhs.items())), n.rhs.key())
        if k not in best:
            best[k] = n
            order.append(k)
        elif n.rel == "<" and best[k].rel == "<=":
            best[k] = n
    return [best[k] for k in order]


def _is_trivial(iq: LinIneq) -> bool:
    """Constant rows that always hold: 0 <= c with c >= 0 (or 0 < c, c > 0)."""
    if iq.lhs or iq.rhs.coeffs:
        return False
    return iq.rhs.const > 0 or (iq.rhs.const == 0 and iq.rel == "<=")


def fme_eliminate(system: RegionSystem, var, drop_trivial=True) -> RegionSystem:
    """Project `var` out by Fourier-Motzkin elimination (exact rationals).

    Pairs every upper bound on var with every lower bound; a strict relation
    on either side makes the combination strict.
    """
    if var not in system.rate_vars:
        raise KeyError(f"unknown rate variable {var!r}")
    uppers, lowers, frees = [], [], []
    for iq in system.ineqs:
        c = iq.lhs.get(var, F0)
        if c > 0:
            uppers.append(iq.scaled(F1 / c))
        elif c < 0:
            lowers.append(iq.scaled(F1 / -c))
        else:
            frees.append(iq)
    combos = []
    for up in uppers:
        for lo in lowers:
            lhs = dict(up.lhs)
            for v, c in lo.lhs.items():
                lhs[v] = lhs.get(v, F0) + c
            lhs.pop(var, None)
            rel = "<" if "<" in (up.rel, lo.rel) else "<="
            row = LinIneq(lhs, rel, up.rhs + lo.rhs)
            if drop_trivial and _is_trivial(row):
                continue
            combos.append(row)
    rate_vars = [v for v in system.rate_vars if v != var]
    return RegionSystem(rate_vars, _dedupe(frees + combos))


def fme_eliminate_all(system: RegionSystem, variables) -> RegionSystem:
    for v in variables:
        system = fme_eliminate(system, v)
    return system


def substitute_rates(system: RegionSystem, mapping: dict, new_vars=None,
                     aux=()) -> RegionSystem:
    """Rewrite rates under an affine substitution and adjoin aux constraints.

    mapping: old var -> dict of {new var: coeff} (a missing old var maps to
    itself).  Constants may be injected with the reserved key "" (they move
    onto the rhs).  aux inequalities are stated over the new variables.
    """
    resolved = {}
    for old in system.rate_vars:
        if old in mapping:
            resolved[old] = {v: _frac(c) for v, c in mapping[old].items()}
        else:
            resolved[old] = {old: F1}
    if new_vars is None:
        new_vars = []
        for form in resolved.values():
            for v in form:
                if v and v not in new_vars:
                    new_vars.append(v)
        for a in aux:
            for v in a.lhs:
                if v not in new_vars:
                    new_vars.append(v)
    out = []
    for iq in system.ineqs:
        lhs = {}
        shift = F0
        for old, c in iq.lhs.items():
            for v, k in resolved[old].items():
                if v == "":
                    shift += c * k
                else:
                    lhs[v] = lhs.get(v, F0) + c * k
        out.append(LinIneq(lhs, iq.rel, iq.rhs - shift))
    out.extend(aux)
    return RegionSystem(list(new_vars), _dedupe(out))


# ---------------------------------------------------------------------------
# numeric geometry


class NumericRegion:
    """Closed polyhedron {x : A x <= b} intersected with [0, BOX]^d."""

    def __init__(self, var_names, A, b, box=BOX):
        self.var_names = list(var_names)
        d = len(self.var_names)
        A = np.asarray(A, dtype=float).reshape(-1, d)
        b = np.asarray(b, dtype=float).ravel()
        eye = np.eye(d)
        self.A = np.vstack([A, -eye, eye])
        self.b = np.concatenate([b, np.zeros(d), np.full(d, box)])
        self.n_rows = len(A)  # rows before the implicit box block
        self.box = box

    @property
    def dim(self):
        return len(self.var_names)

    def feasible(self, pts, tol=VERTEX_TOL):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.all(pts @ self.A.T <= self.b + tol, axis=1)

    def violation(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.max(pts @ self.A.T - self.b, axis=1)

    def vertices(self, tol=VERTEX_TOL):
        """All basic feasible points (dimension <= 3 only)."""
        d = self.dim
        if d > 3:
            raise NotImplementedError("vertex enumeration is limited to <= 3 dims")
        m = len(self.A)
        verts = []
        for rows in itertools.combinations(range(m), d):
            M = self.A[list(rows)]
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            v = np.linalg.solve(M, self.b[list(rows)])
            if np.all(self.A @ v <= self.b + tol):
                verts.append(v)
        if not verts:
            raise EmptyRegionError("region has no feasible vertex")
        verts = np.array(verts)
        # dedupe within tolerance
        keep = []
        for v in verts:
            if not any(np.linalg.norm(v - w) <= 10 * tol for w in keep):
                keep.append(v)
        return np.array(keep)


class NumericRegion2D(NumericRegion):
    """Two-variable region; adds ordered-vertex and containment helpers."""

    def __init__(self, A, b, var_names=("R1", "R2"), box=BOX):
        if len(var_names) != 2:
            raise ValueError("NumericRegion2D needs exactly two variables")
        super().__init__(var_names, A, b, box=box)


def instantiate(system: RegionSystem, values: dict, box=BOX):
    """Evaluate atoms and produce a numeric region (strict rows are closed)."""
    rows, bounds = [], []
    for iq in system.ineqs:
        rows.append([float(iq.lhs.get(v, F0)) for v in system.rate_vars])
        bounds.append(iq.rhs.evaluate(values))
    if len(system.rate_vars) == 2:
        return NumericRegion2D(np.array(rows).reshape(-1, 2), bounds,
                               var_names=tuple(system.rate_vars), box=box)
    return NumericRegion(system.rate_vars, rows, bounds, box=box)


def vertices_2d(region: NumericRegion2D, tol=VERTEX_TOL):
    """CCW-ordered vertices of a 2-D region, collinear points removed."""
    verts = region.vertices(tol=tol)
    center = verts.mean(axis=0)
    angles = np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0])
    verts = verts[np.argsort(angles, kind="stable")]
    if len(verts) > 2:
        keep = []
        n = len(verts)
        for i in range(n):
            a, bv, c = verts[i - 1], verts[i], verts[(i + 1) % n]
            cross = (bv[0] - a[0]) * (c[1] - a[1]) - (bv[1] - a[1]) * (c[0] - a[0])
            if abs(cross) > tol:
                keep.append(bv)
        if keep:
            verts = np.array(keep)
    return verts


@dataclass
class ContainsReport:
    contained: bool
    max_violation: float


def contains(outer, inner, tol=VERTEX_TOL) -> ContainsReport:
    """Is every vertex of `inner` feasible for `outer` (within tol)?"""
    pts = inner if isinstance(inner, np.ndarray) else inner.vertices()
    worst = float(np.max(outer.violation(pts)))
    return ContainsReport(worst <= tol, worst)


def _monotone_chain(points):
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) <= 2:
        return [np.array(p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [np.array(p) for p in lower[:-1] + upper[:-1]]


def convex_hull_union(items, box=BOX) -> NumericRegion2D:
    """Convex hull of regions and/or point clouds as a rate region.

    Rate-region semantics: the origin and the axis projections (x,0), (0,y) of
    every input point are always achievable, so they join the hull.
    """
    pts = [np.zeros(2)]
    for item in items:
        arr = vertices_2d(item) if isinstance(item, NumericRegion2D) \
            else np.atleast_2d(np.asarray(item, dtype=float))
        for p in arr:
            pts.append(p)
            pts.append(np.array([p[0], 0.0]))
            pts.append(np.array([0.0, p[1]]))
    hull = _monotone_chain(pts)
    if len(hull) == 1:
        return NumericRegion2D(np.eye(2), hull[0], box=box)
    if len(hull) == 2:
        (x0, y0), (x1, y1) = hull
        return NumericRegion2D(np.eye(2), [max(x0, x1), max(y0, y1)], box=box)
    A, b = [], []
    n = len(hull)
    for i in range(n):
        p, q = hull[i], hull[(i + 1) % n]
        e = q - p
        A.append([e[1], -e[0]])
        b.append(e[1] * p[0] - e[0] * p[1])
    return NumericRegion2D(np.array(A), np.array(b), box=box)


class RateCurve2D:
    """Pareto boundary of a two-user rate region, held as sampled points.

    ``points`` is an (n, 2) array sorted by R1 ascending with R2 strictly
    decreasing; every sample that some other sample dominates is dropped at
    construction.  With ``interp="staircase"`` the region is the union of the
    axis-aligned boxes below the points, i.e. exactly what the samples
    certify.  With ``interp="linear"`` consecutive points are joined by
    segments, which adds the time-sharing closure.

    ``meta`` optionally carries one record per surviving point (for example
    the scheme parameters that achieved it).
    """

    def __init__(self, points, interp="staircase", meta=None):
        if interp not in ("staircase", "linear"):
            raise ValueError("interp must be 'staircase' or 'linear'")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != 2:
            raise ValueError("points must be an (n, 2) array")
        self.points = pts
        self.interp = interp
        self.meta = list(meta) if meta is not None else None
        if self.meta is not None and len(self.meta) != len(pts):
            raise ValueError("meta must align with points")

    @classmethod
    def from_samples(cls, samples, meta=None, interp="staircase"):
        """Build the curve from raw (R1, R2) samples, keeping the Pareto set."""
        pts = np.atleast_2d(np.asarray(samples, dtype=float))
        if pts.size == 0:
            pts = np.zeros((1, 2))
        pts = np.maximum(pts, 0.0)
        order = np.lexsort((-pts[:, 1], -pts[:, 0]))  # R1 desc, then R2 desc
        keep, best_r2 = [], -np.inf
        for i in order:
            if pts[i, 1] > best_r2 + 1e-15:
                keep.append(i)
                best_r2 = pts[i, 1]
        keep = keep[::-1]  # back to R1 ascending
        kept_meta = None
        if meta is not None:
            meta = list(meta)
            if len(meta) != len(pts):
                raise ValueError("meta must align with samples")
            kept_meta = [meta[i] for i in keep]
        return cls(pts[keep], interp=interp, meta=kept_meta)

    @property
    def r1_max(self):
        return float(self.points[-1, 0])

    @property
    def r2_max(self):
        return float(self.points[0, 1])

    def r2_at(self, r1):
        """Largest R2 the region offers at first-user rate r1 (0 beyond it)."""
        r1 = np.asarray(r1, dtype=float)
        xs, ys = self.points[:, 0], self.points[:, 1]
        if self.interp == "linear":
            out = np.interp(r1, xs, ys, left=ys[0], right=0.0)
            out = np.where(r1 > xs[-1], 0.0, out)
        else:
            idx = np.searchsorted(xs, r1, side="left")
            padded = np.append(ys, 0.0)
            out = padded[np.clip(idx, 0, len(ys))]
        return out if out.ndim else float(out)

    def violation(self, pts):
        """Signed infeasibility of each query point (<= 0 means inside)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.interp == "linear":
            slack_r2 = pts[:, 1] - self.r2_at(pts[:, 0])
            slack_r1 = pts[:, 0] - self.r1_max
            return np.where(slack_r1 > 0.0,
                            np.maximum(slack_r2, slack_r1), slack_r2)
        # box-union region: inside iff some sample dominates the query
        diff1 = pts[:, :1] - self.points[None, :, 0]
        diff2 = pts[:, 1:] - self.points[None, :, 1]
        return np.min(np.maximum(diff1, diff2), axis=1)

    def contains_point(self, r1, r2, tol=1e-9):
        return bool(self.violation([[r1, r2]])[0] <= tol)

    def contains(self, other, tol=1e-9) -> ContainsReport:
        """Does this region contain the other curve's points (within tol)?"""
        pts = other.points if isinstance(other, RateCurve2D) else other
        worst = float(np.max(self.violation(pts)))
        return ContainsReport(worst <= tol, worst)

    def hull(self):
        """Time-sharing closure: the upper-concave hull as a linear curve."""
        anchors = [(0.0, 0.0), (self.r1_max, 0.0), (0.0, self.r2_max)]
        pool = np.vstack([self.points, np.array(anchors)])
        verts = np.array(_monotone_chain(pool))
        meta = None
        if self.meta is not None:
            lookup = {(float(p[0]), float(p[1])): m
                      for p, m in zip(self.points, self.meta)}
            meta = [lookup.get((float(v[0]), float(v[1]))) for v in verts]
        return RateCurve2D.from_samples(verts, meta=meta, interp="linear")


# ---------------------------------------------------------------------------
# consistent valuations and redundancy pruning


_ATOM_RE = re.compile(r"^(I|H)\((.+)\)$")


def parse_atom(name: str):
    """Parse 'I(A;B|C)' / 'H(A|C)' into (kind, groups...) of variable tuples."""
    m = _ATOM_RE.match(name.strip())
    if not m:
        raise ValueError(f"cannot parse atom {name!r}")
    kind, inner = m.groups()
    cond = ""
    if "|" in inner:
        inner, cond = inner.split("|", 1)
    groups = inner.split(";")
    if (kind == "I" and len(groups) != 2) or (kind == "H" and len(groups) != 1):
        raise ValueError(f"malformed atom {name!r}")

    def split(g):
        out = tuple(v.strip() for v in g.split(",") if v.strip())
        if not out:
            raise ValueError(f"empty variable group in {name!r}")
        return out

    parsed = tuple(split(g) for g in groups)
    return (kind,) + parsed + (tuple(
        v.strip() for v in cond.split(",") if v.strip()),)


def atom_variables(atoms):
    """All variable names appearing in the given atoms, in first-seen order."""
    names = []
    for a in atoms:
        for grp in parse_atom(a)[1:]:
            for v in grp:
                if v not in names:
                    names.append(v)
    return names


def atom_values(atoms, source_table, source_names, channels=None,
                input_var="X") -> dict:
    """Evaluate info atoms on a joint source pmf, with channel outputs.

    `source_table` is a joint pmf over `source_names`; any atom variable in
    `channels` is generated from `input_var` through the given channel matrix
    (conditionally independent of everything else given the input).
    """
    parsed = {a: parse_atom(a) for a in atoms}
    channels = channels or {}
    table = np.asarray(source_table, dtype=float)
    order = list(source_names)
    needed = [v for v in atom_variables(atoms) if v not in order]
    for v in needed:
        if v not in channels:
            raise KeyError(f"atom variable {v!r} is neither a source nor a channel output")
        W = channels[v].W if hasattr(channels[v], "W") \
            else np.asarray(channels[v], dtype=float)
        x_ax = order.index(input_var)
        moved = np.moveaxis(table, x_ax, -1)
        moved = moved[..., :, None] * W
        table = np.moveaxis(moved, -2, x_ax)
        order.append(v)
    values = {}
    for a, p in parsed.items():
        if p[0] == "I":
            _, ga, gb, cond = p
            values[a] = mi_groups(table, order, ga, gb, cond)
        else:
            _, ga, cond = p
            values[a] = mi_groups(table, order, ga, ga, cond)  # I(A;A|C) = H(A|C)
    return values


def sample_valuation(atoms, rng, channels=None, input_var="X",
                     alphabet=2) -> dict:
    """One random atom valuation consistent with Shannon identities.

    A joint pmf over all source variables is drawn (Dirichlet over the product
    alphabet); variables listed in `channels` are generated from `input_var`
    through the given channel matrices, so the valuation also respects that
    Markov structure.  Atoms must parse via `parse_atom`.
    """
    channels = channels or {}
    names = atom_variables(atoms)
    src = [v for v in names if v not in channels]
    if len(src) < len(names) and input_var not in src:
        src.append(input_var)
    table = rng.dirichlet(np.ones(alphabet ** len(src))).reshape(
        (alphabet,) * len(src))
    return atom_values(atoms, table, src, channels=channels,
                       input_var=input_var)


def prune_redundant(system: RegionSystem, valuations, tol=PRUNE_TOL):
    """Drop inequalities that are slack at every vertex of every valuation.

    Returns (pruned system, kept-row indices).
    """
    active = set()
    n = len(system.ineqs)
    for values in valuations:
        region = instantiate(system, values)
        try:
            verts = region.vertices()
        except EmptyRegionError:
            continue
        slack = region.b[:region.n_rows, None] - region.A[:region.n_rows] @ verts.T
        for i in range(n):
            if np.min(slack[i]) <= tol:
                active.add(i)
    kept = sorted(active)
    return RegionSystem(list(system.rate_vars),
                        [system.ineqs[i] for i in kept]), kept
