"""Local-symmetry classification of left-invariant metrics on 3-dimensional
simply connected Lie groups.

Two independent routes decide local symmetry of a metric Lie algebra:

* the polynomial residual systems in the Milnor constants, and
* the brute-force ``nabla R`` computation of :mod:`liesym.curvature`.

:func:`grid_verify` checks they agree. :func:`classify_halee` runs the
generic pipeline on the normal-form metrics and, when the metric is locally
symmetric, certifies it with an explicit basis change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import algebra as alg
from .algebra import MetricLieAlgebra, change_basis, transform_constants
from .curvature import TOL_SYM, is_locally_symmetric, nabla_R_residuals
from .errors import NotASolution, ParamOutOfRange
from .milnor import TOL_FRAME, milnor_frame

FAMILY_TOL = 1e-6


@dataclass(frozen=True)
class SymmetryResiduals:
    values: tuple
    constraint_ok: bool = True

    def max_abs(self):
        return max(abs(v) for v in self.values)

    def vanish(self, tol=TOL_SYM):
        return self.constraint_ok and self.max_abs() <= tol


@dataclass(frozen=True)
class FamilyTag:
    name: str
    pattern: str

    def __str__(self):
        return f"{self.name}{self.pattern}"


def unimodular_residuals(a, b, c) -> SymmetryResiduals:
    return SymmetryResiduals((
        (a - b) * (a + b - c) ** 2,
        (c - a) * (a - b + c) ** 2,
        (c - b) * (a - b - c) ** 2,
    ))


def nonunimodular_residuals(a, b, c, d) -> SymmetryResiduals:
    """Five local-symmetry polynomials followed by the Milnor constraint ``ac + bd``."""
    return SymmetryResiduals((
        (b - c) * (a**2 + b**2 - c**2 - d**2),
        (b + c) * (a**2 + b**2 - a * d + b * c),
        d * (a**2 + b**2 - a * d + b * c) ** 2,
        a * (c**2 + d**2 - a * d + c * b),
        (b + c) * (c**2 + d**2 - a * d + b * c),
        a * c + b * d,
    ), constraint_ok=(a + d) != 0)


def residuals(constants) -> SymmetryResiduals:
    if len(constants) == 3:
        return unimodular_residuals(*constants)
    return nonunimodular_residuals(*constants)


def _close(x, y, zero):
    return abs(x - y) <= zero


def solution_family(constants, tol=TOL_SYM) -> FamilyTag:
    res = residuals(constants)
    if not res.vanish(tol):
        raise NotASolution(f"residuals {res.values} exceed {tol:g}")
    zero = FAMILY_TOL * max(1.0, max(abs(x) for x in constants))
    if len(constants) == 3:
        a, b, c = constants
        z = [abs(x) <= zero for x in constants]
        if all(z):
            return FamilyTag("Flat", "(0,0,0)")
        if _close(a, b, zero) and _close(b, c, zero):
            return FamilyTag("RoundSU2", "(a,a,a)")
        if z[0] and _close(b, c, zero):
            return FamilyTag("Flat", "(0,b,b)")
        if z[2] and _close(a, b, zero):
            return FamilyTag("Flat", "(a,a,0)")
        if z[1] and _close(a, c, zero):
            return FamilyTag("Flat", "(a,0,a)")
    else:
        a, b, c, d = constants
        if _close(a, d, zero) and _close(b, -c, zero):
            if abs(b) <= zero:
                return FamilyTag("GIfamily", "(a,0,0,a)")
            return FamilyTag("GDfamily", "(a,b,-b,a)")
        if abs(b) <= zero and abs(c) <= zero:
            if abs(d) <= zero:
                return FamilyTag("G0family", "(a,0,0,0)")
            if abs(a) <= zero:
                return FamilyTag("G0family", "(0,0,0,d)")
    raise NotASolution(f"residuals vanish but {tuple(constants)} matches no known family")


def in_solution_set(constants, tol=TOL_SYM):
    try:
        solution_family(constants, tol)
    except NotASolution:
        return False
    return True


# -- normal-form metrics --------------------------------------------------------

GROUPS = ("R3", "E0tilde2", "SU2", "GI", "G0", "GD")


@dataclass(frozen=True)
class HaLeeMetric:
    """A representative metric (up to automorphism) on one of the groups.

    ``params`` keys: ``mu``, ``nu``, ``lam``, ``D`` and, for ``G0``,
    ``form`` in {"A1", "A2"}.
    """

    group: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ParamOutOfRange(f"unknown group {self.group!r}")
        p = self.params
        need = {
            "R3": (),
            "E0tilde2": ("mu", "nu"),
            "SU2": ("lam", "mu", "nu"),
            "GI": ("nu",),
            "G0": ("nu",),
            "GD": ("D", "mu", "nu"),
        }[self.group]
        missing = [k for k in need if p.get(k) is None]
        if self.group == "G0" and p.get("form", "A1") == "A1" and p.get("mu") is None:
            missing.append("mu")
        if missing:
            raise ParamOutOfRange(f"{self.group} needs parameters {missing}")
        if any(isinstance(v, float) and not math.isfinite(v) for v in p.values()):
            raise ParamOutOfRange("parameters must be finite")
        nu = p.get("nu")
        if nu is not None and not nu > 0:
            raise ParamOutOfRange(f"nu must be > 0, got {nu}")
        if self.group == "E0tilde2" and not 0 < p["mu"] <= 1:
            raise ParamOutOfRange(f"E0tilde2 needs 0 < mu <= 1, got {p['mu']}")
        if self.group == "SU2" and not p["lam"] >= p["mu"] >= p["nu"] > 0:
            raise ParamOutOfRange("SU2 needs lam >= mu >= nu > 0")
        if self.group == "G0":
            form = p.get("form", "A1")
            if form not in ("A1", "A2"):
                raise ParamOutOfRange(f"G0 form must be A1 or A2, got {form!r}")
            if form == "A1" and not p["mu"] > 0:
                raise ParamOutOfRange(f"G0 (A1) needs mu > 0, got {p['mu']}")
        if self.group == "GD":
            if not p["D"] > 1:
                raise ParamOutOfRange(f"GD normal form needs D > 1, got {p['D']}")
            if not 1 < p["mu"] <= p["D"]:
                raise ParamOutOfRange(f"GD needs 1 < mu <= D, got mu={p['mu']}")

    def structure(self):
        if self.group == "G0":
            return alg.g_D(0.0)
        if self.group == "GD":
            return alg.g_D(float(self.params["D"]))
        return alg.named(self.group)

    def matrix(self):
        p = self.params
        if self.group == "R3":
            return np.eye(3)
        if self.group == "E0tilde2":
            return np.diag([1.0, p["mu"], p["nu"]])
        if self.group == "SU2":
            return np.diag([p["lam"], p["mu"], p["nu"]])
        if self.group == "GI":
            return np.diag([1.0, 1.0, p["nu"]])
        if self.group == "G0":
            if p.get("form", "A1") == "A2":
                return np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, p["nu"]]])
            return np.diag([1.0, p["mu"], p["nu"]])
        return np.array([[1.0, 1.0, 0.0], [1.0, p["mu"], 0.0], [0.0, 0.0, p["nu"]]])

    def algebra(self):
        return MetricLieAlgebra.build(self.structure(), self.matrix())


# -- frame-existence systems as printed, for certificate checking ---------------

def _entries(P):
    return {f"a{i + 1}{j + 1}": float(P[i, j]) for i in range(3) for j in range(3)}


def printed_system(group, P, a, b=0.0, params=None):
    """Residuals of the frame-existence polynomial system exactly as printed.

    Several printed equations carry typos (a repeated bracket term, a missing
    ``-1``); :func:`printed_witness_report` exposes which ones fail.
    """
    p = dict(params or {})
    e = _entries(P)
    a11, a12, a13 = e["a11"], e["a12"], e["a13"]
    a21, a22, a23 = e["a21"], e["a22"], e["a23"]
    a31, a32, a33 = e["a31"], e["a32"], e["a33"]
    mu, nu, lam, D = p.get("mu", 1.0), p.get("nu", 1.0), p.get("lam", 1.0), p.get("D", 0.0)

    def diag_metric(l1, m1, n1):
        return [
            a11**2 * l1 + a21**2 * m1 + a31**2 * n1 - 1,
            a11 * l1 * a12 + a21 * m1 * a22 + a31 * n1 * a32,
            a11 * l1 * a13 + a21 * m1 * a23 + a31 * n1 * a33,
            a12**2 * l1 + a22**2 * m1 + a32**2 * n1 - 1,
            a12 * l1 * a13 + a22 * m1 * a23 + a32 * n1 * a33,
            a13**2 * l1 + a23**2 * m1 + a33**2 * n1 - 1,
        ]

    if group == "E0tilde2":
        return [
            a * a13 - (a31 * a22 - a21 * a32),
            a * a23 + a31 * a12 - a11 * a32,
            a * a33,
            a32 * a23 - a22 * a33,
            a32 * a13 - a12 * a33,
            a * a12 - (a33 * a21 - a23 * a31),
            a * a22 + a33 * a11 - a31 * a13,
            a * a32,
        ] + diag_metric(1.0, mu, nu)
    if group == "SU2":
        return [
            a * a13 + a31 * a22 - a21 * a32,
            a * a23 - (a31 * a12 - a11 * a32),
            a * a33 - (a11 * a22 - a21 * a12),
            a * a11 + a32 * a23 - a22 * a33,
            a * a21 - (a32 * a13 - a12 * a33),
            a * a31 - (a12 * a23 - a22 * a13),
            a * a12 + a33 * a21 - a23 * a31,
            a * a22 - (a33 * a11 - a13 * a31),
            a * a32 - (a13 * a21 - a23 * a11),
        ] + diag_metric(lam, mu, nu)
    if group == "GI":
        return [
            a * a12 - (a31 * a12 - a11 * a32),
            a * a22 - (a31 * a22 - a21 * a32),
            a * a32,
            a * a13 - (a31 * a12 - a11 * a32),
            a * a23 - (a31 * a23 - a21 * a33),
            a * a33,
            a11**2 + a21**2 + a31**2 * nu - 1,
            a11 * a12 + a22 * a21 + a31 * nu * a32,
            a11 * a13 + a21 * a23 + a31 * nu * a33,
            a12**2 + a22**2 + a32**2 * nu,
            a12 * a13 + a22 * a23 + a32 * nu * a33,
            a13**2 + a23**2 + a33**2 * nu,
        ]
    if group == "G0":
        brackets = [
            a * a12,
            a * a22 - (a31 * a12 - a11 * a32 + 2 * (a31 * a22 - a21 * a32)),
            a * a32,
            a31 * a13 - a11 * a33 + 2 * (a31 * a23 - a21 * a33),
            a32 * a23 - a22 * a33,
        ]
        if p.get("form", "A1") == "A1":
            metric = diag_metric(1.0, mu, nu)
            metric[5] += 1.0  # printed without the -1
            return brackets + metric
        h = 0.5
        return brackets + [
            (a11 + h * a21) * a11 + (h * a11 + a21) * a21 + a31**2 * nu - 1,
            (a11 + h * a21) * a12 + (h * a11 + a21) * a22 + a31 * nu * a32,
            (a11 + h * a21) * a13 + (h * a11 + a21) * a23 + a31 * nu * a33,
            (a12 + h * a22) * a12 + (h * a12 + a22) * a22 + a32**2 * nu - 1,
            (a12 + h * a22) * a13 + (h * a12 + a22) * a23 + a32 * nu * a33,
            (a13 + h * a23) * a13 + (h * a13 + a23) * a23 + a33**2 * nu - 1,
        ]
    if group == "GD":
        return [
            a * a12 + b * a13 + D * (a31 * a22 - a21 * a32),
            a * a22 + b * a23 - (a31 * a12 - a11 * a32 + 2 * (a31 * a22 - a21 * a32)),
            a * a32 + b * a33,
            a * a13 - b * a12 + D * (a31 * a23 - a21 * a33),
            a * a23 - b * a22 - (a31 * a13 - a11 * a33 + 2 * (a31 * a23 - a21 * a33)),
            a * a33 - b * a32,
            a32 * a23 - a22 * a33,
            a32 * a13 - a12 * a33 + 2 * (a32 * a23 - a22 * a33),
            (a11 + a21) * a11 + (a11 + a21 * mu) * a21 + a31**2 * nu - 1,
            (a11 + a21) * a12 + (a11 + a21 * mu) * a22 + a31 * nu * a32,
            (a11 + a21) * a13 + (a11 + a21 * mu) * a23 + a31 * nu * a33,
            (a12 + a22) * a12 + (a12 + a22 * mu) * a22 + a32**2 * nu - 1,
            (a12 + a22) * a13 + (a12 + a22 * mu) * a23 + a32 * nu * a33,
            (a13 + a23) * a13 + (a13 + a23 * mu) * a23 + a33**2 * nu - 1,
        ]
    raise ValueError(f"no printed system for group {group!r}")


def printed_witness(group, params):
    """The basis change offered in print for a locally symmetric normal form,
    or ``None`` where none is given."""
    nu = params.get("nu", 1.0)
    r = 1.0 / math.sqrt(nu)
    if group == "E0tilde2":
        a13, a23 = 1.0, 0.0
        return np.array([[0.0, -a23, a13], [0.0, a13, a23], [r, 0.0, 0.0]])
    if group == "SU2":
        return np.diag([1.0, -1.0, -1.0]) / math.sqrt(params["lam"])
    if group == "GI":
        a22 = 1.0
        return np.array([[0.0, 1.0, 1.0], [0.0, a22, 0.0], [r, 0.0, 0.0]])
    if group == "G0" and params.get("form", "A1") == "A2":
        s3 = math.sqrt(3.0)
        return np.array([[0.0, 0.0, -2.0 / s3], [0.0, 1.0, 1.0 / s3], [r, 0.0, 0.0]])
    if group == "GD":
        q = 1.0 / math.sqrt(params["D"] - 1.0)
        return np.array([[0.0, 1.0, -q], [0.0, 0.0, q], [r, 0.0, 0.0]])
    return None


def corrected_witness(group, params):
    """Orthonormal replacement where the printed matrix is not orthonormal."""
    if group == "GI":
        r = 1.0 / math.sqrt(params["nu"])
        return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [r, 0.0, 0.0]])
    if group == "R3":
        return np.eye(3)
    return None


def frame_constants(c, P, unimodular):
    cm = transform_constants(c, P)
    if unimodular:
        consts = (cm[0, 1, 2], cm[2, 0, 1], cm[1, 2, 0])
        keep = [(0, 1, 2), (1, 0, 2), (1, 2, 0), (2, 1, 0), (2, 0, 1), (0, 2, 1)]
    else:
        consts = (cm[0, 1, 1], cm[0, 1, 2], cm[0, 2, 1], cm[0, 2, 2])
        keep = [t for j in (1, 2) for k in (1, 2) for t in ((0, j, k), (j, 0, k))]
    mask = np.ones((3, 3, 3), dtype=bool)
    for idx in keep:
        mask[idx] = False
    defect = float(np.max(np.abs(cm[mask]), initial=0.0))
    return tuple(float(x) for x in consts), defect


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    orthonormality_defect: float
    canonical_defect: float
    constants: tuple
    family: Optional[FamilyTag]


def check_witness(mla, P, unimodular, tol=TOL_FRAME):
    P = np.asarray(P, dtype=float)
    gram = P.T @ mla.g.g @ P
    ortho = float(np.max(np.abs(gram - np.eye(3))))
    consts, defect = frame_constants(mla.st.c, P, unimodular)
    scale = max(1.0, max(abs(x) for x in consts))
    try:
        fam = solution_family(consts, tol=TOL_SYM * scale**3)
    except NotASolution:
        fam = None
    ok = ortho <= tol and defect <= tol * scale and fam is not None
    return WitnessCheck(ok, ortho, defect, consts, fam)


def _printed_system_at(group, params, mla, P, unimodular):
    consts, _ = frame_constants(mla.st.c, P, unimodular)
    a, b = consts[0], (0.0 if unimodular else consts[1])
    vals = printed_system(group, P, a, b, params)
    return [i + 1 for i, v in enumerate(vals) if abs(v) > TOL_FRAME]


def printed_witness_report(params_by_group=None):
    """For each group with a printed witness: the printed equations it fails."""
    defaults = {
        "E0tilde2": {"mu": 1.0, "nu": 2.0},
        "SU2": {"lam": 2.0, "mu": 2.0, "nu": 2.0},
        "GI": {"nu": 2.0},
        "G0": {"form": "A2", "nu": 2.0},
        "GD": {"D": 3.0, "mu": 3.0, "nu": 2.0},
    }
    defaults.update(params_by_group or {})
    out = {}
    for group, params in defaults.items():
        hl = HaLeeMetric(group, params)
        mla = hl.algebra()
        P = printed_witness(group, params)
        uni = group in ("E0tilde2", "SU2")
        chk = check_witness(mla, P, uni)
        out[group] = {
            "params": params,
            "witness_valid": chk.ok,
            "orthonormality_defect": chk.orthonormality_defect,
            "failed_equations": _printed_system_at(group, params, mla, P, uni),
        }
    return out


# -- verdicts ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClassificationVerdict:
    group: str
    params: dict
    locally_symmetric: bool
    milnor_constants: tuple
    nabla_r_residual: float
    residuals: SymmetryResiduals
    family: Optional[FamilyTag] = None
    witness_P: Optional[np.ndarray] = None
    witness_source: Optional[str] = None
    printed_failures: tuple = ()

    def record(self):
        rec = {
            "group": self.group,
            "params": self.params,
            "locally_symmetric": self.locally_symmetric,
            "residual": self.nabla_r_residual,
            "milnor_constants": list(self.milnor_constants),
            "family": str(self.family) if self.family else None,
        }
        if self.witness_P is not None:
            rec["witness_P"] = self.witness_P.tolist()
            rec["witness_source"] = self.witness_source
        return rec


def classify_algebra(mla, tol=TOL_SYM, group="custom", params=None):
    """Generic path for any metric Lie algebra: Milnor frame, residual
    polynomials and ``nabla R``."""
    frame = milnor_frame(mla)
    sym, resid = is_locally_symmetric(mla, tol)
    res = residuals(frame.constants)
    fam = None
    if sym:
        try:
            fam = solution_family(frame.constants, tol=max(tol, TOL_SYM))
        except NotASolution:
            fam = None
    return ClassificationVerdict(
        group=group, params=dict(params or {}), locally_symmetric=sym,
        milnor_constants=frame.constants, nabla_r_residual=resid, residuals=res,
        family=fam,
        witness_P=frame.P if sym else None,
        witness_source="frame" if sym else None,
    )


def classify_halee(metric: HaLeeMetric, tol=TOL_SYM) -> ClassificationVerdict:
    mla = metric.algebra()
    v = classify_algebra(mla, tol, metric.group, metric.params)
    if not v.locally_symmetric:
        return v
    uni = metric.group in ("R3", "E0tilde2", "SU2")
    for source, P in (("printed", printed_witness(metric.group, metric.params)),
                      ("corrected", corrected_witness(metric.group, metric.params))):
        if P is None:
            continue
        chk = check_witness(mla, P, uni)
        if chk.ok:
            failures = ()
            if metric.group != "R3":
                failures = tuple(_printed_system_at(metric.group, metric.params, mla, P, uni))
            return ClassificationVerdict(
                group=v.group, params=v.params, locally_symmetric=True,
                milnor_constants=v.milnor_constants, nabla_r_residual=v.nabla_r_residual,
                residuals=v.residuals, family=chk.family, witness_P=P,
                witness_source=source, printed_failures=failures,
            )
    return v


# -- grid oracles -------------------------------------------------------------------

def unimodular_grid(step=0.5, stop=3.0):
    vals = np.arange(0.0, stop + 0.5 * step, step)
    return np.array(np.meshgrid(vals, vals, vals, indexing="ij")).reshape(3, -1).T


def normalise_nonunimodular(a, b, c, d):
    """Apply a >= d, b >= c by swapping / reflecting the abelian ideal basis."""
    if a < d:
        a, b, c, d = d, c, b, a
    if b < c:
        b, c = -b, -c
    return a, b, c, d


def nonunimodular_samples(n=200, seed=42, values=None, slopes=None):
    """Admissible Milnor tuples ``(a, s a, -s d, d)``, so ``ac + bd = 0`` exactly.

    Coordinates are drawn from a coarse lattice so the measure-zero solution
    families are hit with positive probability.
    """
    rng = np.random.default_rng(seed)
    values = np.arange(0.0, 3.01, 0.5) if values is None else np.asarray(values)
    slopes = np.array([-1.0, -0.5, 0.0, 0.5, 1.0, 2.0]) if slopes is None else np.asarray(slopes)
    out = []
    while len(out) < n:
        a, d = rng.choice(values, 2)
        if a + d <= 0:
            continue
        s = rng.choice(slopes)
        out.append(normalise_nonunimodular(a, s * a, -s * d, d))
    return np.array(out, dtype=float)


def _frame_tensors(points):
    if points.shape[1] == 3:
        build = alg.unimodular_milnor
    else:
        build = alg.nonunimodular_milnor
    return np.stack([build(*p).c for p in points])


@dataclass
class GridReport:
    kind: str
    npoints: int
    nsymmetric: int
    counterexamples: list
    max_residual_on_set: float
    min_residual_off_set: float


def grid_verify(kind, points=None, tol=TOL_SYM, seed=42):
    """Check ``(polynomial residuals vanish) <=> (max |nabla R| <= tol)`` pointwise."""
    if points is None:
        points = unimodular_grid() if kind == "Unimodular" else nonunimodular_samples(seed=seed)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    nabla = nabla_R_residuals(_frame_tensors(points))
    on, off, bad = [], [], []
    for p, nr in zip(points, nabla):
        poly = residuals(tuple(p)).vanish(tol)
        geo = bool(nr <= tol)
        (on if poly else off).append(float(nr))
        if poly != geo:
            bad.append({"constants": [float(x) for x in p], "polynomial": poly, "nabla_r": float(nr)})
    return GridReport(
        kind=kind, npoints=len(points), nsymmetric=len(on), counterexamples=bad,
        max_residual_on_set=max(on, default=0.0), min_residual_off_set=min(off, default=math.inf),
    )


def invariance_under_basis_change(mla, rng, n=50, cond_max=1e3):
    """Count disagreements of the local-symmetry verdict under ``n`` random basis changes."""
    ref, _ = is_locally_symmetric(mla)
    mismatches = 0
    for P in random_basis_changes(rng, n, cond_max):
        sym, _ = is_locally_symmetric(change_basis(mla, P))
        mismatches += sym != ref
    return mismatches


def random_basis_changes(rng, n, cond_max=1e3):
    out = []
    while len(out) < n:
        P = rng.normal(size=(3, 3))
        if np.linalg.cond(P) < cond_max:
            out.append(P)
    return out
