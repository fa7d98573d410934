"""Command-line front end: ``geokern <transform|verify-kernel|identities|decompose>``.

Every command writes a table (CSV with a ``# meta:`` JSON header, or JSON)
and exits with 0 when all rows pass, 1 when any row fails, 2 on a
configuration error and 3 when a quadrature or difference scheme does not
converge. Output depends only on the configuration and ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from geokern import __version__
from geokern import transforms as tr
from geokern.errors import ConvergenceError, DomainError
from geokern.fracint import (
    OperatorParams,
    Profile,
    Side,
    compose_identity_residual,
    gc_report,
    mellin_numeric,
    mellin_symbol,
    reconstruct_psi,
    reflect,
)
from geokern.harmonics import Kind, Orientation, SeparableFunction, SphericalHarmonic
from geokern.nullspace import (
    KernelElement,
    Transform,
    annihilation_closures,
    bump,
    kernel_basis,
    kernel_decompose,
    project_to_moment_space,
    verify_annihilation,
)
from geokern.quadrature import QuadratureSpec

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

# transform command kinds and the null-space family each belongs to
KINDS = {
    "radon": Transform.RADON_EXTERIOR,
    "dual_radon": Transform.DUAL_INTERIOR,
    "cormack_quinto": Transform.CORMACK_QUINTO,
    "funk": Transform.FUNK,
    "slice": Transform.SLICE,
    "hyperbolic": Transform.HYPERBOLIC,
    "gc_right": Transform.GC_RIGHT,
    "gc_left": Transform.GC_LEFT,
}
_MASS_KIND = {
    Transform.RADON_EXTERIOR: "radon",
    Transform.DUAL_INTERIOR: "dual_radon",
    Transform.CORMACK_QUINTO: "cormack_quinto",
    Transform.FUNK: "funk",
    Transform.SLICE: "slice",
    Transform.HYPERBOLIC: "hyperbolic",
}
_SPHERE = {Transform.FUNK, Transform.SLICE}
_OPERATOR = {Transform.GC_RIGHT, Transform.GC_LEFT}

# the governing result for each family, reported with every sweep row
CITATION = {
    Transform.RADON_EXTERIOR: "kernel of the exterior Radon transform (powers r^(2j-m-n))",
    Transform.DUAL_INTERIOR: "kernel of the dual Radon transform inside a ball (powers t^(m-2j))",
    Transform.CORMACK_QUINTO: "kernel of the spherical mean over spheres through the origin",
    Transform.FUNK: "kernel of the Funk transform on the punctured sphere",
    Transform.SLICE: "kernel of the spherical slice transform through the pole",
    Transform.HYPERBOLIC: "kernel of the totally geodesic transform on the hyperboloid",
    Transform.GC_RIGHT: "kernel of the right-sided Gegenbauer-Chebyshev integral",
    Transform.GC_LEFT: "kernel of the left-sided Gegenbauer-Chebyshev integral",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated parameters of one command."""

    command: str
    kind: str = "radon"
    n: int = 2
    m: int = 0
    mu: int = 1
    lam: float | None = None
    region: float = 1.0
    profile: str = "gauss"
    grid: str = ""
    m_range: str = ""
    points: int = 20
    path: str = "fast"
    probe: bool = False
    check: str = "all"
    input: str = ""
    tol: float = 1e-6
    seed: int = 0
    format: str = "csv"
    out: str = ""
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.n < 2:
            raise ConfigError(f"n must be at least 2, got {self.n}")
        if self.m < 0:
            raise ConfigError(f"m must be non-negative, got {self.m}")
        if self.lam is not None and not self.lam >= 0:
            raise ConfigError(f"lambda must be non-negative, got {self.lam}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.points < 1:
            raise ConfigError("points must be positive")
        if not self.region > 0:
            raise ConfigError("region radius must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.command in ("transform", "verify-kernel", "decompose"):
            if self.kind not in KINDS and self.kind not in {t.value for t in Transform}:
                raise ConfigError(f"unknown kind {self.kind!r}")
            if self.family in _OPERATOR and self.lam is None:
                raise ConfigError("operator kinds need --lam")
            if self.family not in _OPERATOR and self.n > 3 and self.command != "decompose":
                raise ConfigError("geometric transforms are implemented for n in {2, 3}")
        if self.path not in ("fast", "direct"):
            raise ConfigError(f"path must be fast or direct, got {self.path!r}")

    @property
    def family(self) -> Transform:
        return KINDS[self.kind] if self.kind in KINDS else Transform(self.kind)

    def meta(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d.pop("out")  # where a table is written is not part of what it reports
        d["version"] = __version__
        return d


# ------------------------------------------------------------------- parsing


def parse_grid(spec: str, default: str) -> tuple[str, np.ndarray]:
    """``name:lo:hi:N`` -> (name, N equispaced points)."""
    parts = (spec or default).split(":")
    if len(parts) != 4:
        raise ConfigError(f"grid must look like name:lo:hi:N, got {spec!r}")
    name, lo, hi, num = parts
    try:
        lo_f, hi_f, k = float(lo), float(hi), int(num)
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from None
    if k < 1 or not hi_f >= lo_f:
        raise ConfigError(f"bad grid {spec!r}")
    return name, np.linspace(lo_f, hi_f, k)


def parse_range(spec: str, default: tuple[int, int]) -> list[int]:
    if not spec:
        return list(range(default[0], default[1] + 1))
    try:
        if ":" in spec:
            lo, hi = (int(p) for p in spec.split(":"))
            return list(range(lo, hi + 1))
        return [int(p) for p in spec.split(",")]
    except ValueError:
        raise ConfigError(f"bad range {spec!r}; use lo:hi or a,b,c") from None


@dataclass(frozen=True)
class Atom:
    """One term of a profile expression."""

    name: str  # gauss, exp, power, kernel
    coef: float = 1.0
    power: float = 0.0
    j: int = 0


def parse_profile(expr: str) -> list[Atom]:
    """``gauss | exp | power:p | kernel:j=J | sum:TERM,TERM,...`` with optional ``c*`` prefixes."""
    expr = expr.strip()
    terms = expr[4:].split(",") if expr.startswith("sum:") else [expr]
    atoms = []
    for term in terms:
        term = term.strip()
        coef = 1.0
        if "*" in term:
            c, term = term.split("*", 1)
            try:
                coef = float(c)
            except ValueError:
                raise ConfigError(f"bad coefficient {c!r}") from None
        head, _, arg = term.partition(":")
        try:
            if head in ("gauss", "exp") and not arg:
                atoms.append(Atom(head, coef))
            elif head == "power":
                atoms.append(Atom("power", coef, power=float(arg)))
            elif head == "kernel" and arg.startswith("j="):
                atoms.append(Atom("kernel", coef, j=int(arg[2:])))
            else:
                raise ValueError
        except ValueError:
            raise ConfigError(f"unknown profile term {term!r}") from None
    if not atoms:
        raise ConfigError("empty profile")
    return atoms


# ------------------------------------------------------------ input building


def _harmonic(n: int, m: int, mu: int) -> SphericalHarmonic:
    return SphericalHarmonic(n, m, mu) if n <= 3 else SphericalHarmonic(n, m, kind=Kind.ZONAL)


def _radial_atom(atom: Atom, family: Transform, n: int, m: int, lam) -> Profile:
    if atom.name == "gauss":
        return Profile(lambda t: np.exp(-t * t), infinity_exponent=math.inf, name="gauss")
    if atom.name == "exp":
        return Profile(lambda t: np.exp(-t), infinity_exponent=math.inf, name="exp")
    if atom.name == "power":
        return Profile.power(atom.power)
    el = _element(family, n, m, atom.j, lam)
    if family is Transform.HYPERBOLIC:
        return el.function(_harmonic(n, m, 1)).profile
    return el.profile()


def _element(family, n, m, j, lam) -> KernelElement:
    basis = kernel_basis(family, n, m, lam)
    if not 1 <= j <= len(basis):
        raise ConfigError(f"kernel index j={j} outside 1..{len(basis)} for m={m}")
    return basis.elements[j - 1]


def _sum_profiles(parts: list[tuple[float, Profile]]) -> Profile:
    if len(parts) == 1 and parts[0][0] == 1.0:
        return parts[0][1]
    funcs = [(c, p.func) for c, p in parts]
    return Profile(
        lambda t: sum(c * f(t) for c, f in funcs),
        zero_exponent=min(p.zero_exponent for _, p in parts),
        infinity_exponent=min(p.decay for _, p in parts),
        name="+".join(p.name for _, p in parts),
    )


def build_input(cfg: RunConfig):
    """The object the chosen transform consumes, built from the profile expression."""
    family, n, m = cfg.family, cfg.n, cfg.m
    atoms = parse_profile(cfg.profile)
    if family in _SPHERE:
        Y = _harmonic(n, m, cfg.mu)
        funcs, pole, far = [], [], []
        for a in atoms:
            if a.name == "kernel":
                sf = _element(family, n, m, a.j, cfg.lam).function(Y)
                funcs.append((a.coef, sf.profile))
                pole.append(sf.pole_exponent)
                far.append(sf.far_exponent)
            else:
                p = _radial_atom(a, family, n, m, cfg.lam)
                funcs.append((a.coef, p.func))
                pole.append(p.zero_exponent)
                far.append(0.0)
        return tr.SphereFunction(
            lambda s: sum(c * f(s) for c, f in funcs),
            Y,
            pole_exponent=min(pole),
            far_exponent=min(far),
            even=family is Transform.FUNK,
        )
    prof = _sum_profiles([(a.coef, _radial_atom(a, family, n, m, cfg.lam)) for a in atoms])
    if family in _OPERATOR:
        return prof
    Y = _harmonic(n, m, cfg.mu)
    if family is Transform.HYPERBOLIC:
        return tr.HyperbolicFunction(prof, Y)
    orient = Orientation.CYLINDER if family is Transform.DUAL_INTERIOR else Orientation.SPACE
    return SeparableFunction(prof, Y, orient)


def _random_unit(rng, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


_DEFAULT_GRID = {
    Transform.RADON_EXTERIOR: "t:0.5:3:20",
    Transform.DUAL_INTERIOR: "r:0.2:2:20",
    Transform.CORMACK_QUINTO: "r:0.2:2:20",
    Transform.FUNK: "angle:0.2:1.2:20",
    Transform.SLICE: "psi:0.2:1.5:20",
    Transform.HYPERBOLIC: "h:0.2:3:20",
    Transform.GC_RIGHT: "t:0.5:3:20",
    Transform.GC_LEFT: "t:0.5:3:20",
}


def geometry(family: Transform, n: int, x: float, direction: np.ndarray):
    """The geometric argument at abscissa ``x`` for a fixed random direction."""
    if family is Transform.RADON_EXTERIOR:
        return tr.Hyperplane(tuple(direction), x)
    if family in (Transform.DUAL_INTERIOR, Transform.CORMACK_QUINTO):
        return x * direction
    if family is Transform.FUNK:
        # angle from the pole; the great sphere orthogonal to it
        return np.append(math.sin(x) * direction, math.cos(x))
    if family is Transform.SLICE:
        return (direction, x)
    if family is Transform.HYPERBOLIC:
        return tr.HyperbolicPoint.normal(x, direction)
    return x


def _fast(family, f, point, spec):
    if family is Transform.RADON_EXTERIOR:
        return tr.radon(f, point, tr.Path.FAST, spec)
    if family is Transform.DUAL_INTERIOR:
        return tr.dual_radon(f, point, tr.Path.FAST, spec)
    if family is Transform.CORMACK_QUINTO:
        return tr.cormack_quinto(f, point, tr.Path.FAST, spec)
    if family is Transform.FUNK:
        return tr.funk(f, point, tr.Path.FAST, spec)
    if family is Transform.SLICE:
        return tr.slice_transform(f, point[0], point[1], tr.Path.FAST, spec)
    return None


def _direct(family, f, point, spec):
    if family is Transform.RADON_EXTERIOR:
        return tr.radon(f, point, tr.Path.DIRECT, spec)
    if family is Transform.DUAL_INTERIOR:
        return tr.dual_radon(f, point, tr.Path.DIRECT, spec)
    if family is Transform.CORMACK_QUINTO:
        return tr.cormack_quinto(f, point, tr.Path.DIRECT, spec)
    if family is Transform.FUNK:
        return tr.funk(f, point, tr.Path.DIRECT, spec)
    if family is Transform.SLICE:
        return tr.slice_transform(f, point[0], point[1], tr.Path.DIRECT, spec)
    return tr.hyperbolic_geodesic(f, point, spec)


def _mass(family, f, point, cfg) -> float:
    if family in _OPERATOR:
        side = Side.RIGHT if family is Transform.GC_RIGHT else Side.LEFT
        return float(gc_report(OperatorParams(cfg.lam, cfg.m, side), f, point).magnitude)
    if family is Transform.SLICE:
        return tr.unsigned_mass("slice", f, point[0], point[1])
    return tr.unsigned_mass(_MASS_KIND[family], f, point)


# ------------------------------------------------------------------ commands


def cmd_transform(cfg: RunConfig):
    family = cfg.family
    f = build_input(cfg)
    name, grid = parse_grid(cfg.grid, _DEFAULT_GRID[family])
    rng = np.random.default_rng(cfg.seed)
    direction = _random_unit(rng, cfg.n)
    kernel_only = all(a.name == "kernel" for a in parse_profile(cfg.profile))
    spec = QuadratureSpec()
    rows = []
    for x in grid:
        point = geometry(family, cfg.n, float(x), direction)
        if family in _OPERATOR:
            side = Side.RIGHT if family is Transform.GC_RIGHT else Side.LEFT
            fast, oracle = float(gc_report(OperatorParams(cfg.lam, cfg.m, side), f, float(x)).value), None
        else:
            fast = _fast(family, f, point, spec)
            oracle = _direct(family, f, point, spec)
        mass = _mass(family, f, point if family not in _OPERATOR else float(x), cfg)
        value = fast if fast is not None else oracle
        diff = None if fast is None or oracle is None else abs(fast - oracle)
        rel = None if diff is None else diff / max(abs(oracle), mass, 1e-300)
        residual = abs(value) / max(mass, 1e-300)
        ok = (rel is None or rel <= cfg.tol) and (not kernel_only or residual <= cfg.tol)
        rows.append(
            {
                name: float(x),
                "fast": fast,
                "oracle": oracle,
                "abs_diff": diff,
                "rel_diff": rel,
                "mass": mass,
                "residual": residual,
                "status": "PASS" if ok else "FAIL",
            }
        )
    cfg.extra["direction"] = [float(v) for v in direction]
    return rows


def _sweep_points(family, n, k, rng, region):
    pts = []
    if family is Transform.RADON_EXTERIOR:
        for _ in range(k):
            pts.append(tr.Hyperplane(tuple(_random_unit(rng, n)), float(rng.choice([-1.0, 1.0]) * rng.uniform(1.2, 3.0) * region)))
    elif family in (Transform.DUAL_INTERIOR, Transform.CORMACK_QUINTO):
        pts = [_random_unit(rng, n) * rng.uniform(0.3, 2.0) * region for _ in range(k)]
    elif family is Transform.FUNK:
        # keep the great sphere away from the puncture at the pole
        while len(pts) < k:
            v = _random_unit(rng, n + 1)
            if abs(v[-1]) > 0.3:
                pts.append(v)
    elif family is Transform.SLICE:
        pts = [(_random_unit(rng, n), float(rng.uniform(0.2, 1.5))) for _ in range(k)]
    elif family is Transform.HYPERBOLIC:
        pts = [tr.HyperbolicPoint.normal(float(rng.uniform(0.2, 3.0)), _random_unit(rng, n)) for _ in range(k)]
    else:
        pts = [float(x) for x in np.sort(rng.uniform(0.3, 3.0, k))]
    return pts


def cmd_verify_kernel(cfg: RunConfig):
    family = cfg.family
    rng = np.random.default_rng(cfg.seed)
    path = tr.Path(cfg.path)
    spec = QuadratureSpec()
    rows = []
    for m in parse_range(cfg.m_range, (2, 6)):
        basis = kernel_basis(family, cfg.n, m, cfg.lam)
        Y = _harmonic(cfg.n, m, cfg.mu) if family not in _OPERATOR else None
        cases = [(el.description, el.j, _kernel_input(el, Y)) for el in basis.elements]
        if not cases:
            rows.append(_sweep_row(family, cfg.n, m, None, "trivial kernel", 0.0, "PASS"))
        if cfg.probe:
            sub = RunConfig("transform", kind=family.value, n=cfg.n, m=m, mu=cfg.mu, lam=cfg.lam, profile="gauss")
            cases.append(("probe:gauss", None, build_input(sub)))
        pts = _sweep_points(family, cfg.n, cfg.points, rng, cfg.region)
        for desc, j, f in cases:
            ev, ms = annihilation_closures(family, f, spec, path, lam=cfg.lam, m=m)
            if family in _OPERATOR:
                ev0, ms0 = ev, ms
                ev, ms = (lambda t: float(ev0(t))), (lambda t: float(ms0(t)))
            rep = verify_annihilation(ev, ms, pts, tol=cfg.tol)
            rows.append(_sweep_row(family, cfg.n, m, j, desc, rep.max_residual, "PASS" if rep.passed else "FAIL"))
    return rows


def _kernel_input(el: KernelElement, Y):
    return el.profile() if el.transform in _OPERATOR else el.function(Y)


def _sweep_row(family, n, m, j, desc, residual, status):
    return {
        "transform": family.value,
        "n": n,
        "m": m,
        "j": j,
        "generator": desc,
        "max_residual": residual,
        "status": status,
        "citation": CITATION[family],
    }


def cmd_identities(cfg: RunConfig):
    checks = ["composition", "mellin", "reflect", "roundtrip"] if cfg.check == "all" else cfg.check.split(",")
    unknown = set(checks) - {"composition", "mellin", "reflect", "roundtrip"}
    if unknown:
        raise ConfigError(f"unknown identity checks {sorted(unknown)}")
    profiles = {
        "gauss": Profile(lambda t: np.exp(-t * t), name="gauss"),
        "exp": Profile(lambda t: np.exp(-t), name="exp"),
    }
    rows = []

    def add(check, params, residual, tol):
        rows.append({"check": check, "params": params, "residual": residual, "tol": tol, "status": "PASS" if residual <= tol else "FAIL"})

    if "composition" in checks:
        grid = np.linspace(0.5, 3.0, 11)
        for lam in (0.0, 0.5, 1.0):
            for m in (2, 3, 4):
                for name, f in profiles.items():
                    add("composition", f"lam={lam:g} m={m} f={name}", compose_identity_residual(lam, m, f, grid), max(cfg.tol, 1e-6))
    if "mellin" in checks:
        for lam, m in ((0.5, 2), (1.0, 3)):
            for z in (m - 0.5, m + 0.25, m + 1.5, m + 3.0, m + 1.0 + 2.0j):
                closed = complex(mellin_symbol(lam, m, z))
                numeric = mellin_numeric(lam, m, z)
                add("mellin", f"lam={lam:g} m={m} z={z}", abs(closed - numeric) / abs(closed), 1e-7)
    if "reflect" in checks:
        grid = np.linspace(0.4, 2.5, 9)
        f = Profile(lambda t: np.exp(-t - 1.0 / t), zero_exponent=math.inf, name="exp(-t-1/t)")
        for side_map in ("unstarred", "starred"):
            for lam in (0.0, 0.5, 1.0):
                for m in (2, 3):
                    add("reflect", f"{side_map} lam={lam:g} m={m}", reflect(side_map, lam, m, f, grid).residual, 1e-8)
    if "roundtrip" in checks:
        for lam, m in ((0.5, 2), (0.5, 4)):
            res, beyond = roundtrip_residuals(lam, m)
            add("roundtrip", f"lam={lam:g} m={m}", res, 1e-5)
            add("roundtrip-support", f"lam={lam:g} m={m}", beyond, 1e-8)
    return rows


def roundtrip_residuals(lam: float, m: int) -> tuple[float, float]:
    """Max gap of ``G psi`` to phi on the support and max ``|psi|`` beyond it."""
    phi = project_to_moment_space(bump(1.0, 1.6), m, support=(1.0, 2.0))
    psi = reconstruct_psi(lam, m, phi)
    grid = np.linspace(1.0, 2.0, 21)
    outer = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-10, max_nodes=1024)
    rep = gc_report(OperatorParams(lam, m, Side.RIGHT), psi, grid, outer)
    beyond = np.linspace(2.1, 5.0, 30)
    return float(np.max(np.abs(rep.value - phi(grid)))), float(np.max(np.abs(psi(beyond))))


def read_samples(path: str) -> np.ndarray:
    rows = []
    try:
        with open(path, newline="") as fh:
            for rec in csv.reader(line for line in fh if not line.startswith("#")):
                if not rec or rec[0].strip() == "t":
                    continue
                rows.append((float(rec[0]), float(rec[1])))
    except (OSError, ValueError, IndexError) as exc:
        raise ConfigError(f"cannot read samples from {path!r}: {exc}") from None
    if not rows:
        raise ConfigError(f"no samples in {path!r}")
    return np.asarray(rows)


def cmd_decompose(cfg: RunConfig):
    if not cfg.input:
        raise ConfigError("decompose needs --input samples.csv")
    samples = read_samples(cfg.input)
    res = kernel_decompose(samples, cfg.family, cfg.n, cfg.m, cfg.lam)
    cfg.extra["relative_residual"] = res.relative_residual
    cfg.extra["residual_norm"] = res.residual_norm
    cfg.extra["rank_deficient"] = res.rank_deficient
    status = "PASS" if res.relative_residual <= cfg.tol else "FAIL"
    if not res.exponents:
        return [{"j": None, "exponent": None, "coefficient": None, "relative_residual": res.relative_residual, "status": status}]
    return [
        {"j": j + 1, "exponent": e, "coefficient": float(c), "relative_residual": res.relative_residual, "status": status}
        for j, (e, c) in enumerate(zip(res.exponents, res.coefficients))
    ]


COMMANDS = {
    "transform": cmd_transform,
    "verify-kernel": cmd_verify_kernel,
    "identities": cmd_identities,
    "decompose": cmd_decompose,
}


# -------------------------------------------------------------------- output


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(cfg: RunConfig, rows: list[dict]) -> str:
    meta = cfg.meta()
    if cfg.extra:
        meta["derived"] = cfg.extra
    if cfg.format == "json":
        summary = {"rows": len(rows), "failed": sum(r.get("status") == "FAIL" for r in rows)}
        doc = {"meta": meta, "rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows], "summary": summary}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geokern", description="Kernels of Radon-type transforms: checks and tables.")
    p.add_argument("--version", action="version", version=f"geokern {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=1e-6, help="pass threshold (default 1e-6)")
        sp.add_argument("--seed", type=int, default=0, help="seed for random geometries")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="", help="output file (default stdout)")

    def geom(sp, m_default=0):
        sp.add_argument("--kind", required=True, help="transform or operator: " + ", ".join(KINDS))
        sp.add_argument("--n", type=int, default=2, help="dimension of the harmonic's sphere S^(n-1)")
        sp.add_argument("--m", type=int, default=m_default, help="harmonic degree")
        sp.add_argument("--mu", type=int, default=1, help="index within the degree-m harmonics")
        sp.add_argument("--lam", type=float, default=None, help="lambda, for gc_right/gc_left")
        sp.add_argument("--region", type=float, default=1.0, help="radius a of the exterior/interior region")

    t = sub.add_parser("transform", help="tabulate a transform of a separable function")
    geom(t)
    t.add_argument("--profile", default="gauss", help="gauss | exp | power:p | kernel:j=J | sum:TERM,...")
    t.add_argument("--grid", default="", help="name:lo:hi:N (abscissa of the geometry)")
    common(t)

    v = sub.add_parser("verify-kernel", help="annihilation sweep over kernel generators")
    geom(v)
    v.add_argument("--m-range", dest="m_range", default="2:6", help="lo:hi or a,b,c")
    v.add_argument("--points", type=int, default=20, help="evaluation points per case")
    v.add_argument("--path", choices=("fast", "direct"), default="fast")
    v.add_argument("--probe", action="store_true", help="add a non-kernel probe row per degree")
    common(v)

    i = sub.add_parser("identities", help="composition, Mellin, reflection and round-trip checks")
    i.add_argument("--check", default="all", help="all or a comma list of composition,mellin,reflect,roundtrip")
    common(i)

    d = sub.add_parser("decompose", help="fit samples onto the kernel generators")
    geom(d)
    d.add_argument("--input", required=True, help="CSV of t,value rows")
    common(d)
    d.set_defaults(tol=1e-2)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "lam"})
    try:
        cfg.validate()
        rows = COMMANDS[cfg.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"geokern: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"geokern: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(cfg, rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if any(r.get("status") == "FAIL" for r in rows) else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
