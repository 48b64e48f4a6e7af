"""Scenario files: JSON descriptions of verifications and their expected outcomes.

A scenario is an object with optional keys ``name``, ``mode`` (``"exact"``,
``"float"`` or ``{"float": tol}``), ``tol``, the sections ``system``,
``hopf``, ``action`` and ``magic`` (each an object or a list of objects),
and ``expectations``: a list of ``{"check": id-or-glob, "expected":
"PASS"|"FAIL"}``. Checks without a matching expectation are expected to
pass.
"""

from __future__ import annotations

import json
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from .checks import Check, VerificationError, check
from .hopf import (
    ActionSpec,
    HopfData,
    action_checks,
    classical_hopf,
    classical_quantum_permutation_algebra,
    classical_tower,
    corner_surjection_checks,
    flip,
    grid_coords,
    grid_formula_checks,
    hopf_checks,
    limit_action_checks,
    limit_hopf_checks,
    natural_action,
    tower_actions,
)
from .linalg import DEFAULT_TOL, Mat, rank
from .literals import LiteralError, format_matrix, parse_matrix
from .magic import (
    MagicUnitary,
    carrier_certificate,
    comultiply_grid,
    corner_embed,
    gadget_append,
    pad_to,
    paper_block_unitary,
    transpose_grid,
    verify_magic,
)
from .projective_limit import ProjectiveSystem, build_truncated_limit
from .report import Report, Table
from .star_algebra import SCALARS, MultiMatrixAlgebra, StarHom, hom_from_block_map, star_hom_checks, tensor_algebra

SECTIONS = ("system", "hopf", "action", "magic")
MODE_ENV = "MAGICLIM_MODE"
MAX_CLASSICAL = 4  # C(S_5) has a 14400-dimensional tensor square


class ScenarioError(ValueError):
    """Malformed scenario input; ``path`` locates the offending descriptor."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class Mode:
    exact: bool = True
    tol: float = DEFAULT_TOL

    def __str__(self) -> str:
        return "exact" if self.exact else f"float(tol={self.tol:g})"

    def mat(self, m: Mat) -> Mat:
        return m if self.exact else m.to_float(self.tol)

    def hom(self, h: StarHom | None) -> StarHom | None:
        return h if h is None or self.exact else replace(h, matrix=h.matrix.to_float(self.tol))

    def hopf(self, h: HopfData) -> HopfData:
        if self.exact:
            return h
        return HopfData(h.algebra, self.hom(h.coproduct), self.hom(h.counit), self.hom(h.antipode))

    def system(self, s: ProjectiveSystem) -> ProjectiveSystem:
        return s if self.exact else ProjectiveSystem(s.algebras, tuple(self.hom(p) for p in s.connecting))

    def grid(self, u: MagicUnitary) -> MagicUnitary:
        if self.exact:
            return u
        return replace(u, entries=tuple(tuple(self.mat(q) for q in row) for row in u.entries))


# -- loading ---------------------------------------------------------------


def parse_scenario_text(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ScenarioError("a scenario must be a JSON object")
    unknown = sorted(set(data) - {"name", "mode", "tol", "expectations", *SECTIONS})
    if unknown:
        raise ScenarioError(f"unknown key {unknown[0]!r}")
    return data


def load_scenario(path: str | os.PathLike) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario_text(text)


def _has_decimal(value, key: str = "") -> bool:
    if key in ("tol", "mode"):
        return False
    if isinstance(value, float):
        return True
    if isinstance(value, list):
        return any(_has_decimal(v) for v in value)
    if isinstance(value, dict):
        return any(_has_decimal(v, k) for k, v in value.items())
    return False


def resolve_mode(data: dict, mode: str | None = None, tol: float | None = None) -> Mode:
    """Flag beats scenario beats environment beats exact; decimal literals force float."""
    raw = data.get("mode")
    scen_tol = data.get("tol")
    if isinstance(raw, dict):
        if set(raw) != {"float"}:
            raise ScenarioError('mode objects have the form {"float": tol}', "mode")
        raw, scen_tol = "float", raw["float"]
    chosen = mode or raw or os.environ.get(MODE_ENV) or "exact"
    if chosen not in ("exact", "float"):
        raise ScenarioError(f"mode must be exact or float, got {chosen!r}", "mode")
    t = tol if tol is not None else scen_tol if scen_tol is not None else DEFAULT_TOL
    if isinstance(t, bool) or not isinstance(t, (int, float)) or t <= 0:
        raise ScenarioError("tol must be a positive number", "tol")
    if chosen == "exact" and _has_decimal({k: v for k, v in data.items() if k in SECTIONS}):
        if mode == "exact":
            raise ScenarioError("decimal literals cannot be verified in exact mode")
        chosen = "float"
    return Mode(chosen == "exact", float(t))


# -- descriptor helpers ----------------------------------------------------


def _builtin(desc: dict, path: str, families: dict[str, int]) -> tuple[str, list[int]] | None:
    """``"name:a,b"`` → ``("name", [a, b])``, validating the family and arity."""
    spec = desc.get("builtin")
    if spec is None:
        return None
    if not isinstance(spec, str):
        raise ScenarioError("builtin must be a string such as 'classical:3'", f"{path}.builtin")
    name, _, args = spec.partition(":")
    if name not in families:
        raise ScenarioError(f"unknown builtin {name!r} (known: {', '.join(sorted(families))})", f"{path}.builtin")
    try:
        nums = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ScenarioError(f"bad builtin arguments {args!r}", f"{path}.builtin") from None
    if len(nums) != families[name] or any(k < 1 for k in nums):
        raise ScenarioError(f"{name} takes {families[name]} positive integer argument(s)", f"{path}.builtin")
    if name in ("classical", "natural") and nums[0] > MAX_CLASSICAL and not desc.get("allow_large"):
        raise ScenarioError(f"{spec} exceeds n = {MAX_CLASSICAL}; set \"allow_large\": true to run it", f"{path}.builtin")
    return name, nums


def _algebra(value, path: str) -> MultiMatrixAlgebra:
    """``[k_1, ..., k_m]`` or ``{"blocks": [k_1, ..., k_m]}``."""
    if isinstance(value, dict):
        _allowed(value, path, {"blocks"})
        value, path = value.get("blocks"), f"{path}.blocks"
    if not isinstance(value, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in value):
        raise ScenarioError("an algebra is a list of block sizes", path)
    try:
        return MultiMatrixAlgebra(tuple(value))
    except ValueError as exc:
        raise ScenarioError(str(exc), path) from None


def _hom(raw, path: str, src: MultiMatrixAlgebra, tgt: MultiMatrixAlgebra, mode: Mode) -> StarHom:
    """Explicit coordinate matrix, or ``{"block_map": [s_0, ...]}`` naming the
    (0-based) source block feeding each target block."""
    if isinstance(raw, dict):
        _allowed(raw, path, {"block_map"})
        bm = raw.get("block_map")
        if not isinstance(bm, list) or not all(isinstance(b, int) and not isinstance(b, bool) for b in bm):
            raise ScenarioError("block_map must be a list of source block indices", f"{path}.block_map")
        try:
            h = hom_from_block_map(src, tgt, bm)
        except ValueError as exc:
            raise ScenarioError(str(exc), f"{path}.block_map") from None
        return mode.hom(h)
    return StarHom(src, tgt, _literal(raw, path, (tgt.dim, src.dim), mode))


def _matrix(desc: dict, key: str, path: str, shape: tuple[int, int], mode: Mode, required: bool = True) -> Mat | None:
    if key not in desc:
        if required:
            raise ScenarioError(f"missing {key!r}", path)
        return None
    return _literal(desc[key], f"{path}.{key}", shape, mode)


def _literal(raw, path: str, shape: tuple[int, int] | None, mode: Mode) -> Mat:
    try:
        return mode.mat(parse_matrix(raw, path, shape))
    except LiteralError as exc:
        raise ScenarioError(str(exc)) from None


def _bool(desc: dict, key: str, path: str) -> bool:
    v = desc.get(key, False)
    if not isinstance(v, bool):
        raise ScenarioError(f"{key} must be true or false", f"{path}.{key}")
    return v


def _int(desc: dict, key: str, path: str, default=None):
    v = desc.get(key, default)
    if v is not default and (isinstance(v, bool) or not isinstance(v, int) or v < 1):
        raise ScenarioError(f"{key} must be a positive integer", f"{path}.{key}")
    return v


def _allowed(desc, path: str, keys: set[str]) -> None:
    if not isinstance(desc, dict):
        raise ScenarioError("a section entry must be an object", path)
    extra = sorted(set(desc) - keys)
    if extra:
        raise ScenarioError(f"unknown key {extra[0]!r}", path)


# -- sections --------------------------------------------------------------


def _block_table(t) -> Table:
    rows = [("n", "dim M_n", "dim B_n", "blocks of B_n")]
    for n, b in enumerate(t.blocks, start=1):
        rows.append((str(n), str(t.system.algebra(n).dim), str(b.dim), " + ".join(f"M{k}" for k in b.block_dims) or "0"))
    return Table("kernel blocks", tuple(rows))


def _run_system(desc: dict, path: str, mode: Mode):
    _allowed(desc, path, {"builtin", "allow_large", "algebras", "maps", "expect_blocks"})
    checks: list[Check] = []
    b = _builtin(desc, path, {"classical": 1})
    if b is not None:
        s = mode.system(classical_tower(b[1][0])[0])
    else:
        algs_raw = desc.get("algebras")
        if not isinstance(algs_raw, list) or not algs_raw:
            raise ScenarioError("need a builtin or a non-empty 'algebras' list", path)
        algs = [_algebra(a, f"{path}.algebras[{n}]") for n, a in enumerate(algs_raw)]
        maps_raw = desc.get("maps", [])
        if not isinstance(maps_raw, list) or len(maps_raw) != len(algs) - 1:
            raise ScenarioError(f"need {len(algs) - 1} connecting maps", f"{path}.maps")
        maps = []
        for n, raw in enumerate(maps_raw, start=1):
            src, tgt = algs[n], algs[n - 1]
            h = _hom(raw, f"{path}.maps[{n - 1}]", src, tgt, mode)
            flags, _, block_map = star_hom_checks(h)
            ok = {"star", "multiplicative", "surjective"} <= flags
            checks.append(check(f"system.connecting[{n}]", f"φ_{n} is a surjective *-homomorphism", "φ_n : M_{n+1} → M_n onto *-homomorphism", ok, "missing " + ", ".join(sorted({"star", "multiplicative", "surjective"} - flags))))
            maps.append(replace(h, flags=flags, block_map=block_map))
        if not all(c.passed for c in checks):
            return checks, []
        s = ProjectiveSystem(tuple(algs), tuple(maps))
    t = build_truncated_limit(s, strict=False)
    checks.extend(t.checks)
    expect = desc.get("expect_blocks")
    if expect is not None:
        got = [b.dim for b in t.blocks]
        checks.append(check("limit.block_dims", f"dim B_k = {expect}", "M_n = ⊕_{k≤n} B_k", got == expect, f"got {got}"))
    return checks, [_block_table(t)]


def _explicit_hopf(desc: dict, path: str, mode: Mode) -> HopfData:
    _allowed(desc, path, {"algebra", "coproduct", "counit", "antipode", "cocommutative", "allow_large"})
    a = _algebra(desc.get("algebra"), f"{path}.algebra")
    a2 = tensor_algebra(a, a)
    delta = _matrix(desc, "coproduct", path, (a2.dim, a.dim), mode)
    eps = _matrix(desc, "counit", path, (1, a.dim), mode, required=False)
    kappa = _matrix(desc, "antipode", path, (a.dim, a.dim), mode, required=False)
    return HopfData(
        a,
        StarHom(a, a2, delta),
        None if eps is None else StarHom(a, SCALARS, eps),
        None if kappa is None else StarHom(a, a, kappa),
    )


def _cocommutative(h: HopfData) -> Check:
    a = h.algebra
    same = flip(a, a).matrix @ h.coproduct.matrix == h.coproduct.matrix
    return check("coproduct.cocommutative", "Δ^op = σΔ equals Δ", "Δ^op = σ ∘ Δ", same, "Δ^op ≠ Δ")


def _run_hopf(desc: dict, path: str, mode: Mode):
    _allowed(desc, path, {"builtin", "allow_large", "tower", "algebra", "coproduct", "counit", "antipode", "cocommutative"})
    if "tower" in desc:
        _, (depth,) = _builtin({"builtin": desc["tower"], "allow_large": desc.get("allow_large")}, f"{path}.tower", {"classical": 1})
        s, hopfs = classical_tower(depth)
        checks = [c.prefixed(f"corner[{n}]") for n in range(1, depth) for c in corner_surjection_checks(n, s.phi(n))]
        s, hopfs = mode.system(s), [mode.hopf(h) for h in hopfs]
        t = build_truncated_limit(s, strict=False)
        checks.extend(t.checks)
        if all(c.passed for c in t.checks):
            checks.extend(limit_hopf_checks(t, hopfs).checks)
        return checks, [_block_table(t)]
    b = _builtin(desc, path, {"classical": 1})
    if b is not None:
        n = b[1][0]
        exact = classical_hopf(n)
        h = mode.hopf(exact)
        checks = hopf_checks(h) + grid_formula_checks(h, grid_coords(n))
    else:
        h = _explicit_hopf(desc, path, mode)
        checks = hopf_checks(h)
    if _bool(desc, "cocommutative", path):
        checks.append(_cocommutative(h))
    return checks, []


def _run_action(desc: dict, path: str, mode: Mode):
    _allowed(desc, path, {"builtin", "allow_large", "tower", "carrier", "hopf", "map"})
    if "tower" in desc:
        _, (depth,) = _builtin({"builtin": desc["tower"], "allow_large": desc.get("allow_large")}, f"{path}.tower", {"classical": 1})
        s, hopfs = classical_tower(depth)
        alphas = tower_actions(depth, hopfs)
        s, hopfs = mode.system(s), [mode.hopf(h) for h in hopfs]
        alphas = [ActionSpec(a.carrier, h, mode.hom(a.map)) for a, h in zip(alphas, hopfs)]
        t = build_truncated_limit(s, strict=False)
        checks = list(t.checks)
        if not all(c.passed for c in checks):
            return checks, []
        lim = limit_hopf_checks(t, hopfs)
        checks.append(check("action_limit.hopf", "the limit Hopf structure exists", "Δ_∞ built from (Δ_n)", lim.hopf is not None, "limit Hopf structure failed"))
        if lim.hopf is not None:
            checks.extend(limit_action_checks(t, lim.hopf, alphas).checks)
        return checks, []
    b = _builtin(desc, path, {"natural": 1})
    if b is not None:
        n = b[1][0]
        a = natural_action(n)
        a = ActionSpec(a.carrier, mode.hopf(a.hopf), mode.hom(a.map))
    else:
        w = _algebra(desc.get("carrier"), f"{path}.carrier")
        hdesc = desc.get("hopf")
        if not isinstance(hdesc, dict):
            raise ScenarioError("an explicit action needs a 'hopf' object", f"{path}.hopf")
        if "builtin" in hdesc:
            _allowed(hdesc, f"{path}.hopf", {"builtin", "allow_large"})
            h = mode.hopf(classical_hopf(_builtin(hdesc, f"{path}.hopf", {"classical": 1})[1][0]))
        else:
            h = _explicit_hopf(hdesc, f"{path}.hopf", mode)
        wm = tensor_algebra(w, h.algebra)
        m = _matrix(desc, "map", path, (wm.dim, w.dim), mode)
        a = ActionSpec(w, h, StarHom(w, wm, m))
    return action_checks(a), []


def _standard_gadgets(dim: int) -> list[Mat]:
    """Projections onto ``span(e_i + e_{i+1})``; with the diagonal they generate ``M_dim``."""
    half = Fraction(1, 2)
    out = []
    for i in range(dim - 1):
        t = Mat.unit(dim, dim, i, i) + Mat.unit(dim, dim, i, i + 1) + Mat.unit(dim, dim, i + 1, i) + Mat.unit(dim, dim, i + 1, i + 1)
        out.append(t.scale(half))
    return out


def _grid(desc: dict, path: str, mode: Mode):
    """The base grid, plus the Hopf data when it comes from a classical model."""
    b = _builtin(desc, path, {"classical": 1, "paper_block": 2})
    if b is not None:
        name, args = b
        if name == "classical":
            h, u = classical_quantum_permutation_algebra(args[0])
            return u, h
        m, k = args
        if not 1 <= k <= m + 1:
            raise ScenarioError(f"K must lie in 1..{m + 1}", f"{path}.builtin")
        return paper_block_unitary([Mat.unit(m, m, i, i) for i in range(m)], k), None
    kind = desc.get("kind", "finite")
    if kind not in ("finite", "truncated"):
        raise ScenarioError("kind must be finite or truncated", f"{path}.kind")
    raw = desc.get("entries")
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) and len(r) == len(raw) for r in raw):
        raise ScenarioError("entries must be a non-empty square grid of matrices", f"{path}.entries")
    dim = desc.get("ambient_dim")
    if dim is None:
        dim = _literal(raw[0][0], f"{path}.entries[0][0]", None, mode).rows
    elif isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ScenarioError("ambient_dim must be a positive integer", f"{path}.ambient_dim")
    entries = [[_literal(q, f"{path}.entries[{i}][{j}]", (dim, dim), mode) for j, q in enumerate(r)] for i, r in enumerate(raw)]
    return MagicUnitary(kind, entries, dim, _bool(desc, "declared_infinite", path)), None


def _magic_table(title: str, u: MagicUnitary):
    rep = verify_magic(u)
    return list(rep.checks), Table(title, tuple(tuple(r) for r in rep.table()))


def _run_magic(desc: dict, path: str, mode: Mode):
    _allowed(desc, path, {"builtin", "allow_large", "kind", "ambient_dim", "entries", "declared_infinite", "gadgets", "pad", "corner", "transpose", "comultiply", "generate", "carrier"})
    base, hopf = _grid(desc, path, mode)
    base = mode.grid(base)
    checks, table = _magic_table("defects", base)
    tables = [table]
    u = base

    gad = desc.get("gadgets", False)
    if gad is not False:
        if gad is True:
            ts = _standard_gadgets(u.ambient_dim)
        elif isinstance(gad, list):
            ts = [_literal(t, f"{path}.gadgets[{n}]", (u.ambient_dim, u.ambient_dim), mode) for n, t in enumerate(gad)]
        else:
            raise ScenarioError("gadgets must be true or a list of projections", f"{path}.gadgets")
        u = mode.grid(gadget_append(u, ts))
        cs, _ = _magic_table("", u)
        checks.extend(c.prefixed("gadgets") for c in cs)

    pad = _int(desc, "pad", path)
    if pad is not None:
        if pad < base.size:
            raise ScenarioError(f"pad must be at least {base.size}", f"{path}.pad")
        checks.extend(c.prefixed("pad") for c in verify_magic(pad_to(base, pad)).checks)
    if _bool(desc, "corner", path):
        checks.extend(c.prefixed("corner") for c in verify_magic(corner_embed(base)).checks)
    if _bool(desc, "transpose", path):
        checks.extend(c.prefixed("transpose") for c in verify_magic(transpose_grid(base)).checks)
    if _bool(desc, "comultiply", path):
        try:
            x = comultiply_grid(base)
        except VerificationError as exc:
            checks.append(check("comultiply.applicable", "the grid has no defects, so its comultiplication closes", "x_ij = Σ_k q_ik ⊗ q_kj", False, str(exc)))
        else:
            checks.extend(c.prefixed("comultiply") for c in verify_magic(x).checks)
            if hopf is not None:
                checks.append(_matches_coproduct(hopf, x))

    gen = desc.get("generate", False)
    if gen is not False:
        checks.extend(_generate_checks(u, gen, f"{path}.generate"))

    carrier = desc.get("carrier")
    if carrier is not None:
        c, t = _carrier_checks(u, carrier, f"{path}.carrier")
        checks.extend(c)
        tables.append(t)
    return checks, tables


def _matches_coproduct(h: HopfData, x: MagicUnitary) -> Check:
    """The comultiplied regular grid is the regular image of ``Δ(p_ij)``."""
    a = h.algebra
    a2 = tensor_algebra(a, a)
    coords = grid_coords(x.size)
    bad = next(
        ((i + 1, j + 1) for i in range(x.size) for j in range(x.size) if a2.regular(h.coproduct.matrix @ coords[i][j]) != x.q(i + 1, j + 1)),
        None,
    )
    return check("comultiply.matches_coproduct", "x_ij equals Δ(p_ij) under C(S_n) ⊗ C(S_n) ≅ C(S_n × S_n)", "Δ(u_ij) = Σ_k u_ik ⊗ u_kj", bad is None, f"(i, j) = {bad}")


def _generate_checks(u: MagicUnitary, gen, path: str) -> list[Check]:
    if gen is True:
        gen = {}
    if not isinstance(gen, dict):
        raise ScenarioError("generate must be true or an object", path)
    _allowed(gen, path, {"center_dim", "factor"})
    g = u.ambient
    out = [c.prefixed("generated") for c in g.closure_checks()]
    if "center_dim" in gen:
        want = _int(gen, "center_dim", path)
        out.append(check("generated.center_dim", f"the entries generate an algebra with center dim {want}", "Z(N) = N ∩ N'", g.center_dim == want, f"center dim {g.center_dim}"))
    if "factor" in gen:
        want = _bool(gen, "factor", path)
        out.append(check("generated.factor", f"the generated algebra {'is' if want else 'is not'} a factor", "Z(N) = C1", g.is_factor == want, f"center dim {g.center_dim}"))
    return out


def _carrier_checks(u: MagicUnitary, desc, path: str):
    _allowed(desc, path, {"k", "expect"})
    k = _int(desc, "k", path, 1)
    if k > u.size:
        raise ScenarioError(f"k must lie in 1..{u.size}", f"{path}.k")
    expect = desc.get("expect", "identity")
    if expect not in ("identity", "zero", "proper"):
        raise ScenarioError("expect must be identity, zero or proper", f"{path}.expect")
    cert = carrier_certificate(u, k, expect)
    checks = list(cert.checks)
    # the first-row complement alone already forces w_k = 1 when its carrier is full
    one = Mat.identity(u.ambient_dim)
    first = cert.row_carriers[0]
    checks.append(check("certificate.first_row", f"z((p_1^({k}))^⊥) = 1", "z(r_k^⊥) = 1", first == one, "proper carrier"))
    rows = [("line", "carrier rank")]
    rows += [(f"row {j}", str(rank(c))) for j, c in enumerate(cert.row_carriers, start=1)]
    rows += [(f"col {j}", str(rank(c))) for j, c in enumerate(cert.col_carriers, start=1)]
    rows.append((f"w_{k}", cert.w_class))
    return checks, Table(f"central carriers at k={k} (finite certificate only)", tuple(rows))


_RUNNERS = {"system": _run_system, "hopf": _run_hopf, "action": _run_action, "magic": _run_magic}


def _run_task(task):
    section, desc, path, mode = task
    try:
        checks, tables = _RUNNERS[section](desc, path, mode)
    except ScenarioError as exc:
        return ("error", str(exc))
    except (ValueError, VerificationError) as exc:
        return ("error", f"{path}: {exc}")
    if path != section:
        checks = [c.prefixed(path) for c in checks]
        tables = [Table(f"{path}: {t.title}", t.rows) for t in tables]
    return ("ok", checks, tables)


def _tasks(data: dict, mode: Mode) -> list[tuple]:
    tasks = []
    for section in SECTIONS:
        if section not in data:
            continue
        value = data[section]
        if isinstance(value, list):
            tasks.extend((section, d, f"{section}[{i}]", mode) for i, d in enumerate(value))
        else:
            tasks.append((section, value, section, mode))
    return tasks


def _expectations(data: dict) -> list[tuple[str, bool]]:
    raw = data.get("expectations", [])
    if not isinstance(raw, list):
        raise ScenarioError("expectations must be a list", "expectations")
    out = []
    for i, e in enumerate(raw):
        p = f"expectations[{i}]"
        if not isinstance(e, dict) or not isinstance(e.get("check"), str) or e.get("expected", "PASS") not in ("PASS", "FAIL"):
            raise ScenarioError('expected {"check": id, "expected": "PASS"|"FAIL"}', p)
        if set(e) - {"check", "expected"}:
            raise ScenarioError(f"unknown key {sorted(set(e) - {'check', 'expected'})[0]!r}", p)
        out.append((e["check"], e.get("expected", "PASS") == "PASS"))
    return out


def _pattern(glob: str) -> re.Pattern:
    """``*`` and ``?`` are wildcards; brackets stay literal so ``magic[0].*`` works."""
    return re.compile(re.escape(glob).replace(r"\*", ".*").replace(r"\?", "."))


def _unexpected(checks: list[Check], expectations: list[tuple[str, bool]]) -> list[str]:
    out = []
    used = set()
    patterns = [_pattern(p) for p, _ in expectations]
    for c in checks:
        want = True
        for n, ((_, passed), pat) in enumerate(zip(expectations, patterns)):
            if pat.fullmatch(c.id):
                want = passed
                used.add(n)
                break
        if c.passed != want:
            out.append(f"{c.id} is {c.status}, expected {'PASS' if want else 'FAIL'}")
    for n, (pattern, _) in enumerate(expectations):
        if n not in used:
            out.append(f"expectation {pattern!r} matches no check")
    return out


def run_data(data: dict, *, mode: str | None = None, tol: float | None = None, jobs: int = 1) -> Report:
    m = resolve_mode(data, mode, tol)
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ScenarioError("name must be a string", "name")
    expectations = _expectations(data)
    tasks = _tasks(data, m)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    checks: list[Check] = []
    tables: list[Table] = []
    for res in results:
        if res[0] == "error":
            raise ScenarioError(res[1])
        checks.extend(res[1])
        tables.extend(res[2])
    return Report(name, checks, tables, _unexpected(checks, expectations))


def run_scenario(path: str | os.PathLike, *, mode: str | None = None, tol: float | None = None, jobs: int = 1) -> Report:
    return run_data(load_scenario(path), mode=mode, tol=tol, jobs=jobs)


# -- built-in fixtures -----------------------------------------------------


def _magma_coproduct() -> dict:
    """``C^3`` with ``Δ(e_k) = Σ_{x - y ≡ k} e_x ⊗ e_y``: a unital *-homomorphism, not coassociative."""
    a = MultiMatrixAlgebra((1, 1, 1))
    rows = [[0] * 3 for _ in range(9)]
    for x in range(3):
        for y in range(3):
            rows[3 * x + y][(x - y) % 3] = 1
    return {
        "name": "perturbed-coproduct",
        "hopf": {"algebra": {"blocks": list(a.block_dims)}, "coproduct": format_matrix(Mat.from_rows(rows))},
        "expectations": [{"check": "coproduct.coassociativity", "expected": "FAIL"}],
    }


def _fixture_table() -> dict[str, Any]:
    return {
        "empty": lambda: {},
        "classical-hopf": lambda n=3: {"name": f"classical-hopf-{n}", "hopf": {"builtin": f"classical:{n}"}},
        "classical-tower": lambda n=4: {
            "name": f"classical-tower-{n}",
            "system": {"builtin": f"classical:{n}"},
            "hopf": {"tower": f"classical:{n}"},
            "action": {"tower": f"classical:{n}"},
        },
        "natural-action": lambda n=3: {"name": f"natural-action-{n}", "action": {"builtin": f"natural:{n}"}},
        "perturbed-coproduct": _magma_coproduct,
        "cocommutative-s3": lambda: {
            "name": "cocommutative-s3",
            "hopf": {"builtin": "classical:3", "cocommutative": True},
            "expectations": [{"check": "coproduct.cocommutative", "expected": "FAIL"}],
        },
        "paper-block": lambda m=3: {
            "name": f"paper-block-{m}",
            "magic": [
                {
                    "builtin": f"paper_block:{m},{m + 1}",
                    "comultiply": True,
                    "transpose": True,
                    "pad": m + 2,
                    "generate": {"center_dim": m, "factor": False},
                },
                {
                    "builtin": f"paper_block:{m},{m + 1}",
                    "gadgets": True,
                    "generate": {"center_dim": 1, "factor": True},
                    "carrier": {"k": 1, "expect": "identity"},
                },
            ],
            "expectations": [
                {"check": "magic[0].pad.magic.row_sums", "expected": "FAIL"},
                {"check": "magic[0].pad.magic.col_sums", "expected": "FAIL"},
            ],
        },
        "paper-block-truncated": lambda m=3: {
            "name": f"paper-block-truncated-{m}",
            "magic": {"builtin": f"paper_block:{m},{m}"},
            "expectations": [
                {"check": "magic.row_sums", "expected": "FAIL"},
                {"check": "magic.col_sums", "expected": "FAIL"},
            ],
        },
        "classical-grid": lambda n=3: {"name": f"classical-grid-{n}", "magic": {"builtin": f"classical:{n}", "comultiply": True, "corner": True}},
    }


FIXTURES = tuple(sorted(_fixture_table()))


def fixture(name: str) -> dict:
    """Built-in scenario ``name`` or ``name:n`` (size parameter where it applies)."""
    base, _, arg = name.partition(":")
    table = _fixture_table()
    if base not in table:
        raise ScenarioError(f"unknown fixture {base!r} (known: {', '.join(FIXTURES)})")
    if not arg:
        return table[base]()
    try:
        return table[base](int(arg))
    except (TypeError, ValueError):
        raise ScenarioError(f"fixture {base!r} does not take the argument {arg!r}") from None


def demo_paper_block(m: int, k: int, gadgets: bool) -> dict:
    """Scenario for the end-to-end paper block pipeline."""
    if m < 2 or not 1 <= k <= m + 1:
        raise ScenarioError(f"need m >= 2 and 1 <= K <= m + 1, got m={m}, K={k}")
    desc: dict = {"builtin": f"paper_block:{m},{k}", "gadgets": gadgets, "transpose": True}
    expectations = []
    if k == m + 1:
        desc["comultiply"] = True
    else:
        expectations += [{"check": "*magic.row_sums", "expected": "FAIL"}, {"check": "*magic.col_sums", "expected": "FAIL"}]
    desc["generate"] = {"factor": gadgets}
    # a 1x1 corner of the bare block has a single complement, 1 - d_1, whose carrier is proper
    desc["carrier"] = {"k": 1, "expect": "proper" if k == 1 and not gadgets else "identity"}
    if not gadgets:
        expectations.append({"check": "certificate.first_row", "expected": "FAIL"})
    return {"name": f"paper-block m={m} K={k}{' +gadgets' if gadgets else ''}", "magic": desc, "expectations": expectations}
