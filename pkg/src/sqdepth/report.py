"""Analysis reports: one JSON document per run, rendered to text separately.

The JSON document is the single source of truth; ``render_*_text`` functions
are pure functions of it.  Sections that fail carry an ``error`` slot instead
of aborting the whole report.  ``elapsed_ms`` stays null unless timing was
requested, keeping equal-seed reports byte-identical.
"""

from __future__ import annotations

import json
import time
from importlib import resources

from . import __version__
from .criteria import best_upper_bound
from .ideal_io import pair_to_dict, partition_to_dict
from .koszul import FieldSpec, depth_profile
from .lab import (
    HypothesisMismatch,
    NotApplicable,
    classify_lcm_configuration,
    step_shape,
)
from .monomial import IdealPair, build_poset
from .partition import DEFAULT_NODE_BUDGET, BudgetExhausted, sdepth_decision, sdepth_exact

SCHEMA_NAME = "sqdepth-report/1"


def _error_slot(exc: Exception) -> dict:
    return {"error": f"{type(exc).__name__}: {exc}"}


def build_analysis_report(
    pair: IdealPair,
    chars: tuple[int, ...] = (0, 2, 3),
    budget: int | None = DEFAULT_NODE_BUDGET,
    paranoid: bool = False,
    timing: bool = False,
) -> dict:
    """Run every engine on the pair and assemble the JSON analysis document."""
    t0 = time.monotonic()
    report: dict = {
        "schema": SCHEMA_NAME,
        "kind": "analysis",
        "instance": {**pair_to_dict(pair), "d": pair.d},
    }

    layers = build_poset(pair)
    report["poset"] = {"rho": list(layers.rho), "r": layers.r, "s": layers.s, "q": layers.q}

    sdepth_value = None
    try:
        res = sdepth_exact(pair, budget=budget)
        sdepth_value = res.value
        assert res.value >= pair.d
        report["sdepth"] = {
            "value": res.value,
            "nodes": res.nodes,
            "certificate": partition_to_dict(res.certificate),
        }
    except BudgetExhausted as exc:
        report["sdepth"] = {
            **_error_slot(exc),
            "lower_bound": exc.lower_bound,
            "upper_bound": exc.upper_bound,
            "nodes": exc.nodes,
        }

    depths = None
    try:
        fields = tuple(FieldSpec(c) for c in chars)
        profile = depth_profile(pair, fields=fields, paranoid=paranoid)
        depths = {c: r.depth for c, r in profile.items()}
        assert all(r.depth >= pair.d for r in profile.values())
        report["depth"] = {
            str(c): {
                "depth": r.depth,
                "proj_dim": r.proj_dim,
                "witness": {"sigma": list(r.witness_sigma.variables), "index": r.witness_index},
            }
            for c, r in profile.items()
        }
    except Exception as exc:  # pragma: no cover - engine errors are reported, not raised
        report["depth"] = _error_slot(exc)

    bound, verdicts = best_upper_bound(layers)
    report["criteria"] = {
        "bound": bound,
        "verdicts": [
            {
                "kind": v.kind,
                "t": v.t,
                "k": v.k,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "fired": v.fired,
            }
            for v in verdicts
        ],
    }

    try:
        conf = classify_lcm_configuration(pair)
        report["lcm_configuration"] = {
            "label": conf.label,
            "s": conf.s,
            "q": conf.q,
            "q_pair": {f"{i},{j}": v for (i, j), v in sorted(conf.q_pair.items())},
            "checks": [
                {
                    "description": c.description,
                    "observed": c.observed,
                    "required": c.required,
                    "holds": c.holds,
                }
                for c in conf.checks
            ],
        }
    except NotApplicable as exc:
        report["lcm_configuration"] = _error_slot(exc)

    report["theorems"] = _theorem_slots(pair, sdepth_value, depths)
    report["meta"] = _meta(timing, t0, chars=list(chars), budget=budget)
    return report


def _theorem_slots(pair: IdealPair, sdepth_value, depths) -> dict:
    """Floor/step verdicts reusing already-computed sdepth and depths."""
    out: dict = {}
    if sdepth_value is None or depths is None:
        reason = "engine result unavailable"
        out["floor"] = {"status": "skip", "reason": reason}
        out["step"] = {"status": "skip", "reason": reason}
        return out
    if sdepth_value > pair.d:
        out["floor"] = {"status": "skip", "reason": "sdepth above the floor"}
    else:
        bad = {c: v for c, v in depths.items() if v != pair.d}
        out["floor"] = {"status": "fail" if bad else "pass"}
    try:
        shape = step_shape(pair)
        if sdepth_value != pair.d + 1:
            out["step"] = {"status": "skip", "reason": "sdepth not d+1", "shape": shape}
        else:
            bad = {c: v for c, v in depths.items() if v > pair.d + 1}
            out["step"] = {"status": "fail" if bad else "pass", "shape": shape}
    except HypothesisMismatch as exc:
        out["step"] = {"status": "skip", "reason": f"shape mismatch: {exc}"}
    return out


def wrap_hunt_report(hunt: dict) -> dict:
    return {"schema": SCHEMA_NAME, "kind": "hunt", **hunt, "version": __version__}


def _meta(timing: bool, t0: float, **extra) -> dict:
    return {
        "version": __version__,
        **extra,
        "elapsed_ms": int((time.monotonic() - t0) * 1000) if timing else None,
    }


def build_sdepth_report(
    pair: IdealPair,
    target: int | None = None,
    budget: int | None = DEFAULT_NODE_BUDGET,
    timing: bool = False,
) -> dict:
    """Exact sdepth with certificate, or a single target decision."""
    t0 = time.monotonic()
    report: dict = {
        "schema": SCHEMA_NAME,
        "kind": "sdepth",
        "instance": {**pair_to_dict(pair), "d": pair.d},
    }
    try:
        if target is None:
            res = sdepth_exact(pair, budget=budget)
            report["sdepth"] = {
                "value": res.value,
                "nodes": res.nodes,
                "certificate": partition_to_dict(res.certificate),
            }
        else:
            part = sdepth_decision(pair, target, budget=budget)
            report["sdepth"] = {
                "target": target,
                "satisfiable": part is not None,
                "certificate": partition_to_dict(part) if part is not None else None,
            }
    except BudgetExhausted as exc:
        report["sdepth"] = {
            **_error_slot(exc),
            "lower_bound": exc.lower_bound,
            "upper_bound": exc.upper_bound,
            "nodes": exc.nodes,
        }
    report["meta"] = _meta(timing, t0, budget=budget)
    return report


def build_depth_report(
    pair: IdealPair,
    chars: tuple[int, ...] = (0, 2, 3),
    paranoid: bool = False,
    timing: bool = False,
) -> dict:
    t0 = time.monotonic()
    fields = tuple(FieldSpec(c) for c in chars)
    profile = depth_profile(pair, fields=fields, paranoid=paranoid)
    return {
        "schema": SCHEMA_NAME,
        "kind": "depth",
        "instance": {**pair_to_dict(pair), "d": pair.d},
        "depth": {
            str(c): {
                "depth": r.depth,
                "proj_dim": r.proj_dim,
                "witness": {"sigma": list(r.witness_sigma.variables), "index": r.witness_index},
            }
            for c, r in profile.items()
        },
        "meta": _meta(timing, t0, chars=list(chars)),
    }


def build_criteria_report(pair: IdealPair, timing: bool = False) -> dict:
    t0 = time.monotonic()
    layers = build_poset(pair)
    bound, verdicts = best_upper_bound(layers)
    return {
        "schema": SCHEMA_NAME,
        "kind": "criteria",
        "instance": {**pair_to_dict(pair), "d": pair.d},
        "poset": {"rho": list(layers.rho), "r": layers.r, "s": layers.s, "q": layers.q},
        "criteria": {
            "bound": bound,
            "verdicts": [
                {"kind": v.kind, "t": v.t, "k": v.k, "lhs": v.lhs, "rhs": v.rhs, "fired": v.fired}
                for v in verdicts
            ],
        },
        "meta": _meta(timing, t0),
    }


# ---------------------------------------------------------------------------
# text rendering (pure functions of the JSON document)


def _format_gens(gens: list) -> str:
    if not gens:
        return "0"
    return ", ".join("1" if not g else "*".join(f"x{v}" for v in g) for g in gens)


def _instance_lines(inst: dict) -> list[str]:
    return [
        f"instance   n = {inst['n']}, d = {inst['d']}",
        f"  I = {_format_gens(inst['I'])}",
        f"  J = {_format_gens(inst['J'])}",
    ]


def _poset_line(poset: dict) -> str:
    return (
        f"poset      rho = {poset['rho']}  (r = {poset['r']}, s = {poset['s']}, q = {poset['q']})"
    )


def _certificate_lines(cert: dict) -> list[str]:
    return [
        f"  [{_format_gens([iv['lo']])}, {_format_gens([iv['hi']])}]" for iv in cert["intervals"]
    ]


def _sdepth_lines(sd: dict, show_certificate: bool = True) -> list[str]:
    if "error" in sd:
        lines = [f"sdepth     {sd['error']}"]
        if sd.get("lower_bound") is not None or sd.get("upper_bound") is not None:
            lines.append(f"  bounds: [{sd.get('lower_bound')}, {sd.get('upper_bound')}]")
        return lines
    if "target" in sd:
        verdict = "achievable" if sd["satisfiable"] else "not achievable"
        lines = [f"sdepth     target {sd['target']}: {verdict}"]
        if show_certificate and sd["certificate"] is not None:
            lines += _certificate_lines(sd["certificate"])
        return lines
    lines = [f"sdepth     {sd['value']}  ({sd['nodes']} nodes)"]
    if show_certificate:
        lines += _certificate_lines(sd["certificate"])
    return lines


def _depth_lines(dep: dict, witness: bool = True) -> list[str]:
    if "error" in dep:
        return [f"depth      {dep['error']}"]
    lines = []
    for char, entry in dep.items():
        line = f"depth      char {char}: {entry['depth']}"
        if witness:
            sigma = _format_gens([entry["witness"]["sigma"]])
            line += f"  (H_{entry['witness']['index']} at sigma = {sigma})"
        lines.append(line)
    return lines


def _criteria_lines(crit: dict) -> list[str]:
    bound = crit["bound"]
    lines = [f"criteria   upper bound: {bound if bound is not None else 'none fired'}"]
    for v in crit["verdicts"]:
        where = f"t={v['t']}" + (f", k={v['k']}" if v["k"] is not None else "")
        fired = "FIRED" if v["fired"] else "quiet"
        lines.append(f"  {v['kind']:<11} {where:<12} lhs={v['lhs']} rhs={v['rhs']}  {fired}")
    return lines


def _meta_line(meta: dict) -> str:
    elapsed = f"{meta['elapsed_ms']} ms" if meta["elapsed_ms"] is not None else "untimed"
    parts = [f"version {meta['version']}"]
    if "chars" in meta:
        parts.append(f"chars {meta['chars']}")
    parts.append(elapsed)
    return "meta       " + ", ".join(parts)


def render_analysis_text(report: dict) -> str:
    lines = _instance_lines(report["instance"])
    lines.append(_poset_line(report["poset"]))
    lines += _sdepth_lines(report["sdepth"])
    lines += _depth_lines(report["depth"])
    lines += _criteria_lines(report["criteria"])
    conf = report["lcm_configuration"]
    if "error" in conf:
        lines.append(f"lcm class  {conf['error']}")
    else:
        lines.append(f"lcm class  {conf['label']}  (s = {conf['s']}, q = {conf['q']})")
        for c in conf["checks"]:
            mark = "ok " if c["holds"] else "BAD"
            lines.append(
                f"  {mark} {c['description']}  (observed {c['observed']}, required {c['required']})"
            )
    th = report["theorems"]
    for name in ("floor", "step"):
        entry = th[name]
        extra = f"  ({entry['reason']})" if "reason" in entry else ""
        lines.append(f"theorem    {name}: {entry['status']}{extra}")
    lines.append(_meta_line(report["meta"]))
    return "\n".join(lines) + "\n"


def render_sdepth_text(report: dict, certificate: bool = True) -> str:
    lines = _instance_lines(report["instance"])
    lines += _sdepth_lines(report["sdepth"], show_certificate=certificate)
    lines.append(_meta_line(report["meta"]))
    return "\n".join(lines) + "\n"


def render_depth_text(report: dict, witness: bool = True) -> str:
    lines = _instance_lines(report["instance"])
    lines += _depth_lines(report["depth"], witness=witness)
    lines.append(_meta_line(report["meta"]))
    return "\n".join(lines) + "\n"


def render_criteria_text(report: dict) -> str:
    lines = _instance_lines(report["instance"])
    lines.append(_poset_line(report["poset"]))
    lines += _criteria_lines(report["criteria"])
    lines.append(_meta_line(report["meta"]))
    return "\n".join(lines) + "\n"


def render_hunt_text(report: dict) -> str:
    lines = []
    fam = report["family"]
    lines.append(
        "family     n = {n}, d = {d}, k = {k}, with_e = {with_e}, "
        "J policy = {j_policy}, symmetry = {symmetry_reduction}".format(**fam)
    )
    lines.append(f"check      {report['check']}  (fields: {', '.join(report['fields'])})")
    counts = report["counts"]
    lines.append(
        f"counts     pass = {counts['pass']}, fail = {counts['fail']}, skip = {counts['skip']}"
    )
    for rec in report["failures"]:
        inst = rec["instance"]
        lines.append(
            f"  FAIL n = {inst['n']}, I = {_format_gens(inst['I'])}, J = {_format_gens(inst['J'])}"
        )
        det = rec["details"]
        if "sdepth" in det:
            lines.append(f"       sdepth = {det['sdepth']}")
        if "depths" in det:
            lines.append(f"       depths = {det['depths']}")
    lines.append(f"seed       {report['seed']}")
    elapsed = report["elapsed_ms"]
    lines.append(f"elapsed    {str(elapsed) + ' ms' if elapsed is not None else 'untimed'}")
    return "\n".join(lines) + "\n"


def load_schema() -> dict:
    with resources.files("sqdepth").joinpath("report_schema.json").open(encoding="utf-8") as fh:
        return json.load(fh)
