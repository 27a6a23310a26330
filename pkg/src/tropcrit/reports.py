"""Machine-readable reports and their plain-text summaries.

Exponents, valuations and tropical points are exact rational strings;
floating coefficients are rounded to 17 significant digits.  Report sections
are "tropical", "coefficient", "series" and "certificates".
"""
from __future__ import annotations

from .instances import Instance, coeff_num, dump_instance, dump_laurent, rat_str
from .lift import check_nondegenerate, residual_valuation, gradient_G, solve_critical
from .mutation import check_mutation_invariance
from .newton import canonical_point
from .series import INF, PuiseuxSeries, as_fraction
from .toric import delzant_analyze, potential, toric_analyze
from .tropical import (
    LaurentPoly,
    check_tropical_critical,
    level_data,
    polytope_membership,
    trop_eval,
    trop_max,
)

DEFAULT_ORDER = 3


def _q(x) -> str:
    return "inf" if x == INF else rat_str(x)


def _qv(xs) -> list:
    return [_q(x) for x in xs]


def _series(s: PuiseuxSeries) -> dict:
    out = {"terms": [[rat_str(e), coeff_num(c)] for e, c in s.terms]}
    if s.trunc != INF:
        out["trunc"] = rat_str(s.trunc)
    return out


def polynomial_of(inst: Instance) -> LaurentPoly:
    """The Laurent polynomial an instance describes (the source W for mutations)."""
    if inst.kind == "laurent":
        return inst.payload
    if inst.kind == "mutation":
        return inst.payload[0]
    if inst.kind == "toric":
        return potential(inst.payload.rays, inst.payload.coeffs)
    return potential(inst.payload.normals, inst.payload.constants)


def _tropical_section(W: LaurentPoly, cp) -> dict:
    ld = level_data(W, cp.d_crit)
    return {
        "d_crit": _qv(cp.d_crit),
        "tau": _q(cp.tau),
        "levels": _qv(ld.levels),
        "deltas": _qv(ld.deltas),
        "stages": cp.trace(),
    }


def crit_certificates(W: LaurentPoly, res, seed: int = 0) -> dict:
    """Re-run every self-check on a solved instance."""
    tc = check_tropical_critical(W, res.d_crit)
    nd = check_nondegenerate(W, res, seed=seed)
    G = gradient_G(W, res.point())
    val = residual_valuation(G)
    target = res.tau + (res.requested_order if res.order == INF else res.order)
    return {
        "trop_max_equality": trop_eval(W, res.d_crit) == trop_max(W),
        "tropical_critical": tc.passed,
        "residual_valuation": _q(val),
        "residual_target": _q(target),
        "residual_ok": val >= target,
        "nondegenerate": nd.passed,
        "hessian_min_eigs": [coeff_num(e) for e in nd.hessian_min_eigs],
        "stronger_nondegeneracy": nd.stronger_condition,
    }


def crit_report(inst: Instance, order=None, tol: float | None = None, seed: int | None = None,
                certify: bool = False) -> dict:
    W = polynomial_of(inst)
    opts = inst.options
    N = as_fraction(order if order is not None else opts.get("trunc_order", DEFAULT_ORDER))
    tol = tol if tol is not None else opts.get("tol", 1e-9)
    seed = seed if seed is not None else opts.get("seed")
    res = solve_critical(W, N, tol=tol, probe_seed=seed, coeff_seed=seed)
    rep = {
        "command": "crit",
        "instance": dump_instance(inst),
        "tropical": _tropical_section(W, res.canonical),
        "coefficient": {"d_coeff": [coeff_num(x) for x in res.d_coeff]},
        "series": {
            "requested_order": _q(res.requested_order),
            "order": _q(res.order),
            "exact": res.exact,
            "w": [_series(s) for s in res.w_crit],
            "coordinates": [_series(s) for s in res.coordinates()],
            "residual_valuation": _q(res.residual_valuation),
        },
    }
    if certify:
        rep["certificates"] = crit_certificates(W, res, seed=seed or 0)
    return rep


def trop_report(inst: Instance, points=(), certify: bool = False) -> dict:
    W = polynomial_of(inst)
    cp = canonical_point(W)
    pts = list(inst.options.get("points", [])) + list(points)
    rep = {
        "command": "trop",
        "instance": dump_instance(inst),
        "tropical": _tropical_section(W, cp),
        "membership": [
            {"point": _qv(p), "trop_value": _q(trop_eval(W, p)), "member": polytope_membership(W, p)}
            for p in pts
        ],
    }
    if certify:
        rep["certificates"] = {
            "trop_max_equality": trop_eval(W, cp.d_crit) == trop_max(W),
            "tropical_critical": check_tropical_critical(W, cp.d_crit).passed,
        }
    return rep


def toric_report(inst: Instance, certify: bool = False) -> dict:
    out = toric_analyze(inst.payload)
    W = polynomial_of(inst)
    rep = {
        "command": "toric",
        "instance": dump_instance(inst),
        "tropical": {
            "d_crit": _qv(out["d_crit"]),
            "tau": _q(out["tau"]),
            "integrally_balanced": out["integrally_balanced"],
            "shifted_divisor": _qv(out["shifted_divisor"]),
            "distinguished_divisor": (None if out["distinguished_divisor"] is None
                                      else _qv(out["distinguished_divisor"])),
            "stages": out["stages"],
        },
    }
    if certify:
        shifted = potential(inst.payload.rays, out["shifted_divisor"])
        rep["certificates"] = {
            "trop_max_equality": trop_eval(W, out["d_crit"]) == trop_max(W),
            "tropical_critical": check_tropical_critical(W, out["d_crit"]).passed,
            "shifted_divisor_is_centered": all(x == 0 for x in canonical_point(shifted).d_crit),
        }
    return rep


def delzant_report(inst: Instance, seed: int | None = None, certify: bool = False) -> dict:
    seed = seed if seed is not None else inst.options.get("seed", 0)
    out = delzant_analyze(inst.payload, seed=seed)
    cert = out["nondegeneracy"]
    rep = {
        "command": "delzant",
        "instance": dump_instance(inst),
        "tropical": {
            "d_crit": _qv(out["d_crit"]),
            "tau": _q(out["tau"]),
            "full_dimensional": out["full_dimensional"],
            "interior": out["interior"],
            "facet_margins": _qv(out["facet_margins"]),
            "stages": out["stages"],
        },
        "certificates": {
            "nondegenerate": out["nondegenerate"],
            "hessian_min_eigs": [coeff_num(e) for e in cert.hessian_min_eigs],
            "stronger_nondegeneracy": cert.stronger_condition,
            "caveat": out["caveat"],
        },
    }
    if certify:
        W = polynomial_of(inst)
        rep["certificates"]["trop_max_equality"] = trop_eval(W, out["d_crit"]) == trop_max(W)
        rep["certificates"]["tropical_critical"] = check_tropical_critical(W, out["d_crit"]).passed
    return rep


def mutate_report(inst: Instance, order=None, tol: float | None = None, certify: bool = False) -> dict:
    W, mu = inst.payload
    N = as_fraction(order if order is not None else inst.options.get("trunc_order", 2))
    tol = tol if tol is not None else inst.options.get("tol", 1e-8)
    out = check_mutation_invariance(W, mu, trunc_order=N, tol=tol)
    rep = {
        "command": "mutate",
        "instance": dump_instance(inst),
        "pullback": dump_laurent(out["pullback"]),
        "tropical": {
            "pullback_complete": out["pullback_complete"],
            "d_crit": _qv(out["d_crit"]),
            "d_crit_pullback": _qv(out["d_crit_pullback"]),
            "trop_image": _qv(out["trop_image"]),
        },
        "series": {"order": _q(out["order"]), "max_deviation": coeff_num(out["series_max_deviation"]),
                   "log_scale": coeff_num(out["log_scale"])},
        "certificates": {"trop_ok": out["trop_ok"], "series_ok": out["series_ok"]},
        "scope": out["scope"],
    }
    if certify:
        for key, res in (("source", out["result"]), ("pullback", out["result_pullback"])):
            rep["certificates"][key] = crit_certificates(res.W, res)
    return rep


def certificates_passed(rep: dict) -> bool:
    """False when any boolean certificate in the report failed."""
    certs = rep.get("certificates", {})

    def ok(obj):
        if isinstance(obj, dict):
            return all(ok(v) for v in obj.values())
        return obj is not False

    return ok(certs)


# -- text summaries -----------------------------------------------------------
def _fmt_series(lit: dict) -> str:
    body = ""
    for e, c in lit["terms"]:
        mono = f"{abs(c):.10g}" if e == "0" else f"{abs(c):.10g}*t^{e}"
        if not body:
            body = mono if c >= 0 else "-" + mono
        else:
            body += (" + " if c >= 0 else " - ") + mono
    body = body or "0"
    if "trunc" in lit:
        body += f" + O(t^{lit['trunc']})"
    return body


def _vec(xs) -> str:
    return "(" + ", ".join(str(x) for x in xs) + ")"


def text_summary(rep: dict) -> str:
    cmd = rep.get("command", "?")
    lines = []
    if "error" in rep:
        return f"{cmd}: error {rep['error']['type']}: {rep['error']['message']}"
    trop = rep.get("tropical", {})
    if "d_crit" in trop:
        lines.append(f"d_crit = {_vec(trop['d_crit'])}")
    if "tau" in trop:
        lines.append(f"tau = {trop['tau']}")
    if cmd == "crit":
        lines.append(f"d_coeff = {_vec(f'{x:.10g}' for x in rep['coefficient']['d_coeff'])}")
        ser = rep["series"]
        lines.append(f"order = {ser['order']}  residual valuation = {ser['residual_valuation']}")
        for j, lit in enumerate(ser["coordinates"]):
            lines.append(f"x_{j + 1} = {_fmt_series(lit)}")
    elif cmd == "trop":
        for m in rep["membership"]:
            lines.append(f"point {_vec(m['point'])}: Trop = {m['trop_value']}, member = {m['member']}")
    elif cmd == "toric":
        lines.append(f"integrally balanced = {trop['integrally_balanced']}")
        lines.append(f"shifted divisor = {_vec(trop['shifted_divisor'])}")
    elif cmd == "delzant":
        lines.append(f"interior = {trop['interior']}  margins = {_vec(trop['facet_margins'])}")
        lines.append(f"caveat: {rep['certificates']['caveat']}")
    elif cmd == "mutate":
        lines.append(f"pullback d_crit = {_vec(trop['d_crit_pullback'])}  image = {_vec(trop['trop_image'])}")
        lines.append(f"relative series deviation = {rep['series']['max_deviation']:.3g} through order {rep['series']['order']}")
    certs = rep.get("certificates")
    if certs:
        flat = []
        for k, v in certs.items():
            if isinstance(v, bool):
                flat.append(f"{k}={'pass' if v else 'FAIL'}")
        if flat:
            lines.append("certificates: " + " ".join(flat))
    return "\n".join(lines)
