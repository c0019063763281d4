"""Command-line front end.

Reads one structured document (YAML, which includes JSON) describing the
input data, runs a single command, and prints a deterministic report either
as ``key: value`` text or as JSON.  Exact values render canonically; decimal
approximations are added on request and always carry an error bound.

Exit codes: 0 success/verified, 2 invalid input, 3 hypothesis not satisfied,
4 character not representable, 5 precision cap exceeded, 6 a paper identity
failed (library defect).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import yaml

from . import exactnum, heights, lattice, toric
from .exactnum import (
    AlgScalar,
    CharacterNotRepresentable,
    LogLinear,
    PrecisionCapExceeded,
    parse_loglinear,
    set_precision_cap,
)
from .heights import (
    HypothesisNotSatisfiedError,
    MinimaNotProvedError,
    PaperIdentityError,
)
from .toric import ExponentConfig, ToricData

EXIT_OK = 0
EXIT_INPUT_INVALID = 2
EXIT_HYPOTHESIS = 3
EXIT_CHARACTER = 4
EXIT_PRECISION = 5
EXIT_ASSERTION = 6


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input decoding
# ---------------------------------------------------------------------------

def _as_fraction(x: Any, what: str) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"{what}: expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as e:
            raise InputError(f"{what}: {e}") from None
    raise InputError(f"{what}: expected an integer or 'a/b' string, got {x!r}")


def _as_int_vector(x: Any, what: str) -> List[int]:
    if isinstance(x, int):
        return [x]
    if isinstance(x, (list, tuple)) and all(isinstance(v, int) for v in x):
        return list(x)
    raise InputError(f"{what}: expected an integer vector, got {x!r}")


def _decode_exponents(doc: Dict[str, Any], key: str = "exponents") -> ExponentConfig:
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    rows = doc[key]
    if not isinstance(rows, (list, tuple)) or not rows:
        raise InputError(f"{key}: expected a nonempty list of integer vectors")
    vecs = [_as_int_vector(r, f"{key}[{i}]") for i, r in enumerate(rows)]
    try:
        return ExponentConfig(vecs)
    except ValueError as e:
        raise InputError(f"{key}: {e}") from None


def _decode_scalar(x: Any, what: str) -> AlgScalar:
    if isinstance(x, bool):
        raise InputError(f"{what}: booleans are not scalars")
    if isinstance(x, int):
        if x == 0:
            raise InputError(f"{what}: coefficients must be nonzero")
        return AlgScalar.from_rational(x)
    if isinstance(x, str):
        try:
            return AlgScalar.parse(x)
        except ValueError as e:
            raise InputError(f"{what}: {e}") from None
    raise InputError(f"{what}: expected an integer or scalar string, got {x!r}")


def _decode_coefficients(doc: Dict[str, Any], config: Optional[ExponentConfig],
                         key: str = "coefficients", required: bool = True) -> List[AlgScalar]:
    if key not in doc:
        if not required and config is not None:
            return [AlgScalar.one()] * (config.N + 1)
        raise InputError(f"missing field {key!r}")
    vals = doc[key]
    if not isinstance(vals, (list, tuple)) or not vals:
        raise InputError(f"{key}: expected a nonempty list")
    out = [_decode_scalar(v, f"{key}[{i}]") for i, v in enumerate(vals)]
    if config is not None and len(out) != config.N + 1:
        raise InputError(f"{key}: expected {config.N + 1} entries, got {len(out)}")
    return out


def _decode_loglinear(x: Any, what: str) -> LogLinear:
    if isinstance(x, bool):
        raise InputError(f"{what}: booleans are not weights")
    if isinstance(x, int):
        return LogLinear.rational(x)
    if isinstance(x, str):
        try:
            return parse_loglinear(x)
        except ValueError as e:
            raise InputError(f"{what}: {e}") from None
    raise InputError(f"{what}: expected an integer or LogLinear string, got {x!r}")


def _decode_tau(doc: Dict[str, Any], config: Optional[ExponentConfig]) -> List[LogLinear]:
    if "tau" not in doc:
        raise InputError("missing field 'tau'")
    vals = doc["tau"]
    if not isinstance(vals, (list, tuple)) or not vals:
        raise InputError("tau: expected a nonempty list")
    out = [_decode_loglinear(v, f"tau[{i}]") for i, v in enumerate(vals)]
    if config is not None and len(out) != config.N + 1:
        raise InputError(f"tau: expected {config.N + 1} entries, got {len(out)}")
    return out


def _decode_b(doc: Dict[str, Any], config: Optional[ExponentConfig]) -> List[int]:
    if "b" not in doc:
        raise InputError("missing field 'b'")
    b = _as_int_vector(doc["b"], "b")
    if config is not None and len(b) != config.N + 1:
        raise InputError(f"b: expected {config.N + 1} entries, got {len(b)}")
    return b


def _decode_toric(doc: Dict[str, Any], coefficients_required: bool = True) -> ToricData:
    config = _decode_exponents(doc)
    alpha = _decode_coefficients(doc, config, required=coefficients_required)
    return ToricData(config, alpha)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _render(value: Any, digits: Optional[int]):
    if isinstance(value, LogLinear):
        out: Dict[str, Any] = {"exact": value.render()}
        if digits:
            approx, bound = value.approx(digits)
            out["decimal"] = approx
            out["decimal_error_bound"] = bound
        return out
    if isinstance(value, AlgScalar):
        return value.render()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return [_render(v, digits) for v in value]
    if isinstance(value, dict):
        return {k: _render(v, digits) for k, v in value.items()}
    raise TypeError(f"cannot render {type(value).__name__}")


def _print_report(report: Dict[str, Any], as_json: bool, digits: Optional[int]) -> None:
    rendered = _render(report, digits)
    if as_json:
        print(json.dumps(rendered, indent=2, sort_keys=False))
        return

    def emit(prefix: str, val: Any):
        if isinstance(val, dict):
            if set(val) <= {"exact", "decimal", "decimal_error_bound"}:
                text = val["exact"]
                if "decimal" in val:
                    text += f"  (~ {val['decimal']} +- {val['decimal_error_bound']})"
                print(f"{prefix}: {text}")
            else:
                for k, v in val.items():
                    emit(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            for i, v in enumerate(val):
                emit(f"{prefix}[{i}]", v)
        else:
            print(f"{prefix}: {val}")

    for k, v in rendered.items():
        emit(k, v)


def _vec(v: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _cmd_degree(doc, args):
    config = _decode_exponents(doc)
    return {"command": "degree", "degree": toric.degree(config)}


def _cmd_multidegree(doc, args):
    if "factors" not in doc or not isinstance(doc["factors"], list):
        raise InputError("missing field 'factors' (list of {exponents: ...})")
    configs = [_decode_exponents(f, "exponents") for f in doc["factors"]]
    if "c" not in doc:
        raise InputError("missing field 'c'")
    c = _as_int_vector(doc["c"], "c")
    val = toric.multidegree(configs, c)
    return {"command": "multidegree", "c": _vec(c), "multidegree": val}


def _cmd_kernel(doc, args):
    config = _decode_exponents(doc)
    basis = config.kernel_lattice().basis
    return {
        "command": "kernel",
        "rank": len(basis),
        "basis": [_vec(b) for b in basis],
    }


def _cmd_ideal(doc, args):
    data = _decode_toric(doc, coefficients_required=False)
    gens = toric.ideal_generators(data)
    return {
        "command": "ideal",
        "generators": [g.render() for g in gens],
        "degrees": [g.degree for g in gens],
    }


def _cmd_from_ideal(doc, args):
    if "gamma" not in doc:
        raise InputError("missing field 'gamma' (ideal generators)")
    gens = [_as_int_vector(r, f"gamma[{i}]") for i, r in enumerate(doc["gamma"])]
    if "rho" not in doc:
        raise InputError("missing field 'rho' (character values)")
    vals = [_decode_scalar(v, f"rho[{i}]") for i, v in enumerate(doc["rho"])]
    try:
        ideal = toric.BinomialIdeal(gens, vals)
    except ValueError as e:
        raise InputError(str(e)) from None
    data = toric.from_binomial_ideal(ideal)
    return {
        "command": "from-ideal",
        "exponents": [_vec(p) for p in data.config.points],
        "coefficients": [a.render() for a in data.alpha],
        "degree": toric.degree(data),
        "height": heights.normalized_height(data),
    }


def _cmd_obstruction(doc, args):
    data = _decode_toric(doc, coefficients_required=False)
    obs = toric.obstruction_indices(data)
    return {
        "command": "obstruction",
        "omegas": [o for o, _ in obs],
        "witnesses": [w.render() for _, w in obs],
    }


def _cmd_sandwich(doc, args):
    data = _decode_toric(doc, coefficients_required=False)
    rep = toric.minkowski_sandwich(data)
    ok = rep.lower_ok and rep.sharp_upper_ok and rep.weak_upper_ok and rep.simple_upper_ok
    if not ok:
        raise PaperIdentityError("Minkowski sandwich failed")
    return {
        "command": "sandwich",
        "degree": rep.degree,
        "omegas": list(rep.omegas),
        "product": rep.product,
        "simple_bound": rep.simple_bound,
        "verified": ok,
    }


def _cmd_pluecker(doc, args):
    config = _decode_exponents(doc)
    data = toric.pluecker(config)
    return {
        "command": "pluecker",
        "minors": {"{" + ",".join(map(str, cols)) + "}": m for cols, m in data.minors},
        "gcd": data.gcd,
        "schmidt_height_sq": data.schmidt_height_sq(),
        "segre_degree": data.segre_degree(),
    }


def _cmd_compare_embeddings(doc, args):
    a = _decode_exponents(doc, "exponents")
    b = _decode_exponents(doc, "exponents_b")
    rep = toric.compare_embeddings(a, b)
    return {
        "command": "compare-embeddings",
        "is_projection": rep.is_projection,
        "projection_degree": rep.projection_degree,
        "is_isomorphism": rep.is_isomorphism,
    }


def _write_cells_csv(path: str, rows: List[Dict[str, str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["symbol", "cell", "point_indices", "vertices", "value_at_sample"])
        writer.writeheader()
        writer.writerows(rows)


def _cells_rows(symbol: str, f) -> List[Dict[str, str]]:
    rows = []
    for idx, cell in enumerate(f.cells):
        rows.append(
            {
                "symbol": symbol,
                "cell": str(idx),
                "point_indices": " ".join(map(str, sorted(cell.indices))),
                "vertices": "; ".join(_vec(v) for v in cell.vertices),
                "value_at_sample": f.lifts[cell.sample_index].render(),
            }
        )
    return rows


def _cmd_chow_weight(doc, args):
    config = _decode_exponents(doc)
    tau = _decode_tau(doc, config)
    value = heights.chow_weight(config, tau)
    if args.cells_csv:
        f = heights.weight_roof(config, tau)
        _write_cells_csv(args.cells_csv, _cells_rows("tau", f))
    return {"command": "chow-weight", "chow_weight": value}


def _cmd_chow_weight_hypersurface(doc, args):
    if "monomials" not in doc:
        raise InputError("missing field 'monomials' (support of the equation)")
    mons = [_as_int_vector(r, f"monomials[{i}]") for i, r in enumerate(doc["monomials"])]
    if not mons:
        raise InputError("monomials: expected a nonempty list")
    tau = [_decode_loglinear(v, f"tau[{i}]") for i, v in enumerate(doc.get("tau", []))]
    if not tau:
        raise InputError("missing field 'tau'")
    try:
        value = heights.chow_weight_hypersurface(mons, tau)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"command": "chow-weight-hypersurface", "chow_weight": value}


def _cmd_height(doc, args):
    data = _decode_toric(doc)
    value = heights.normalized_height(data)
    if args.cells_csv:
        rows = []
        for label, vec in heights.adelic_weights(data.alpha):
            rows.extend(_cells_rows(str(label), heights.weight_roof(data.config, vec)))
        _write_cells_csv(args.cells_csv, rows)
    return {"command": "height", "height": value, "degree": toric.degree(data)}


def _cmd_point_height(doc, args):
    alpha = _decode_coefficients(doc, None)
    return {"command": "point-height", "height": heights.point_height(alpha)}


def _cmd_multiheight(doc, args):
    if "factors" not in doc or not isinstance(doc["factors"], list):
        raise InputError("missing field 'factors' (list of {exponents, coefficients})")
    configs = []
    alphas = []
    for i, f in enumerate(doc["factors"]):
        cfg = _decode_exponents(f)
        configs.append(cfg)
        alphas.append(_decode_coefficients(f, cfg))
    if "c" not in doc:
        raise InputError("missing field 'c'")
    c = _as_int_vector(doc["c"], "c")
    try:
        value = heights.multiheight(configs, alphas, c)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"command": "multiheight", "c": _vec(c), "multiheight": value}


def _cycle_report(cycle) -> List[Dict[str, Any]]:
    out = []
    for comp in cycle.components:
        out.append(
            {
                "facet_points": " ".join(map(str, sorted(comp.facet_indices))),
                "normal": _vec(comp.facet_normal),
                "lattice_index": comp.lattice_index,
                "multiplicity": comp.multiplicity,
                "component_degree": toric.degree(comp.data),
            }
        )
    return out


def _cmd_intersect_monomial(doc, args):
    data = _decode_toric(doc, coefficients_required=False)
    b = _decode_b(doc, data.config)
    cycle = heights.monomial_intersection(data, b)
    return {
        "command": "intersect-monomial",
        "divisor_degree": cycle.divisor.degree,
        "moment": _vec(cycle.divisor.moment),
        "cycle_degree": cycle.total_degree,
        "components": _cycle_report(cycle),
    }


def _cmd_bezout_degree(doc, args):
    data = _decode_toric(doc, coefficients_required=False)
    b = _decode_b(doc, data.config)
    cycle = heights.monomial_intersection(data, b)
    deg = toric.degree(data)
    lhs = cycle.total_degree
    rhs = cycle.divisor.degree * deg
    verified = lhs == rhs
    if all(x >= 0 for x in b) and not verified:
        raise PaperIdentityError("degree Bezout failed")
    return {
        "command": "bezout-degree",
        "cycle_degree": lhs,
        "D_times_degree": rhs,
        "verified": verified,
    }


def _cmd_bezout_chow(doc, args):
    config = _decode_exponents(doc)
    tau = _decode_tau(doc, config)
    b = _decode_b(doc, config)
    rep = heights.chow_bezout(config, tau, b)
    out = {
        "command": "bezout-chow",
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "correction": rep.correction,
        "chow_weight": rep.chow_weight_total,
        "verified": rep.equal,
    }
    if rep.effective_bound_ok is not None:
        out["effective_bound_ok"] = rep.effective_bound_ok
    return out


def _cmd_bezout_height(doc, args):
    data = _decode_toric(doc)
    b = _decode_b(doc, data.config)
    rep = heights.height_bezout(data, b)
    out = {
        "command": "bezout-height",
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "height": rep.height_total,
        "correction": rep.correction,
        "verified": rep.equal,
    }
    if rep.effective_bound_ok is not None:
        out["effective_bound_ok"] = rep.effective_bound_ok
    return out


def _cmd_ess_min(doc, args):
    data = _decode_toric(doc)
    em = heights.essential_minimum(data)
    return {
        "command": "ess-min",
        "essential_minimum": em.value,
        "dominant_exponent": _vec(em.dominant_exponent),
        "status": "proved",
    }


def _cmd_minima(doc, args):
    data = _decode_toric(doc)
    profile = heights.successive_minima(data)
    entries = []
    for e in profile.entries:
        entries.append(
            {
                "i": e.index,
                "value": e.value if e.value is not None else "unknown",
                "status": "proved" if e.proved else "hypothesis-failed",
                "face_points": " ".join(map(str, sorted(e.face_indices))) if e.face_indices else "",
            }
        )
    return {"command": "minima", "entries": entries, "all_proved": profile.all_proved}


def _cmd_zhang_check(doc, args):
    data = _decode_toric(doc)
    rep = heights.zhang_check(data)
    return {
        "command": "zhang-check",
        "minima": [e.value for e in rep.minima.entries],
        "height": rep.height,
        "degree": rep.degree,
        "verified": rep.lower_ok and rep.upper_ok,
    }


def _cmd_zhang_family(doc, args):
    if "family" not in doc or not isinstance(doc["family"], dict):
        raise InputError("missing field 'family' ({n, mu, nu, eps1, eps2})")
    fam = doc["family"]
    for key in ("n", "mu", "nu", "eps1", "eps2"):
        if key not in fam:
            raise InputError(f"family: missing field {key!r}")
    n = fam["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError("family.n must be a positive integer")
    mu = [_as_fraction(x, f"family.mu[{i}]") for i, x in enumerate(fam["mu"])]
    nu = _as_fraction(fam["nu"], "family.nu")
    eps1 = _as_fraction(fam["eps1"], "family.eps1")
    eps2 = _as_fraction(fam["eps2"], "family.eps2")
    try:
        rep = heights.zhang_family(n, mu, nu, eps1, eps2)
    except heights.InfeasibleParametersError as e:
        raise InputError(str(e)) from None
    return {
        "command": "zhang-family",
        "d": rep.d,
        "k": rep.k,
        "f": rep.f,
        "kummer_denominator": rep.denominator,
        "exponents": [_vec(p) for p in rep.data.config.points],
        "coefficients": [a.render() for a in rep.data.alpha],
        "degree": rep.degree,
        "height": rep.height,
        "theta": rep.theta,
        "minima": [e.value for e in rep.minima.entries],
        "verified": rep.roof_error_ok and rep.target_ok,
    }


def _cmd_bounds(doc, args):
    data = _decode_toric(doc)
    rep = heights.height_degree_bounds(data)
    return {
        "command": "bounds",
        "lower": rep.lower,
        "height_over_degree": rep.ratio,
        "upper": rep.upper,
        "verified": rep.ok,
    }


HANDLERS = {
    "degree": _cmd_degree,
    "multidegree": _cmd_multidegree,
    "kernel": _cmd_kernel,
    "ideal": _cmd_ideal,
    "from-ideal": _cmd_from_ideal,
    "obstruction": _cmd_obstruction,
    "sandwich": _cmd_sandwich,
    "pluecker": _cmd_pluecker,
    "compare-embeddings": _cmd_compare_embeddings,
    "chow-weight": _cmd_chow_weight,
    "chow-weight-hypersurface": _cmd_chow_weight_hypersurface,
    "height": _cmd_height,
    "point-height": _cmd_point_height,
    "multiheight": _cmd_multiheight,
    "intersect-monomial": _cmd_intersect_monomial,
    "bezout-degree": _cmd_bezout_degree,
    "bezout-chow": _cmd_bezout_chow,
    "bezout-height": _cmd_bezout_height,
    "ess-min": _cmd_ess_min,
    "minima": _cmd_minima,
    "zhang-check": _cmd_zhang_check,
    "zhang-family": _cmd_zhang_family,
    "bounds": _cmd_bounds,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="toricinv",
        description="Exact invariants of projective toric varieties.",
    )
    parser.add_argument("command", choices=sorted(HANDLERS))
    parser.add_argument("input", nargs="?", help="input document (YAML/JSON); '-' or omitted reads stdin")
    parser.add_argument("--json", action="store_true", help="emit the report as JSON")
    parser.add_argument("--digits", type=int, default=None, metavar="K",
                        help="add decimal approximations with K digits and an error bound")
    parser.add_argument("--precision-cap", type=int, default=None, metavar="BITS",
                        help="hard cap for certified sign evaluation")
    parser.add_argument("--cells-csv", default=None, metavar="PATH",
                        help="write subdivision cells as CSV (chow-weight, height)")
    args = parser.parse_args(argv)

    def fail(code: int, name: str, reason: str) -> int:
        _print_report({"error": name, "reason": reason}, args.json, None)
        return code

    if args.precision_cap is not None:
        try:
            set_precision_cap(args.precision_cap)
        except ValueError as e:
            return fail(EXIT_INPUT_INVALID, "input-invalid", str(e))
    try:
        if args.input and args.input != "-":
            with open(args.input) as fh:
                raw = fh.read()
        else:
            raw = sys.stdin.read()
        doc = yaml.safe_load(raw)
        if doc is None:
            doc = {}
        if not isinstance(doc, dict):
            raise InputError("the input document must be a mapping")
        report = HANDLERS[args.command](doc, args)
    except InputError as e:
        return fail(EXIT_INPUT_INVALID, "input-invalid", str(e))
    except (HypothesisNotSatisfiedError, MinimaNotProvedError) as e:
        return fail(EXIT_HYPOTHESIS, "hypothesis-not-satisfied", str(e))
    except CharacterNotRepresentable as e:
        return fail(EXIT_CHARACTER, "character-not-representable", str(e))
    except PrecisionCapExceeded as e:
        return fail(EXIT_PRECISION, "precision-cap-exceeded", str(e))
    except PaperIdentityError as e:
        return fail(EXIT_ASSERTION, "assertion-violated", str(e))
    except (ValueError, OSError, yaml.YAMLError) as e:
        return fail(EXIT_INPUT_INVALID, "input-invalid", str(e))
    _print_report(report, args.json, args.digits)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
