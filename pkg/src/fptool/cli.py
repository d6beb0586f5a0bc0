"""Command-line front end: ``fptool <command> [options]`` or ``fptool --jobs FILE...``.

Output is one ``key=value`` line per item.  With ``--format structured`` a
JSON block follows a ``#structured`` marker line; ``parse_report`` reads both
parts back.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage, parse
or precondition error, 3 resource ceiling hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import fsing, linkage
from .errors import FptoolError, ParseError, PreconditionError, ResourceCeilingError
from .frobenius import pe_root, trace
from .groebner import Ideal, colon, dimension_height, set_spair_mode
from .jobfile import COMMANDS, REQUIRED_ASSUMPTIONS, JobSpec, load_job, validate
from .report import FAIL

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CEILING = 0, 1, 2, 3
STRUCTURED_MARKER = "#structured"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _split(text):
    return [s.strip() for s in text.split(",")] if text else []


def _ints(text, flag):
    out = []
    for i, s in enumerate(_split(text)):
        try:
            out.append(int(s))
        except ValueError:
            raise ParseError(f"{flag}: expected an integer in entry {i + 1}, got {s!r}") from None
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime characteristic")
    common.add_argument("--vars", type=_split, default=[], help="comma-separated variables")
    common.add_argument("--ideal", type=_split, default=[], help="comma-separated generators")
    common.add_argument("--ideal2", type=_split, default=[], help="second ideal (colon)")
    common.add_argument("--poly", help="a single polynomial (trace)")
    common.add_argument("--point", help="comma-separated coordinates of a rational point (nu, fpt)")
    common.add_argument("--order", default="grevlex", choices=("grevlex", "lex"))
    common.add_argument("--e", type=int, default=1, help="Frobenius level")
    common.add_argument("--emax", dest="e_max", type=int, default=fsing.DEFAULT_E_MAX)
    common.add_argument("--t", help="pair exponent a/b")
    common.add_argument("--c", type=int, help="height (default: computed)")
    common.add_argument("--k", type=int, default=1, help="index of the test element f_k")
    common.add_argument("--N", type=int, help="exponent of the test element f_k^N")
    common.add_argument("--q", type=int, help="q for split")
    common.add_argument("--beta", help="comma-separated exponent vector for split")
    common.add_argument("--coeffs", type=_split, help="coefficients a_j for extend")
    common.add_argument("--reduction-size", dest="reduction_size", type=int)
    common.add_argument("--assume-unmixed", dest="assume_unmixed", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--assume-reduced", dest="assume_reduced", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--format", dest="fmt", default="plain", choices=("plain", "structured"))
    common.add_argument("--spair-mode", dest="spair_mode", default="sequential", choices=("sequential", "parallel"))

    parser = _Parser(prog="fptool", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _spec_from_args(ns):
    beta = None if ns.beta is None else _ints(ns.beta, '--beta')
    point = None if ns.point is None else _split(ns.point)
    spec = JobSpec(
        command=ns.command, p=ns.p, vars=ns.vars, ideal=ns.ideal, ideal2=ns.ideal2,
        poly=ns.poly, point=point, order=ns.order, e=ns.e, e_max=ns.e_max, t=ns.t, c=ns.c,
        k=ns.k, N=ns.N, q=ns.q, beta=beta, coeffs=ns.coeffs, reduction_size=ns.reduction_size,
        assume_unmixed=ns.assume_unmixed, assume_reduced=ns.assume_reduced,
    )
    return validate(spec)


# ---------------------------------------------------------------------------
# command bodies: each returns (values, report or None)
# ---------------------------------------------------------------------------


def _point_ideal(spec, ring):
    if spec.point is None:
        return None
    if len(spec.point) != ring.nvars:
        raise ParseError(f"--point needs {ring.nvars} coordinates, got {len(spec.point)}")
    gens = []
    for v, a in zip(ring.vars, spec.point):
        try:
            gens.append(ring.var(v) - ring.parse(a))
        except ParseError as exc:
            raise ParseError(f"point coordinate for {v}: {exc.message}", exc.position, a) from None
    return Ideal(ring, gens)


def _cmd_trace(spec):
    ring = spec.ring()
    if spec.poly is None:
        raise ParseError("missing key 'poly'")
    return {"trace": str(trace(ring.parse(spec.poly), spec.e))}, None


def _cmd_root(spec):
    I = spec.parsed_ideal(spec.ring())
    return {"root": str(pe_root(I, spec.e))}, None


def _cmd_gb(spec):
    I = spec.parsed_ideal(spec.ring())
    return {"gb": str(I.groebner())}, None


def _cmd_colon(spec):
    ring = spec.ring()
    I = spec.parsed_ideal(ring)
    J = spec.parsed_ideal(ring, "ideal2")
    return {"colon": str(colon(I, J))}, None


def _cmd_dim(spec):
    dim, height = dimension_height(spec.parsed_ideal(spec.ring()))
    return {"dim": str(dim), "height": str(height)}, None


def _cmd_nu(spec):
    ring = spec.ring()
    I = spec.parsed_ideal(ring)
    return {"nu": str(fsing.nu(I, _point_ideal(spec, ring), spec.e))}, None


def _cmd_fpt(spec):
    ring = spec.ring()
    I = spec.parsed_ideal(ring)
    b = fsing.fpt_bounds(I, spec.e_max, _point_ideal(spec, ring))
    values = {f"nu_{ring.p ** e}": str(v) for e, v in b.nu_values}
    values["lower"] = str(b.lower)
    values["upper"] = "none" if b.upper is None else str(b.upper)
    values["interval"] = b.interval()
    return values, None


def _cmd_test_ideal(spec):
    I = spec.parsed_ideal(spec.ring())
    res = fsing.test_ideal(I, spec.rational_t(), spec.e_max)
    values = {"tau": str(res.ideal), "stabilized": "true" if res.stabilized else "false"}
    for e, contribution in res.per_level:
        values[f"level_{e}"] = str(contribution)
    return values, None


def _cmd_fpure(spec):
    I = spec.parsed_ideal(spec.ring())
    ok = fsing.is_f_pure_level(I, spec.rational_t(), spec.e)
    return {"f_pure": "true" if ok else "false"}, None


def _cmd_ein(spec):
    I = spec.parsed_ideal(spec.ring())
    t = None if spec.t is None else spec.rational_t()
    rep = fsing.verify_ein(I, spec.c, t, spec.e_max)
    return rep.values, rep


def _link(spec):
    I = spec.parsed_ideal(spec.ring())
    return linkage.generic_link(I, spec.c)


def _cmd_link(spec):
    lk = _link(spec)
    values = {"c": str(lk.c), "r": str(lk.r), "S_vars": ",".join(lk.ext.vars)}
    for i, g in enumerate(lk.g, start=1):
        values[f"g_{i}"] = str(g)
    values["J"] = str(lk.J)
    return values, None


def _cmd_geomcheck(spec):
    rep = linkage.verify_geometric_link(_link(spec))
    return rep.values, rep


def _cmd_paramtest(spec):
    lk = _link(spec)
    N = spec.N if spec.N is not None else linkage.default_N(lk, spec.e_max)
    trunc = linkage.param_test_submodule(lk, spec.k, N, spec.e_max)
    closure, rounds = linkage.param_test_closure(lk, spec.k, N)
    values = {
        "k": str(spec.k),
        "N": str(N),
        "e_max": str(spec.e_max),
        "truncated": str((trunc + lk.J).reduced()),
        "closure": str(closure),
        "closure_rounds": str(rounds),
    }
    return values, None


def _cmd_thm33(spec):
    rep = linkage.theorem33_compare(_link(spec), spec.e_max, spec.N, spec.k, spec.reduction_size)
    return rep.values, rep


def _cmd_frational(spec):
    I = spec.parsed_ideal(spec.ring())
    rep = linkage.f_rational_criterion(I, spec.e_max, spec.c)
    return rep.values, rep


def _cmd_extend(spec):
    if not spec.coeffs:
        raise ParseError("missing key 'coeffs'")
    lk = _link(spec)
    coeffs = []
    for j, text in enumerate(spec.coeffs, start=1):
        try:
            coeffs.append(lk.base.parse(text))
        except ParseError as exc:
            raise ParseError(f"coefficient a_{j} ({text!r}): {exc.message}", exc.position, text) from None
    rep = linkage.generator_extension_check(lk, coeffs)
    return rep.values, rep


def _cmd_fptcheck(spec):
    if spec.reduction_size is None:
        raise ParseError("fptcheck requires --reduction-size (job key reduction_size)")
    lk = _link(spec)
    rep = linkage.fpt_inequality_check(lk.base_ideal(), spec.reduction_size, spec.e_max, lk)
    return rep.values, rep


def _cmd_split(spec):
    for key in ("q", "c", "beta"):
        if getattr(spec, key) is None:
            raise ParseError(f"split requires --{key}")
    rows = linkage.split_exponents(spec.beta, spec.c, spec.q)
    return {f"alpha_{i}": "(" + ",".join(map(str, row)) + ")" for i, row in enumerate(rows, start=1)}, None


_COMMANDS = {
    "trace": _cmd_trace, "root": _cmd_root, "gb": _cmd_gb, "colon": _cmd_colon,
    "dim": _cmd_dim, "nu": _cmd_nu, "fpt": _cmd_fpt, "test-ideal": _cmd_test_ideal,
    "fpure": _cmd_fpure, "ein": _cmd_ein, "link": _cmd_link, "geomcheck": _cmd_geomcheck,
    "paramtest": _cmd_paramtest, "thm33": _cmd_thm33, "frational": _cmd_frational,
    "extend": _cmd_extend, "fptcheck": _cmd_fptcheck, "split": _cmd_split,
}


def _gate(spec):
    for name in REQUIRED_ASSUMPTIONS.get(spec.command, ()):
        value = getattr(spec, f"assume_{name}")
        if value is None:
            raise ParseError(
                f"{spec.command} requires --assume-{name} (job key assume_{name}): I must be {name}"
            )
        if value is False:
            raise PreconditionError(
                f"{spec.command} needs I {name}; it was declared not {name} (--no-assume-{name})"
            )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _payload(spec, values, rep):
    checks = []
    if rep is not None:
        for c in rep.checks:
            checks.append({
                "name": c.name, "status": c.status, "detail": c.detail,
                "witness": list(c.witness), "e_max": c.e_max,
            })
    return {
        "command": spec.command,
        "assumptions": {k: v for k, v in sorted(spec.assumptions().items())},
        "values": dict(values),
        "checks": checks,
        "result": None if rep is None else ("fail" if any(c["status"] == FAIL for c in checks) else "pass"),
    }


def render(payload, fmt="plain"):
    lines = []
    for name, value in payload["assumptions"].items():
        state = "asserted by caller, not verified" if value else "declared false"
        lines.append(f"assume.{name}={'true' if value else 'false'} ({state})")
    for key, value in payload["values"].items():
        lines.append(f"{key}={value}")
    for c in payload["checks"]:
        lines.append(f"check.{c['name']}={c['status']}")
        if c["detail"]:
            lines.append(f"check.{c['name']}.detail={c['detail']}")
        if c["witness"]:
            lines.append(f"check.{c['name']}.witness={'; '.join(c['witness'])}")
        if c["e_max"] is not None:
            lines.append(f"check.{c['name']}.e_max={c['e_max']}")
    if payload["result"] is not None:
        lines.append(f"result={payload['result']}")
    if fmt == "structured":
        lines.append(STRUCTURED_MARKER)
        lines.append(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def parse_report(text):
    """Read rendered output back into (line values, structured payload or None)."""
    head, _, tail = text.partition(STRUCTURED_MARKER + "\n")
    lines = {}
    for line in head.splitlines():
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"report line without '=': {line!r}")
        lines[key] = value
    payload = json.loads(tail) if tail.strip() else None
    return lines, payload


def execute(spec, fmt="plain"):
    """Run one job; returns (stdout text, stderr text, exit code)."""
    try:
        _gate(spec)
        values, rep = _COMMANDS[spec.command](spec)
    except ResourceCeilingError as exc:
        return "", f"error: {exc}\n", EXIT_CEILING
    except FptoolError as exc:
        return "", f"error: {exc}\n", EXIT_USAGE
    payload = _payload(spec, values, rep)
    code = EXIT_FAIL if payload["result"] == "fail" else EXIT_OK
    return render(payload, fmt), "", code


def _run_batch(paths, fmt, out, err):
    def one(path):
        try:
            spec = load_job(path)
        except FptoolError as exc:
            return "", f"error: {exc}\n", EXIT_USAGE
        return execute(spec, fmt)

    with ThreadPoolExecutor(max_workers=min(4, len(paths)) or 1) as pool:
        results = list(pool.map(one, paths))
    worst = EXIT_OK
    for path, (text, msg, code) in zip(paths, results):
        with open(f"{path}.out", "w", encoding="utf-8") as fh:
            fh.write(text or msg)
        out.write(f"job={path} exit={code}\n")
        if msg:
            err.write(f"{path}: {msg}")
        worst = max(worst, code)
    return worst


def _batch_parser():
    parser = _Parser(prog="fptool")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--job", help="run one job file")
    group.add_argument("--jobs", nargs="+", help="run several job files, writing FILE.out for each")
    parser.add_argument("--format", dest="fmt", default="plain", choices=("plain", "structured"))
    parser.add_argument("--spair-mode", dest="spair_mode", default="sequential", choices=("sequential", "parallel"))
    return parser


def run(argv=None, out=None, err=None):
    """Entry point for tests and ``main``; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if argv and argv[0] in ("--job", "--jobs"):
            ns = _batch_parser().parse_args(argv)
            set_spair_mode(ns.spair_mode)
            if ns.jobs:
                return _run_batch(ns.jobs, ns.fmt, out, err)
            spec = load_job(ns.job)
        else:
            ns = build_parser().parse_args(argv)
            set_spair_mode(ns.spair_mode)
            spec = _spec_from_args(ns)
    except FptoolError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    text, msg, code = execute(spec, ns.fmt)
    out.write(text)
    err.write(msg)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
