"""Command line front end: compute, asymptotic, profile, convergence, verify.

Exit codes: 0 ok, 2 domain or guard violation, 3 convergence or precision
failure, 4 verification mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from importlib import resources

import mpmath

from .dequad import convergence_levels, integrand_normalized, make_plan
from .errors import ConvergenceError, DomainError, PrecisionError
from .mpkernel import (
    BigSci,
    BigSciComplex,
    MPComplex,
    bits_to_digits,
    cexp,
    format_bigsci,
    working_prec,
)
from .oracle import gamma_oracle_series
from .saddle import CONTOUR_MODES, cutoff_q, saddle_point
from .stieltjes import DEFAULT_GUARD, METHODS, GammaRequest, GammaResult, gamma

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4
GUARD_ENV = "STIELTJES_PREC_GUARD"
FORMATS = ("plain", "json", "csv")
_POWER_RE = re.compile(r"^(\d+)\^(\d+)$")


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    n: int
    v: str
    digits: int
    M: int | None = None
    eps: str = "unit"
    method: str = "auto"
    format: str = "plain"
    out: str | None = None
    golden: bool = False
    golden_file: str | None = None
    guard: int = DEFAULT_GUARD
    q_digits: int = 720
    levels: int = 5


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def parse_n(text: str) -> int:
    """Exact integer from "12345" or "b^k" (e.g. "10^100"); never via float."""
    t = text.strip()
    if t.isdigit():
        return int(t)
    m = _POWER_RE.match(t)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    pos = next(
        (i for i, ch in enumerate(t) if not (ch.isdigit() or (ch == "^" and i > 0))),
        len(t),
    )
    raise argparse.ArgumentTypeError(
        f"cannot parse n {text!r} at position {pos}: expected digits or b^k such as 10^100"
    )


def parse_v(text: str) -> str:
    try:
        MPComplex.of(text, 64)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse v {text!r}: {exc}") from None
    return text.strip()


def _guard_from_env() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_GUARD
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None


_DEFAULT_DIGITS = {
    "compute": 50,
    "asymptotic": 50,
    "profile": 30,
    "convergence": 1000,
    "verify": 50,
}
_DEFAULT_N = {"convergence": "10^100", "profile": "10^5"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gstieltjes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in ("compute", "asymptotic", "profile", "convergence", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=parse_n, default=None)
        sp.add_argument("--v", type=parse_v, default="1")
        sp.add_argument("--digits", type=int, default=None)
        sp.add_argument("--M", type=int, default=None)
        sp.add_argument("--eps", choices=CONTOUR_MODES, default="unit")
        sp.add_argument("--method", choices=METHODS, default="auto")
        sp.add_argument("--format", choices=FORMATS, default="plain")
        sp.add_argument("--out", default=None)
        if name == "verify":
            sp.add_argument("--golden", action="store_true")
            sp.add_argument("--golden-file", default=None)
        if name == "convergence":
            sp.add_argument("--q-digits", type=int, default=720,
                            help="N used for the cutoff q (safety 1.0)")
            sp.add_argument("--levels", type=int, default=5)
    return p


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    sub = ns.subcommand
    n = ns.n if ns.n is not None else parse_n(_DEFAULT_N.get(sub, "0"))
    return CliConfig(
        subcommand=sub,
        n=n,
        v=ns.v,
        digits=ns.digits if ns.digits is not None else _DEFAULT_DIGITS[sub],
        M=ns.M,
        eps=ns.eps,
        method="asymptotic" if sub == "asymptotic" else ns.method,
        format=ns.format,
        out=ns.out,
        golden=getattr(ns, "golden", False),
        golden_file=getattr(ns, "golden_file", None),
        guard=_guard_from_env(),
        q_digits=getattr(ns, "q_digits", 720),
        levels=getattr(ns, "levels", 5),
    )


# ---------------------------------------------------------------------------
# result serialization
# ---------------------------------------------------------------------------


def _signed(part: BigSci) -> str:
    if part.is_zero:
        return "0"
    return ("-" if part.sign < 0 else "") + part.mantissa


def _nstr(x, digits: int = 17) -> str | None:
    if x is None:
        return None
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=1, max_fixed=0)


def result_fields(res: GammaResult) -> dict:
    """Flat JSON-ready dict; integers that may be huge are strings."""
    req = res.request
    plan = res.plan
    return {
        "n": str(req.n),
        "v": str(req.v),
        "digits": req.digits,
        "method": res.method_used,
        "mantissa_re": _signed(res.value.re),
        "exponent_re": str(res.value.re.exponent),
        "mantissa_im": _signed(res.value.im),
        "exponent_im": str(res.value.im.exponent),
        "est_error": _nstr(res.est_error),
        "elapsed_s": round(res.elapsed, 6),
        "M": plan.M if plan is not None else None,
        "q": _nstr(plan.q) if plan is not None else None,
    }


def _part(mantissa: str, exponent: str) -> BigSci:
    if mantissa == "0":
        return BigSci.zero()
    sign = -1 if mantissa.startswith("-") else 1
    return BigSci(sign, mantissa.lstrip("-"), int(exponent))


def value_from_fields(fields: dict) -> BigSciComplex:
    return BigSciComplex(
        _part(fields["mantissa_re"], fields["exponent_re"]),
        _part(fields["mantissa_im"], fields["exponent_im"]),
    )


def emit_json(fields: dict) -> str:
    return json.dumps(fields, indent=1)


def parse_json(text: str) -> dict:
    fields = json.loads(text)
    fields["n_int"] = int(fields["n"])
    fields["value"] = value_from_fields(fields)
    return fields


def _render(fields: dict, fmt: str, value: BigSciComplex) -> str:
    if fmt == "json":
        return emit_json(fields) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        w.writerow(fields)
        return buf.getvalue()
    shown = str(value.re) if value.is_real else str(value)
    diag = [f"method={fields['method']}"]
    for key in ("M", "q", "est_error"):
        if fields[key] is not None:
            diag.append(f"{key}={fields[key]}")
    diag.append(f"elapsed={fields['elapsed_s']:.3f}s")
    return f"{shown}\n# {' '.join(diag)}\n"


def _rows_text(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _request(cfg: CliConfig) -> GammaRequest:
    return GammaRequest(
        n=cfg.n, v=cfg.v, digits=cfg.digits, method=cfg.method,
        contour_mode=cfg.eps, M=cfg.M, guard=cfg.guard,
    )


def cmd_compute(cfg: CliConfig) -> str:
    res = gamma(_request(cfg))
    return _render(result_fields(res), cfg.format, res.value)


def cmd_asymptotic(cfg: CliConfig) -> str:
    return cmd_compute(cfg)


def _saddle_for(cfg: CliConfig, digits: int):
    prec = working_prec(digits, cfg.n, cfg.guard)
    a = MPComplex.of(cfg.v, prec) - MPComplex.of("0.5", prec)
    return saddle_point(cfg.n, a, bits_to_digits(prec), cfg.eps)


def profile_rows(cfg: CliConfig) -> list[tuple]:
    """(y, f(y)/f(0)) on the quadrature grid of the a = v - 1/2 contour."""
    sd = _saddle_for(cfg, cfg.digits)
    plan = make_plan(sd, cfg.digits, M=cfg.M or 201)
    f0 = integrand_normalized(0, sd)
    rows = []
    for k in range(plan.M):
        y = mpmath.mp.make_mpf(plan.node(k))
        r = integrand_normalized(MPComplex.real(y, sd.prec), sd) / f0
        rows.append((y, r.re_mpf, r.im_mpf))
    return rows


def cmd_profile(cfg: CliConfig) -> str:
    rows = [[_nstr(y), _nstr(re), _nstr(im)] for y, re, im in profile_rows(cfg)]
    return _rows_text(["y", "re_ratio", "im_ratio"], rows, "json" if cfg.format == "json" else "csv")


def convergence_rows(cfg: CliConfig) -> list[tuple[int, mpmath.mpf, mpmath.mpf]]:
    """(m, h, relative error against the next finer grid) for m < levels."""
    sd = _saddle_for(cfg, cfg.digits)
    q = cutoff_q(sd, cfg.q_digits, safety=1.0)
    rows, ref = convergence_levels(sd, q, M0=cfg.M or 101, levels=cfg.levels)
    out = []
    for m, h, s in rows:
        rel = (s - ref).abs() / ref.abs()
        out.append((m, h, rel.re_mpf))
    return out


def cmd_convergence(cfg: CliConfig) -> str:
    rows = [[str(m), _nstr(h), _nstr(e)] for m, h, e in convergence_rows(cfg)]
    return _rows_text(["m", "h", "rel_err"], rows, "json" if cfg.format == "json" else "csv")


def load_golden(path: str | None = None) -> dict:
    if path is None:
        text = resources.files("gstieltjes").joinpath("data/golden.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def _check_part(log_value: MPComplex, want: dict | None, real: bool, imag: bool) -> tuple[bool, str]:
    if want is None:
        return True, ""
    digits = len(want["mantissa"].lstrip("-").replace(".", ""))
    got = format_bigsci(log_value, digits, real=real)
    part = got.im if imag else got.re
    ok = _signed(part) == want["mantissa"] and str(part.exponent) == want["exponent"]
    return ok, f"{_signed(part)}e{part.exponent}"


def verify_report(cfg: CliConfig) -> tuple[bool, list[str]]:
    lines, ok_all = [], True
    worst = None
    for v in ("0.5", "1", "2+3i"):
        oracle = gamma_oracle_series(10, v, cfg.digits)
        for n in range(11):
            res = gamma(GammaRequest(n=n, v=v, digits=cfg.digits, guard=cfg.guard))
            diff = _agreement(res.log_value, oracle[n])
            worst = diff if worst is None else min(worst, diff)
            good = diff >= cfg.digits
            ok_all &= good
            if not good:
                lines.append(f"FAIL oracle n={n} v={v}: {diff:.1f} digits ({res.value})")
    lines.append(f"oracle n=0..10 x v in {{1/2, 1, 2+3i}}: worst agreement {worst:.1f} digits")
    if cfg.golden or cfg.golden_file:
        data = load_golden(cfg.golden_file)
        for entry in data["quadrature"]:
            req = GammaRequest(n=parse_n(entry["n"]), v=entry["v"], digits=data["digits"], guard=cfg.guard)
            res = gamma(req)
            real = entry["im"] is None
            ok_re, got_re = _check_part(res.log_value, entry["re"], real, False)
            ok_im, got_im = _check_part(res.log_value, entry["im"], real, True)
            good = ok_re and ok_im
            ok_all &= good
            lines.append(f"{'ok  ' if good else 'FAIL'} golden {entry['name']}")
            if not ok_re:
                lines.append(f"     re: got {got_re}")
            if not ok_im:
                lines.append(f"     im: got {got_im}")
    return ok_all, lines


def _agreement(log_value: MPComplex, ref: MPComplex) -> float:
    x = cexp(log_value.with_prec(max(log_value.prec, ref.prec)))
    d = x - ref
    if d.is_zero:
        return float("inf")
    return ref.log10_abs() - d.log10_abs()


def cmd_verify(cfg: CliConfig) -> tuple[str, int]:
    ok, lines = verify_report(cfg)
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


_COMMANDS = {
    "compute": cmd_compute,
    "asymptotic": cmd_asymptotic,
    "profile": cmd_profile,
    "convergence": cmd_convergence,
}


def run(cfg: CliConfig) -> tuple[str, int]:
    if cfg.subcommand == "verify":
        return cmd_verify(cfg)
    return _COMMANDS[cfg.subcommand](cfg), EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text, code = run(cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
