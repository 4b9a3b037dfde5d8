"""Batch command-line front end: expand | verify | radial | catalog.

Reports are deterministic by construction: no timestamps, sorted JSON
keys, numeric strings rendered at fixed precision, and the full run
configuration echoed into every report header.  Exit codes are the only
process-level contract (0 ok, 1 mismatch/fail, 2 unknown name,
3 no applicable theorem case, 4 malformed zeta).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp

from . import bilateral, catalog, klein, radial
from .errors import MockradError, UnknownFunction

SCHEMA = "mockrad/1"

# (label, real part, imaginary part) with exact rational parts
KLEIN_TAUS = (
    ("2i", (0, 1), (2, 1)),
    ("1/3+2i", (1, 3), (2, 1)),
    ("-1/4+i", (-1, 4), (1, 1)),
    ("1/7+3i/2", (1, 7), (3, 2)),
    ("i", (0, 1), (1, 1)),
)


@dataclass
class RunConfig:
    precision_bits: int = 128
    trunc_order: int = 200
    grid: str = "4..12"
    tolerance: float = 1e-2
    output_dir: str = ""
    format: str = "text"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision-bits must be >= 64")
        if self.trunc_order < 50:
            raise ValueError("trunc-order must be >= 50")
        if self.format not in ("json", "csv", "text"):
            raise ValueError("format must be json, csv or text")
        lo, _, hi = self.grid.partition("..")
        self.j_lo, self.j_hi = int(lo), int(hi)
        if not (0 < self.j_lo <= self.j_hi):
            raise ValueError("grid must be j0..j1 with 0 < j0 <= j1")

    def to_json_dict(self) -> dict:
        return {
            "precision_bits": self.precision_bits,
            "trunc_order": self.trunc_order,
            "grid": self.grid,
            "tolerance": repr(self.tolerance),
            "format": self.format,
        }


_CONFIG_KEYS = {
    "precision-bits": ("precision_bits", int),
    "trunc-order": ("trunc_order", int),
    "grid": ("grid", str),
    "tolerance": ("tolerance", float),
    "output-dir": ("output_dir", str),
    "format": ("format", str),
}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Flat key=value config file; flags override; env overrides precision only."""
    values: dict = {}
    if path:
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, eq, value = line.partition("=")
            key = key.strip()
            if not eq or key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            attr, cast = _CONFIG_KEYS[key]
            values[attr] = cast(value.strip())
    env_prec = os.environ.get("MOCKRAD_PRECISION")
    if env_prec:
        values["precision_bits"] = int(env_prec)
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return RunConfig(**values)


def _emit(doc: dict, config: RunConfig, stem: str) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(text)
    return text


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------

def cmd_expand(name: str, order: int, config: RunConfig, out=sys.stdout) -> int:
    try:
        if name.startswith("B:"):
            series = bilateral.bilateral_combination(name[2:], order)
        else:
            series = catalog.expand_mock(name, order)
    except UnknownFunction as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = [{"exponent": str(e), "numerator": str(c.numerator),
             "denominator": str(c.denominator)} for e, c in series.items()]
    doc = {"schema": SCHEMA, "config": config.to_json_dict(),
           "name": name, "order": order, "coefficients": rows}
    text = _emit(doc, config, f"expand_{name.replace(':', '_')}")
    if config.format == "json":
        out.write(text)
    else:
        for row in rows:
            out.write(f"q^{row['exponent']}\t{row['numerator']}/{row['denominator']}\n")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_order5(trunc: int, fault=None):
    reports = []
    direct_order = min(trunc, 100)
    for name in ("5:f0", "5:f1", "5:psi0", "5:psi1", "5:F0", "5:F1", "5:phi0", "5:phi1"):
        comb = bilateral.bilateral_combination(name, trunc)
        if fault and fault[0] == name:
            comb = comb + catalog.FracPowerSeries.from_monomial(
                catalog.mono(fault[2], fault[1]), comb.known_order)
        prod = bilateral.modular_product(name, trunc)
        reports.append(bilateral.verify_identity(
            comb, prod, trunc, f"B({name}) combination", "modular product"))
        direct = bilateral.bilateral_direct(name, direct_order)
        reports.append(bilateral.verify_identity(
            comb, direct, direct_order, f"B({name}) combination", "two-sided sum"))
    pairs = [("5:f0", "5:psi0"), ("5:f1", "5:psi1")]
    for big, half in pairs:
        lhs = bilateral.bilateral_combination(big, trunc)
        rhs = bilateral.bilateral_combination(half, trunc).scaled(2)
        reports.append(bilateral.verify_identity(lhs, rhs, trunc,
                                                 f"B({big})", f"2 B({half})"))
    for name, tgt in (("5:chi0", "5:F0"), ("5:chi1", "5:F1")):
        lhs = bilateral.bilateral_combination(name, trunc)
        rhs = bilateral.bilateral_combination(tgt, trunc)
        reports.append(bilateral.verify_identity(lhs, rhs, trunc,
                                                 f"Bmod({name})", f"B({tgt})"))
    for name in ("5:chi0", "5:chi1"):
        alt = catalog.get_spec(name).eval_via
        lhs = catalog.expand_mock(name, trunc)
        acc = catalog.FracPowerSeries.zero(trunc)
        for coeff, sub, (sign, power, qshift) in alt:
            comp = catalog.expand_mock(sub, trunc + abs(qshift) + 1)
            if (sign, power) != (1, 1):
                comp = comp.substitute_power(sign, power)
            if qshift:
                comp = comp.times_monomial(catalog.mono(1, qshift))
            acc = acc + comp.scaled(coeff)
        reports.append(bilateral.verify_identity(lhs, acc.truncate(trunc), trunc,
                                                 name, f"{name} linear-combination form"))
    return reports


def _suite_watson(trunc: int, fault=None):
    reports = []
    zero = bilateral.FracPowerSeries.zero(trunc)
    for i in (1, 2, 3, 4):
        ci = bilateral.watson_c(i, trunc)
        if fault and fault[0] == f"C{i}":
            ci = ci + bilateral.FracPowerSeries.from_monomial(
                catalog.mono(fault[2], fault[1]), ci.known_order)
        reports.append(bilateral.verify_identity(ci, zero, trunc, f"C{i}", "0"))
    return reports


def _suite_order3(trunc: int, fault=None):
    trunc = max(trunc, 300)
    reports = []
    for name in ("3:phi", "3:psi", "3:nu"):
        comb = bilateral.bilateral_combination(name, trunc)
        reports.append(bilateral.verify_identity(
            comb, bilateral.modular_product(name, trunc), trunc,
            f"B({name}) combination", "eta quotient"))
        reports.append(bilateral.verify_identity(
            comb, bilateral.bilateral_direct(name, trunc), trunc,
            f"B({name}) combination", "two-sided sum"))
    lhs = bilateral.bilateral_combination("3:psi", trunc).scaled(2)
    reports.append(bilateral.verify_identity(
        lhs, bilateral.bilateral_combination("3:phi", trunc), trunc,
        "2 B(3:psi)", "B(3:phi)"))
    for which, target in (("phi", "3:phi"), ("nu", "3:nu")):
        inst = bilateral.one_psi_one_instance(which, trunc)
        reports.append(bilateral.verify_identity(
            inst, bilateral.modular_product(target, trunc), trunc,
            f"1psi1 instance ({which})", "eta quotient"))
    for label, lhs, rhs in bilateral.fine_relations(trunc):
        reports.append(bilateral.verify_identity(lhs, rhs, trunc,
                                                 label, "transformed sum"))
    return reports


def _suite_tables(order: int, trunc: int, fault=None):
    rows6 = ("6:lambda", "6:mu", "6:phi", "6:psi", "6:rho", "6:sigma", "6:nu", "6:xi")
    rows8 = ("8:S0", "8:S1", "8:T0", "8:T1")
    reports = []
    for name in rows6 if order == 6 else rows8:
        comb = bilateral.bilateral_combination(name, trunc)
        if fault and fault[0] == name:
            comb = comb + catalog.FracPowerSeries.from_monomial(
                catalog.mono(fault[2], fault[1]), comb.known_order)
        direct = bilateral.bilateral_direct(name, trunc)
        reports.append(bilateral.verify_identity(
            comb, direct, trunc, f"B({name}) combination", "two-sided sum"))
    if order == 6:
        comb = bilateral.bilateral_combination("6:lambda", trunc)
        reports.append(bilateral.verify_identity(
            comb, bilateral.modular_product("6:lambda", trunc), trunc,
            "B(6:lambda) combination", "modular product"))
    if order == 8:
        v0 = bilateral.bilateral_combination("8:V0", trunc)
        reports.append(bilateral.verify_identity(
            v0, v0.substitute_power(-1, 1).truncate(trunc), trunc,
            "B(8:V0)", "B(8:V0) at -q (even series)"))
        v1 = bilateral.bilateral_combination("8:V1", trunc)
        reports.append(bilateral.verify_identity(
            v1, v1.substitute_power(-1, 1).scaled(-1).truncate(trunc), trunc,
            "B(8:V1)", "-B(8:V1) at -q (odd series)"))
    return reports


def _make_tau(re_part, im_part) -> mp.mpc:
    return mp.mpc(mp.mpf(re_part[0]) / re_part[1], mp.mpf(im_part[0]) / im_part[1])


def _suite_klein(precision: int):
    """Residual checks; rendered as IdentityReport-like dicts."""
    threshold = mp.mpf(2) ** -32
    rows = []
    for tau_str, re_part, im_part in KLEIN_TAUS:
        tau = _make_tau(re_part, im_part)
        for which in ("G", "H"):
            res = klein.klein_lemma_residual(which, tau, precision)
            rows.append({
                "lhs": f"{which}(q) series side at tau={tau_str}",
                "rhs": f"{which} Klein quotient",
                "residual": mp.nstr(res, 8),
                "threshold": mp.nstr(threshold, 8),
                "status": "Verified" if res < threshold else "Mismatch",
            })
        res = klein.product_pair_residual(tau, precision)
        rows.append({
            "lhs": f"(q;q^5)(q^4;q^5) at tau={tau_str}",
            "rhs": "Klein-form rewrite",
            "residual": mp.nstr(res, 8),
            "threshold": mp.nstr(threshold, 8),
            "status": "Verified" if res < threshold else "Mismatch",
        })
    return rows


SUITES = ("order5", "order3", "order6", "order8", "watson", "klein", "all")


def cmd_verify(suite: str, config: RunConfig, out=sys.stdout, _inject_fault=None) -> int:
    """Run an identity suite; exit 0 iff everything verifies."""
    if suite not in SUITES:
        print(f"error: unknown suite {suite!r} (choose from {', '.join(SUITES)})",
              file=sys.stderr)
        return 2
    suites = ["order5", "order3", "order6", "order8", "watson", "klein"] \
        if suite == "all" else [suite]
    trunc = config.trunc_order
    all_rows = []
    failed = False
    for s in sorted(suites):
        if s == "klein":
            rows = _suite_klein(config.precision_bits)
        else:
            fn = {"order5": _suite_order5, "watson": _suite_watson,
                  "order3": _suite_order3,
                  "order6": lambda t, fault=None: _suite_tables(6, t, fault),
                  "order8": lambda t, fault=None: _suite_tables(8, t, fault)}[s]
            rows = [r.to_json_dict() for r in fn(trunc, _inject_fault)]
        for row in rows:
            row["suite"] = s
            if s in ("order6", "order8"):
                # transcribed base definitions: failures must surface provenance
                row["source"] = "cited-reference"
        all_rows.extend(rows)
        for row in rows:
            status = row["status"]
            if status != "Verified":
                failed = True
            if config.format == "text":
                detail = ""
                if "first_mismatch" in row:
                    fm = row["first_mismatch"]
                    detail = (f"  first mismatch at q^{fm['exponent']}:"
                              f" {fm['lhs']} vs {fm['rhs']}")
                if "residual" in row:
                    detail = f"  residual {row['residual']}"
                if status != "Verified" and row.get("source"):
                    detail += f"  [definition source: {row['source']}]"
                out.write(f"[{s}] {row['lhs']} = {row['rhs']}: {status}{detail}\n")
    doc = {"schema": SCHEMA, "config": config.to_json_dict(),
           "suite": suite, "reports": all_rows,
           "result": "fail" if failed else "ok"}
    text = _emit(doc, config, f"verify_{suite}")
    if config.format == "json":
        out.write(text)
    elif config.format == "text":
        out.write(f"{suite}: {'FAIL' if failed else 'ok'} ({len(all_rows)} identities)\n")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# radial
# ---------------------------------------------------------------------------

def cmd_radial(name: str, zeta: str, config: RunConfig, out=sys.stdout) -> int:
    try:
        h_str, _, m_str = zeta.partition("/")
        root = radial.RootOfUnity(int(h_str), int(m_str))
    except (ValueError, TypeError):
        print(f"error: malformed zeta {zeta!r}; expected h/m with gcd(h,m)=1",
              file=sys.stderr)
        return 4
    try:
        catalog.get_spec(name)
    except UnknownFunction as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    policy = radial.Policy(tol=config.tolerance, j_lo=config.j_lo,
                           j_hi=config.j_hi, precision=config.precision_bits)
    report = radial.check_limit(name, root, policy)
    doc = {"schema": SCHEMA, "config": config.to_json_dict()}
    doc.update(report.to_json_dict())
    stem = f"radial_{name.replace(':', '_')}_{root.h}_{root.m}"
    text = _emit(doc, config, stem)
    if config.format == "json":
        out.write(text)
    elif config.format == "csv":
        csv_text = report.to_csv()
        if config.output_dir:
            (Path(config.output_dir) / f"{stem}.csv").write_text(csv_text)
        out.write(csv_text)
    else:
        out.write(f"{name} at zeta={root}: {report.verdict}"
                  f" (case {report.case}, closed form {_fmt_c(report.closed_form)})\n")
        if report.residuals:
            out.write(f"  final residual {mp.nstr(report.residuals[-1], 6)}"
                      f" over {len(report.residuals)} grid points\n")
        if report.detail:
            out.write(f"  {report.detail}\n")
    if report.verdict == "pass":
        return 0
    if report.verdict == "skipped":
        return 3
    return 1


def _fmt_c(z) -> str:
    return mp.nstr(mp.mpc(z), 10)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def cmd_catalog(config: RunConfig, out=sys.stdout) -> int:
    doc = {"schema": SCHEMA,
           "catalog": json.loads(catalog.catalog_json()),
           "recipes": bilateral.recipes_json()}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "catalog.json").write_text(text)
    out.write(text)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--precision", type=int, dest="precision_bits",
                        help="working precision in bits (>= 64)")
    common.add_argument("--trunc", type=int, dest="trunc_order",
                        help="series truncation order (>= 50)")
    common.add_argument("--tol", type=float, dest="tolerance",
                        help="radial pass tolerance")
    common.add_argument("--grid", dest="grid", help="radial grid j0..j1 (r = 1 - 2^-j)")
    common.add_argument("--format", choices=("json", "csv", "text"), dest="format")
    common.add_argument("--out", dest="output_dir", help="directory for report files")

    p = argparse.ArgumentParser(
        prog="mockrad",
        description="exact q-series identity checker and radial-limit evaluator "
                    "for mock theta functions")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("expand", parents=[common],
                       help="exact expansion of a catalog or bilateral series")
    q.add_argument("name", help="catalog name (5:f0) or bilateral (B:5:f0)")
    q.add_argument("--order", type=int, default=50)

    v = sub.add_parser("verify", parents=[common], help="run an identity suite")
    v.add_argument("suite", choices=SUITES)

    r = sub.add_parser("radial", parents=[common],
                       help="radial-limit check at a root of unity")
    r.add_argument("name")
    r.add_argument("--zeta", required=True, help="h/m for zeta = e^(2 pi i h/m)")

    sub.add_parser("catalog", parents=[common], help="dump the catalog as JSON")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {attr: getattr(args, attr, None)
                 for attr in ("precision_bits", "trunc_order", "tolerance",
                              "grid", "format", "output_dir")}
    try:
        config = load_config(args.config, overrides)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "expand":
            return cmd_expand(args.name, args.order, config)
        if args.command == "verify":
            return cmd_verify(args.suite, config)
        if args.command == "radial":
            return cmd_radial(args.name, args.zeta, config)
        if args.command == "catalog":
            return cmd_catalog(config)
    except MockradError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
