"""Command-line entry point.

    frobrec compute    --a 2,2,2 --max-m 4 --format json
    frobrec verify     --a 3,3,3 --max-m 2
    frobrec invariants --a 2,3,7 --max-m 3 --format csv
    frobrec algebra    --a 2,3,4

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 reconstruction stalled or inconsistent.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .orbifold import new_orbifold
from .reconstruct import ReconstructionError, default_max_m, reconstruct
from .serialize import (
    alpha_csv,
    alpha_json,
    fmt_rational,
    from_json,
    header,
    to_csv,
    to_json,
    to_text,
)
from .series import Potential
from .verify import check_presentation, gw_table, limit_algebra, verify

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
COMMANDS = ("compute", "verify", "invariants", "algebra")
CACHE_ENV = "FROBREC_CACHE"

log = logging.getLogger("frobrec")


@dataclass
class RunConfig:
    A: tuple[int, int, int]
    max_m: Optional[int]
    command: str
    max_len: Optional[int] = None
    format: str = "text"
    out_path: Optional[str] = None
    cache_dir: Optional[str] = None
    no_verify: bool = False


def _triple(s: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a1,a2,a3, got {s!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {s!r}")
    return parts  # type: ignore[return-value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobrec",
        description="Reconstruct and verify genus-zero potentials of orbifold projective lines.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--a", required=True, type=_triple, help="orbifold orders a1,a2,a3 (sorted)")
        p.add_argument("--max-m", type=int, default=None, help="largest power of e^{t_mu} (required if chi <= 0)")
        p.add_argument("--max-len", type=int, default=None)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", dest="out_path", default=None)
        p.add_argument("--cache-dir", default=None, help=f"cache directory (env {CACHE_ENV})")
        if name == "compute":
            p.add_argument("--no-verify", action="store_true", help="skip the residual sweep")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# cache


def _cache_path(cfg: RunConfig) -> Optional[Path]:
    root = cfg.cache_dir or os.environ.get(CACHE_ENV)
    if not root:
        return None
    a = "-".join(map(str, cfg.A))
    return Path(root) / f"{a}_m{cfg.max_m}_l{cfg.max_len}_v{__version__}.json"


def _load_or_compute(cfg: RunConfig, verify_fresh: bool) -> tuple[Potential, bool]:
    """Returns (potential, already_verified)."""
    path = _cache_path(cfg)
    if path is not None and path.exists():
        log.info("cache hit %s", path)
        return from_json(path.read_text(encoding="utf-8")), True
    A = new_orbifold(*cfg.A)
    P = reconstruct(A, cfg.max_m, cfg.max_len)
    if not verify_fresh:
        return P, False
    rep = verify(P)
    if not rep.ok:
        _report_failures(rep)
        raise _VerificationFailed()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_json(P), encoding="utf-8")
    return P, True


class _VerificationFailed(Exception):
    pass


def _report_failures(rep) -> None:
    for inst, value in rep.failures[:20]:
        print(f"residual {value} at {inst}", file=sys.stderr)
    for d in rep.diagnosis:
        print(d, file=sys.stderr)


# ---------------------------------------------------------------------------
# renderers


def _render_report(P: Potential, rep, fmt: str) -> str:
    if fmt == "json":
        doc = header(P)
        doc.update(
            residuals_checked=rep.residuals_checked,
            equations_checked=rep.equations_checked,
            skipped=rep.skipped,
            failures=[{"instance": inst.describe(P.A), "value": fmt_rational(v)} for inst, v in rep.failures],
            homogeneity_ok=rep.homogeneity_ok,
            symmetry_ok=rep.symmetry_ok,
            algebra_ok=rep.algebra_ok,
        )
        return json.dumps(doc, separators=(",", ":")) + "\n"
    rows = [
        ("residuals_checked", rep.residuals_checked),
        ("equations_checked", rep.equations_checked),
        ("skipped", rep.skipped),
        ("failures", len(rep.failures)),
        ("homogeneity_ok", rep.homogeneity_ok),
        ("symmetry_ok", rep.symmetry_ok),
        ("algebra_ok", rep.algebra_ok),
    ]
    if fmt == "csv":
        return "key,value\n" + "".join(f"{k},{v}\n" for k, v in rows)
    return f"A = {P.A}  max_m = {P.max_m}\n" + "".join(f"{k}: {v}\n" for k, v in rows)


def _render_invariants(P: Potential, fmt: str) -> str:
    table = gw_table(P)
    if fmt == "json":
        doc = header(P)
        doc["invariants"] = [
            {"alpha": alpha_json(P.A, alpha), "m": m, "gw": fmt_rational(v)} for (alpha, m), v in table
        ]
        return json.dumps(doc, separators=(",", ":")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        w.writerow(["alpha", "m", "gw"])
        for (alpha, m), v in table:
            w.writerow([alpha_csv(P.A, alpha), m, fmt_rational(v)])
        return buf.getvalue()
    lines = [f"A = {P.A}  genus-0 invariants up to degree {P.max_m}"]
    for (alpha, m), v in table:
        ins = " ".join(f"D{i}{j}^{e}" if e > 1 else f"D{i}{j}" for (i, j), e in
                       ((tuple(map(int, k.split(","))), e) for k, e in alpha_json(P.A, alpha).items()))
        lines.append(f"<{ins}>_(0,{m}) = {v}")
    return "\n".join(lines) + "\n"


def _render_algebra(P: Potential, fmt: str) -> tuple[str, bool]:
    A = P.A
    S = limit_algebra(A, P)
    ok, diag = check_presentation(A, S)
    labels = [str(c) for c in A.coords]
    if fmt == "json":
        doc = {"A": list(A.a), "mu": A.mu, "presentation_ok": ok, "diagnosis": diag,
               "basis": labels, "table": []}
        for (x, y), row in S.table.items():
            doc["table"].append({"x": str(x), "y": str(y), "product": [fmt_rational(v) for v in row]})
        return json.dumps(doc, separators=(",", ":")) + "\n", ok
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"] + labels)
        for (x, y), row in S.table.items():
            w.writerow([str(x), str(y)] + [fmt_rational(v) for v in row])
        return buf.getvalue(), ok
    lines = [f"A = {A}  limit algebra (basis d[1], d[i,j], d[mu])"]
    for (x, y), row in S.table.items():
        if x.kind == "unit" or y.kind == "unit" or A.index(x) > A.index(y):
            continue
        terms = " + ".join(f"{v}*d[{c}]" for c, v in zip(A.coords, row) if v) or "0"
        lines.append(f"d[{x}] o d[{y}] = {terms}")
    lines.append("presentation: " + ("ok" if ok else "FAILED"))
    lines.extend("  " + d for d in diag)
    return "\n".join(lines) + "\n", ok


# ---------------------------------------------------------------------------


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    try:
        A = new_orbifold(*cfg.A)
        cfg.max_m = default_max_m(A, cfg.max_m)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "compute":
            P, verified = _load_or_compute(cfg, verify_fresh=not cfg.no_verify)
            unverified = not verified
            if cfg.format == "json":
                text = to_json(P, unverified=unverified)
            elif cfg.format == "csv":
                text = to_csv(P)
            else:
                text = to_text(P, unverified=unverified)
            _emit(text, cfg.out_path)
            return EXIT_OK
        if cfg.command == "verify":
            P, _ = _load_or_compute(cfg, verify_fresh=False)
            rep = verify(P)
            _emit(_render_report(P, rep, cfg.format), cfg.out_path)
            if not rep.ok:
                _report_failures(rep)
                return EXIT_VERIFY
            return EXIT_OK
        if cfg.command == "invariants":
            P, _ = _load_or_compute(cfg, verify_fresh=True)
            _emit(_render_invariants(P, cfg.format), cfg.out_path)
            return EXIT_OK
        if cfg.command == "algebra":
            P, _ = _load_or_compute(cfg, verify_fresh=True)
            text, ok = _render_algebra(P, cfg.format)
            _emit(text, cfg.out_path)
            return EXIT_OK if ok else EXIT_VERIFY
    except _VerificationFailed:
        print("verification failed", file=sys.stderr)
        return EXIT_VERIFY
    except ReconstructionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) if e.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(
        A=args.a,
        max_m=args.max_m,
        command=args.command,
        max_len=args.max_len,
        format=args.format,
        out_path=args.out_path,
        cache_dir=args.cache_dir,
        no_verify=getattr(args, "no_verify", False),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
