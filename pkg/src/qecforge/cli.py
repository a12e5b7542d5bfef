"""Command line entry point: ``qecforge {info,sweep,bounds,floquet,msd,threshold}``.

Exit codes are 0 on success, 2 for configuration errors, 3 when a decoder
cannot handle the requested code or noise, and 4 when an internal invariant
check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

import mpmath

from . import bounds as bd
from .codes import CodeSpec
from .decoders import DECODERS, OPTION_KEYS, IncompatibleDecoder
from .experiments import CSV_HEADER, DEFAULT_CHUNK, SweepConfig, SweepPoint, run_sweep
from .floquet import (
    Schedule,
    build_honeycomb,
    four_qubit_schedule,
    four_qubit_start,
    isg_period,
    run_honeycomb,
    run_schedule,
    verify_logical_conservation,
)
from .formats import load_descriptor
from .noise import NoiseSpec
from .rng import default_seed, make_rng
from .stabilizer import NotCSS, SubsystemCode, distance_bruteforce
from .tableau import Tableau

log = logging.getLogger("qecforge")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INCOMPATIBLE = 3
EXIT_INVARIANT = 4


class ConfigError(ValueError):
    """Bad flags, config files or code specifications."""


class InvariantBreach(RuntimeError):
    """A self-check on computed output failed."""


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _scalar(text: str) -> Any:
    """Parse a free-form flag value as JSON when possible (ints, lists, bools)."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _extra_params(extra: Sequence[str]) -> Dict[str, Any]:
    """Turn leftover ``--key value`` pairs into code parameters."""
    out: Dict[str, Any] = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) < 3:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra) or extra[i + 1].startswith("--"):
                raise ConfigError(f"flag {tok} needs a value")
            val = extra[i + 1]
            i += 2
        out[key.replace("-", "_")] = _scalar(val)
    return out


def _key_values(items: Optional[Sequence[str]]) -> Dict[str, Any]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _scalar(v)
    return out


def _build(family: str, params: Dict[str, Any]):
    if family.endswith(".json") or Path(family).is_file():
        try:
            return load_descriptor(family), Path(family).stem
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot load code descriptor {family}: {exc}") from exc
    spec = CodeSpec(family, params)
    try:
        return spec.build(), spec.label()
    except KeyError as exc:
        raise ConfigError(str(exc.args[0]) if exc.args else str(exc)) from exc
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {family}: {exc}") from exc


def _table(rows: Sequence[Sequence[Any]], out: TextIO) -> None:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _num(x) -> str:
    try:
        return f"{float(x):.6g}"
    except (TypeError, ValueError, OverflowError):
        return str(x)


# ---------------------------------------------------------------------------
# info
# ---------------------------------------------------------------------------

def cmd_code_info(args, extra, out: TextIO) -> int:
    code, label = _build(args.family, _extra_params(extra))
    subsystem = isinstance(code, SubsystemCode)
    dist = distance_bruteforce(code, w_max=args.distance_cap)
    if dist.d is None:
        d_text, d_val = "n/a (k = 0)", None
    elif dist.exact:
        d_text, d_val = f"{dist.d} (brute force)", dist.d
    else:
        d_text, d_val = f">= {dist.d} (certified lower bound, search capped at weight {args.distance_cap})", None
    adj = bd.code_adjacency_stats(code)
    if not adj.bound_holds:
        raise InvariantBreach(f"adjacency degree {adj.max_degree} exceeds (r-1)c = {adj.degree_bound}")
    reports = bd.code_bound_reports(code.n, code.k, d_val) if d_val else []
    params = [code.n, code.k] + ([code.g] if subsystem else []) + ([d_val] if d_val else [])
    if args.json:
        doc = {
            "code": label, "n": code.n, "k": code.k, "g": code.g if subsystem else None,
            "distance": dist.d, "distance_exact": dist.exact,
            "stabilizers": [str(s) for s in code.stabilizers],
            "gauge_generators": [str(g) for g in code.gauge_generators] if subsystem else None,
            "r": adj.r, "c": adj.c, "max_adjacency_degree": adj.max_degree,
            "bounds": [r.to_dict() for r in reports],
        }
        out.write(json.dumps(doc) + "\n")
        return EXIT_OK
    out.write(f"code: {label}  [[{','.join(str(p) for p in params)}]]\n")
    out.write(f"n = {code.n}\nk = {code.k}\n")
    if subsystem:
        out.write(f"g = {code.g}\n")
    out.write(f"distance: {d_text}\n")
    out.write(f"check weight r = {adj.r}, qubit degree c = {adj.c}, "
              f"adjacency max degree {adj.max_degree} <= {adj.degree_bound}\n")
    if subsystem:
        out.write(f"gauge generators ({len(code.gauge_generators)}):\n")
        for g in code.gauge_generators:
            out.write(f"  {g}\n")
    out.write(f"stabilizers ({len(code.stabilizers)}):\n")
    for s in code.stabilizers:
        out.write(f"  {s}\n")
    if reports:
        _table([("bound", "lhs", "rhs", "status")] + [r.row() for r in reports], out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

_SWEEP_KEYS = {"code", "noise", "decoder", "options", "p", "shots", "seed", "workers", "chunk", "output"}


def _load_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _SWEEP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return data


def effective_sweep_config(args, extra) -> Dict[str, Any]:
    """Merge the JSON file with flags; flags win."""
    cfg = _load_config(args.config)
    code = dict(cfg.get("code") or {})
    if args.code is not None:
        code = {"family": args.code}
    code.update(_extra_params(extra))
    if "family" not in code:
        raise ConfigError("no code given (use --code or a config 'code' object)")
    noise = dict(cfg.get("noise") or {})
    for key in ("kind", "q", "rounds"):
        val = getattr(args, "noise" if key == "kind" else key)
        if val is not None:
            noise[key] = val
    if args.final_noisy:
        noise["final_perfect"] = False
    noise.pop("p", None)
    options = dict(cfg.get("options") or {})
    options.update(_key_values(args.option))
    bad = set(options) - OPTION_KEYS
    if bad:
        raise ConfigError(f"unknown decoder options {sorted(bad)}; known: {sorted(OPTION_KEYS)}")
    p = args.p if args.p is not None else cfg.get("p")
    if p is None:
        raise ConfigError("no p values given")
    p = [float(x) for x in (p if isinstance(p, list) else [p])]
    seed = args.seed if args.seed is not None else cfg.get("seed")
    return {
        "code": code,
        "noise": noise,
        "decoder": args.decoder or cfg.get("decoder") or "mwpm",
        "options": options,
        "p": p,
        "shots": int(args.shots if args.shots is not None else cfg.get("shots", 10_000)),
        "seed": int(seed) if seed is not None else default_seed(),
        "workers": int(args.workers if args.workers is not None else cfg.get("workers", 1)),
        "chunk": int(args.chunk if args.chunk is not None else cfg.get("chunk", DEFAULT_CHUNK)),
        "output": args.output if args.output is not None else cfg.get("output"),
    }


def cmd_sweep(args, extra, out: TextIO) -> int:
    eff = effective_sweep_config(args, extra)
    code_params = dict(eff["code"])
    family = code_params.pop("family")
    code, label = _build(family, code_params)
    if eff["decoder"] not in DECODERS:
        raise ConfigError(f"unknown decoder {eff['decoder']!r}; known: {sorted(DECODERS)}")
    try:
        noise = NoiseSpec.from_dict(eff["noise"])
        cfg = SweepConfig(code, label, noise, eff["decoder"], eff["p"], eff["shots"], eff["seed"],
                          eff["options"], eff["workers"], eff["chunk"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    # fail on an incompatible decoder before any output is written
    SweepPoint(code, noise, eff["decoder"], cfg.p_values[0], eff["options"])
    timing = not args.no_timing
    sink = open(eff["output"], "w") if eff["output"] else out
    try:
        meta = json.dumps({"config": eff}, sort_keys=True)
        if args.json:
            sink.write(meta + "\n")
        else:
            sys.stderr.write(f"# effective config {meta}\n")
            sink.write(CSV_HEADER + "\n")
        sink.flush()
        for row in run_sweep(cfg):
            if row.failures > row.shots:
                raise InvariantBreach("more failures than shots")
            sink.write((json.dumps(row.to_dict(timing)) if args.json else row.csv(timing)) + "\n")
            sink.flush()
    finally:
        if sink is not out:
            sink.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds / msd / threshold
# ---------------------------------------------------------------------------

def cmd_bounds(args, extra, out: TextIO) -> int:
    if args.code:
        code, _ = _build(args.code, _extra_params(extra))
        dist = distance_bruteforce(code, w_max=args.distance_cap)
        if dist.d is None or not dist.exact:
            raise ConfigError("distance unknown for this code; pass --n --k --d instead")
        n, k, d = code.n, code.k, dist.d
    else:
        if extra:
            raise ConfigError(f"unexpected arguments {list(extra)}")
        if None in (args.n, args.k, args.d):
            raise ConfigError("give --n --k --d or --code")
        n, k, d = args.n, args.k, args.d
    try:
        reports = bd.code_bound_reports(n, k, d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.json:
        out.write(json.dumps({"n": n, "k": k, "d": d, "bounds": [r.to_dict() for r in reports]}) + "\n")
    else:
        out.write(f"[[{n},{k},{d}]]\n")
        _table([("bound", "lhs", "rhs", "status")] + [r.row() for r in reports], out)
    return EXIT_OK


def cmd_msd(args, extra, out: TextIO) -> int:
    if extra:
        raise ConfigError(f"unexpected arguments {list(extra)}")
    rows = []
    for p in args.p:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"p={p} outside [0, 1]")
        y = bd.msd_yield(p)
        if not 0.0 <= y.output_error <= 1.0:
            raise InvariantBreach("output error bound outside [0, 1]")
        rows.append({"p": p, "accept": y.accept, "bad_accept": y.bad_accept, "output_error": y.output_error,
                     "output_over_p2": y.output_error / p ** 2 if p else None})
    if args.json:
        for r in rows:
            out.write(json.dumps(r) + "\n")
    else:
        _table([("p", "accept", "bad_accept", "output_error", "output/p^2")]
               + [[_num(r["p"]), _num(r["accept"]), _num(r["bad_accept"]), _num(r["output_error"]),
                   _num(r["output_over_p2"]) if r["output_over_p2"] is not None else "-"] for r in rows], out)
    return EXIT_OK


def cmd_threshold(args, extra, out: TextIO) -> int:
    if extra:
        raise ConfigError(f"unexpected arguments {list(extra)}")
    try:
        params = bd.ThresholdParams(args.A, args.t, args.p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    res = bd.threshold_recursion(params, args.levels)
    need = bd.required_levels(args.N, args.eps, params) if args.N is not None else None
    if args.json:
        out.write(json.dumps({
            "A": args.A, "t": args.t, "p": args.p, "lambda": float(res.lam), "threshold": float(res.threshold),
            "diverged": res.diverged,
            "levels": [{"level": l, "iterated": _num(v), "closed_form": _num(c)}
                       for l, (v, c) in enumerate(zip(res.levels, res.closed_form))],
            "required_levels": need,
            "overhead": bd.overhead(args.n_code, need) if need is not None and args.n_code else None,
        }) + "\n")
        return EXIT_OK
    out.write(f"lambda = {_num(res.lam)}  p_th ~ {_num(res.threshold)}"
              f"{'  (diverged: lambda >= 1)' if res.diverged else ''}\n")
    rows = [("level", "iterated", "closed_form")]
    rows += [(l, mpf_text(v), mpf_text(c)) for l, (v, c) in enumerate(zip(res.levels, res.closed_form))]
    _table(rows, out)
    if args.N is not None:
        if need is None:
            out.write("target not reachable by concatenation at this p\n")
        else:
            out.write(f"levels needed for N={_num(args.N)}, eps={_num(args.eps)}: {need}\n")
            if args.n_code:
                out.write(f"physical qubits per logical: {bd.overhead(args.n_code, need)}\n")
    return EXIT_OK


def mpf_text(v) -> str:
    return mpmath.nstr(v, 12)


# ---------------------------------------------------------------------------
# floquet
# ---------------------------------------------------------------------------

def cmd_floquet(args, extra, out: TextIO) -> int:
    params = _extra_params(extra)
    rng = make_rng(args.seed if args.seed is not None else default_seed(), 0)
    static_k = None
    if args.schedule == "four_qubit":
        trace = run_schedule(four_qubit_start(), four_qubit_schedule(), cycles=args.cycles, rng=rng,
                             forced=args.forced)
        warm = 0
    elif args.schedule == "honeycomb":
        h = build_honeycomb(int(params.get("a", 4)), int(params.get("b", 4)))
        trace = run_honeycomb(h, 3 * max(args.cycles, 2) + 3, rng=rng, forced=args.forced)
        warm = 4
        static_k = h.subsystem_view().k
    else:
        try:
            schedule = Schedule.from_json(Path(args.schedule).read_text())
        except OSError as exc:
            raise ConfigError(f"unknown schedule {args.schedule!r} (not four_qubit, honeycomb or a file)") from exc
        n = schedule.rounds[0][0].n
        trace = run_schedule(Tableau(n, []), schedule, cycles=args.cycles, rng=rng, forced=args.forced)
        warm = 0
    n = trace.n
    period = isg_period(trace, start=warm)
    ok, witness = verify_logical_conservation(trace, signed=args.forced is not None)
    ranks = trace.ranks()[warm:]
    k_dyn = n - ranks[-1] if ranks else None
    if args.trace:
        Path(args.trace).write_text(trace.dumps())
    summary = {"schedule": args.schedule, "n": n, "rounds": len(trace) - 1, "period": period,
               "k": k_dyn, "static_subsystem_k": static_k, "conservation": ok,
               "witness": None if witness is None else [witness[0], witness[1], str(witness[2])]}
    if args.json:
        out.write(trace.dumps())
        out.write(json.dumps({"summary": summary}) + "\n")
    else:
        for rec in trace.records:
            tag = " (warm-up)" if rec.warmup else ""
            out.write(f"round {rec.index}{tag}: measured {[str(c) for c in rec.checks]} "
                      f"outcomes {list(rec.outcomes)}\n")
            if len(rec.generators) <= 8:
                out.write(f"  ISG {[str(g) for g in rec.generators]}\n")
            else:
                out.write(f"  ISG rank {len(rec.generators)}\n")
        out.write(f"period: {period if period is not None else 'not periodic'}\n")
        out.write(f"k: {k_dyn}\n")
        if static_k is not None:
            out.write(f"static subsystem view k: {static_k}\n")
        out.write(f"logical conservation: {'verified' if ok else 'FAILED at ' + str(summary['witness'])}\n")
    if not ok and witness is not None and witness[1] == -1:
        raise InvariantBreach("logical operator count changed between rounds")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and main
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qecforge", description=__doc__.splitlines()[0], allow_abbrev=False)
    ap.add_argument("-v", "--verbose", action="store_true")
    # code parameters travel as free-form flags, so prefix matching stays off
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", allow_abbrev=False, help="parameters, checks and bounds of a code (extra --key value flags are code parameters)")
    p.add_argument("family", help="code family name or a code descriptor JSON file")
    p.add_argument("--distance-cap", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("sweep", allow_abbrev=False, help="Monte Carlo logical failure rates (extra --key value flags are code parameters)")
    p.add_argument("--config", help="JSON file with code, noise, decoder, options, p, shots, seed, ...")
    p.add_argument("--code", help="code family")
    p.add_argument("--noise", help="data channel kind (depolarizing, dephasing, bitflip, xz)")
    p.add_argument("--q", type=float, help="measurement flip probability")
    p.add_argument("--rounds", type=int, help="noisy syndrome rounds")
    p.add_argument("--final-noisy", action="store_true", help="do not add a perfect final round")
    p.add_argument("--decoder", help=f"one of {', '.join(sorted(DECODERS))}")
    p.add_argument("--option", action="append", help="decoder option key=value")
    p.add_argument("--p", type=float, nargs="+", help="physical error rates")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, help="default: QECFORGE_SEED or a fixed constant")
    p.add_argument("--workers", type=int)
    p.add_argument("--chunk", type=int)
    p.add_argument("--output", help="write rows here instead of stdout")
    p.add_argument("--json", action="store_true", help="JSON lines instead of CSV")
    p.add_argument("--no-timing", action="store_true", help="report 0 seconds so output is byte-reproducible")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", allow_abbrev=False, help="Hamming, Singleton and Gilbert-Varshamov checks")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--code", help="take n, k, d from a code family instead")
    p.add_argument("--distance-cap", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("floquet", allow_abbrev=False, help="run a measurement schedule and verify it")
    p.add_argument("schedule", help="four_qubit, honeycomb (with --a --b) or a schedule JSON file")
    p.add_argument("--cycles", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--forced", type=int, choices=(0, 1), help="force every random outcome to this bit")
    p.add_argument("--trace", help="also write the JSON-lines trace to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_floquet)

    p = sub.add_parser("msd", allow_abbrev=False, help="ten-to-two distillation yield table")
    p.add_argument("--p", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_msd)

    p = sub.add_parser("threshold", allow_abbrev=False, help="concatenated-code recursion table")
    p.add_argument("--A", type=float, required=True, help="malignant fault-set count bound")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--N", type=float, help="circuit size for the level estimate")
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--n-code", type=int, help="block length for the overhead estimate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_threshold)
    return ap


_ACCEPTS_EXTRA = {"info", "sweep", "bounds", "floquet"}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if extra and args.command not in _ACCEPTS_EXTRA:
        sys.stderr.write(f"qecforge: unexpected arguments {extra}\n")
        return EXIT_CONFIG
    try:
        return args.func(args, extra, out)
    except (IncompatibleDecoder, NotCSS) as exc:
        sys.stderr.write(f"qecforge: incompatible: {exc}\n")
        return EXIT_INCOMPATIBLE
    except InvariantBreach as exc:
        sys.stderr.write(f"qecforge: invariant breach: {exc}\n")
        return EXIT_INVARIANT
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"qecforge: config error: {exc}\n")
        return EXIT_CONFIG
    except (AssertionError, RuntimeError) as exc:
        log.debug("internal failure", exc_info=True)
        sys.stderr.write(f"qecforge: internal error: {exc}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
