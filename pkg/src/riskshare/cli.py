"""Command-line surface for the quoting pipeline.

Subcommands: ``fit`` (severity CSV -> model JSON), ``solve`` (model +
probabilities -> quote JSON with all trials), ``surrogate``
(build/train/eval/predict), and ``serve`` (HTTP quote service).

Exit codes are a stable contract: 0 success, 1 usage, 2 malformed input,
3 numeric failure, 4 solver failure.  All randomness flows from --seed,
which defaults to 0 so reruns are reproducible; output files are written
atomically and every run leaves a manifest next to its output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import cem, sevfit, surrogate as surr
from .lossmodel import ContractDesign, IncidentMix, model_from_json, model_to_json
from .risk import RiskPreferences, objective, quote_report

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_SOLVER = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_manifest(
    command: str,
    config: dict,
    inputs: list[str],
    outputs: list[str],
    seed: int,
    started: float,
) -> None:
    out = outputs[0]
    manifest = {
        "command": command,
        "config": config,
        "inputs": {p: _sha256(p) for p in inputs},
        "outputs": {p: _sha256(p) for p in outputs},
        "seed": seed,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    _atomic_write(f"{out}.manifest.json", json.dumps(manifest, sort_keys=True))


def _load_probs(arg: str) -> IncidentMix:
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            values = json.load(fh)
    else:
        values = [float(v) for v in arg.split(",")]
    return IncidentMix(probs=tuple(float(v) for v in values))


def _load_severity(path: str):
    with open(path) as fh:
        return model_from_json(fh.read())


def _load_cem_config(path: str | None, seed: int) -> cem.CemConfig:
    # --seed always wins so a single flag controls all randomness
    if path is None:
        return cem.CemConfig(seed=seed)
    with open(path) as fh:
        doc = json.load(fh)
    doc["seed"] = seed
    return cem.CemConfig(**{
        k: tuple(v) if isinstance(v, list) else v for k, v in doc.items()
    })


def _human_rows(quote: dict, labels: list[str]) -> str:
    theta = quote["contract"]["theta"]
    d = quote["contract"]["d"]
    lines = []
    for lab, t, x in zip(labels, theta, d):
        kind = "deductible" if t == 1 else "limit"
        lines.append(f"{lab:<22}{kind:<12}{x:12.4f}")
    for key in (
        "buyer_risk_without_insurance",
        "buyer_risk_with_insurance",
        "seller_risk_with_insurance",
        "aggregate_risk_with_insurance",
        "premium_lo",
        "premium_hi",
        "optimum",
    ):
        lines.append(f"{key:<34}{quote[key]:12.4f}")
    return "\n".join(lines)


def cmd_fit(args) -> int:
    started = time.monotonic()
    try:
        samples = sevfit.read_loss_csv(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        model = sevfit.build_severity_model(samples)
    except sevfit.FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _atomic_write(args.out, model_to_json(model))
    _write_manifest(
        "fit", {"input": args.input, "out": args.out}, [args.input], [args.out],
        seed=args.seed, started=started,
    )
    return EXIT_OK


def cmd_solve(args) -> int:
    started = time.monotonic()
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        sev, embedded_mix = _load_severity(args.severity)
        mix = _load_probs(args.probs) if args.probs else embedded_mix
        if mix is None:
            print("error: no probabilities given (flag or model)", file=sys.stderr)
            return EXIT_INPUT
        config = _load_cem_config(args.cem_config, args.seed)
        prefs = RiskPreferences(alpha=args.alpha, beta=args.beta)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _, trials = cem.run_multi_trial(
            mix, sev, prefs, config, args.trials, max_workers=args.workers
        )
        chosen = cem.select_solution(
            [t.best_z for t in trials], mix, sev, prefs
        )
        quote = quote_report(chosen, mix, sev, prefs)
    except cem.SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    doc = {
        "quote": quote.to_dict(),
        "trials": [
            {
                "seed": t.seed,
                "status": t.status,
                "iterations": t.iterations,
                "best_objective": t.best_objective,
                "theta": list(t.best_z.theta),
                "d": list(t.best_z.d),
                "tau_history": list(t.tau_history),
            }
            for t in trials
        ],
        "config": json.loads(config.to_json()),
        "alpha": prefs.alpha,
        "beta": prefs.beta,
        "probs": list(mix.probs),
    }
    _atomic_write(args.out, json.dumps(doc, sort_keys=True))
    if args.human:
        print(_human_rows(quote.to_dict(), list(sev.labels())))
    _write_manifest(
        "solve",
        {"alpha": args.alpha, "beta": args.beta, "trials": args.trials},
        [args.severity], [args.out], seed=args.seed, started=started,
    )
    return EXIT_OK


def cmd_surrogate(args) -> int:
    started = time.monotonic()
    try:
        if args.subcommand == "build":
            sev, _ = _load_severity(args.severity)
            with open(args.probs_file) as fh:
                plist = [IncidentMix(probs=tuple(p)) for p in json.load(fh)]
            config = _load_cem_config(args.cem_config, args.seed)
            prefs = RiskPreferences(alpha=args.alpha, beta=args.beta)
            samples = surr.build_training_set(
                plist, sev, prefs, config, trials_per_instance=args.trials
            )
            _atomic_write(args.out, surr.samples_to_jsonl(samples))
            _write_manifest(
                "surrogate build", {"trials": args.trials},
                [args.severity, args.probs_file], [args.out],
                seed=args.seed, started=started,
            )
        elif args.subcommand == "train":
            with open(args.samples) as fh:
                samples = surr.samples_from_jsonl(fh.read())
            model = surr.train_surrogate(samples, k=args.k)
            _atomic_write(args.out, surr.model_to_json(model))
            _write_manifest(
                "surrogate train", {"k": args.k}, [args.samples], [args.out],
                seed=args.seed, started=started,
            )
        elif args.subcommand == "eval":
            with open(args.model) as fh:
                model = surr.model_from_json(fh.read())
            with open(args.samples) as fh:
                samples = surr.samples_from_jsonl(fh.read())
            sev, _ = _load_severity(args.severity)
            prefs = RiskPreferences(alpha=args.alpha, beta=args.beta)
            report = surr.evaluate(model, samples, sev, prefs, tol=args.tol)
            print(json.dumps(
                {"error_rate": report.error_rate, "gaps": list(report.gaps)},
                sort_keys=True,
            ))
        elif args.subcommand == "predict":
            with open(args.model) as fh:
                model = surr.model_from_json(fh.read())
            mix = _load_probs(args.probs)
            pred = surr.predict(model, mix)
            print(json.dumps(
                {
                    "theta": list(pred.contract.theta),
                    "d": list(pred.contract.d),
                    "fallback": pred.fallback,
                },
                sort_keys=True,
            ))
        else:  # pragma: no cover
            raise _UsageError(f"unknown surrogate subcommand {args.subcommand}")
    except (OSError, ValueError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except cem.SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        import uvicorn

        from .service import create_app
    except ImportError as exc:  # pragma: no cover
        print(f"error: service dependencies missing: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        sev, mix = _load_severity(args.severity)
        model = None
        if args.surrogate:
            with open(args.surrogate) as fh:
                model = surr.model_from_json(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    host, _, port = args.bind.partition(":")
    app = create_app(sev, surrogate_model=model, default_mix=mix)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="riskshare")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", description="Fit per-type severities from a loss CSV.")
    p_fit.add_argument("--input", required=True)
    p_fit.add_argument("--out", required=True)
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.set_defaults(func=cmd_fit)

    p_solve = sub.add_parser("solve", description="Solve a Pareto-optimal contract.")
    p_solve.add_argument("--severity", required=True)
    p_solve.add_argument("--probs", default=None,
                         help="comma-separated vector or @file.json")
    p_solve.add_argument("--alpha", type=float, default=0.95)
    p_solve.add_argument("--beta", type=float, default=0.9)
    p_solve.add_argument("--trials", type=int, default=50)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--cem-config", default=None)
    p_solve.add_argument("--workers", type=int, default=None,
                         help="trial parallelism; defaults to QUOTE_THREADS")
    p_solve.add_argument("--out", required=True)
    p_solve.add_argument("--human", action="store_true",
                         help="also print a human-readable table")
    p_solve.set_defaults(func=cmd_solve)

    p_sur = sub.add_parser("surrogate", description="Build, train, eval, or query the instant-quote model.")
    p_sur.add_argument("subcommand", choices=["build", "train", "eval", "predict"])
    p_sur.add_argument("--severity", default=None)
    p_sur.add_argument("--probs-file", default=None)
    p_sur.add_argument("--probs", default=None)
    p_sur.add_argument("--samples", default=None)
    p_sur.add_argument("--model", default=None)
    p_sur.add_argument("--alpha", type=float, default=0.95)
    p_sur.add_argument("--beta", type=float, default=0.9)
    p_sur.add_argument("--trials", type=int, default=10)
    p_sur.add_argument("--k", type=int, default=5)
    p_sur.add_argument("--tol", type=float, default=1e-4)
    p_sur.add_argument("--seed", type=int, default=0)
    p_sur.add_argument("--cem-config", default=None)
    p_sur.add_argument("--out", default=None)
    p_sur.set_defaults(func=cmd_surrogate)

    p_serve = sub.add_parser("serve", description="Run the HTTP quote service.")
    p_serve.add_argument("--severity", required=True)
    p_serve.add_argument("--surrogate", default=None)
    p_serve.add_argument("--bind", default="127.0.0.1:8000")
    p_serve.set_defaults(func=cmd_serve)
    return parser


_REQUIRED = {
    "build": ("severity", "probs_file", "out"),
    "train": ("samples", "out"),
    "eval": ("model", "samples", "severity"),
    "predict": ("model", "probs"),
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "surrogate":
            for name in _REQUIRED[args.subcommand]:
                if getattr(args, name) is None:
                    raise _UsageError(
                        f"surrogate {args.subcommand} requires --{name.replace('_', '-')}"
                    )
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
