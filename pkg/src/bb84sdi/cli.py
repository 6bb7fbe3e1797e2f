"""Command-line interface: certify, simulate, scan, lemmas, sweep.

Exit codes: 0 success, 1 a scanned tolerance was violated, 2 invalid
input.  All floating-point output is printed with 12 significant digits.
"""

import argparse
import json
import os
import sys

import numpy as np

from .attacks import GAP_TOL, evaluate_model, noise_sweep, soundness_scan
from .certify import CertifyOptions, HAB_MODES, VARIANTS, certified_rate
from .linalg import ValidationError
from .model import CorrelationSummary, MeasurementModel, ingest_counts, summarize
from .oracles import INEQ_TOL, lemma_scan

DEFAULT_SEED = 7
SEED_ENV = "BB84SDI_SEED"

CORRELATOR_KEYS = {
    "Az": "a_z", "Ax": "a_x", "Bz": "b_z", "Bx": "b_x",
    "Ezz": "e_zz", "Ezx": "e_zx", "Exz": "e_xz", "Exx": "e_xx",
}


def _fmt(x):
    return float(f"{x:.12g}")


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(obj):
    print(json.dumps(_round_floats(obj), indent=2))


def summary_to_dict(s):
    return {key: getattr(s, attr) for key, attr in CORRELATOR_KEYS.items()}


def summary_from_dict(d):
    if not isinstance(d, dict):
        raise ValidationError("correlators must be an object of named values")
    unknown = set(d) - set(CORRELATOR_KEYS)
    if unknown:
        raise ValidationError(f"unknown correlator field {sorted(unknown)[0]!r}")
    kwargs = {}
    for key, attr in CORRELATOR_KEYS.items():
        if key not in d:
            raise ValidationError(f"missing correlator field {key!r}")
        val = d[key]
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ValidationError(f"correlator field {key!r} must be a number")
        kwargs[attr] = float(val)
    return CorrelationSummary(**kwargs)


def certificate_to_dict(cert):
    return {
        "rate": cert.rate,
        "raw_rate": cert.raw_rate,
        "lambda": cert.lam,
        "precondition_ok": bool(cert.precondition_ok),
        "condition_ok": bool(cert.condition_ok),
        "variant": cert.variant,
        "hab_mode": cert.hab_mode,
        "inputs": summary_to_dict(cert.inputs),
    }


def _matrix_from_json(obj, field):
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise ValidationError(
            f"field {field!r} must be a square matrix of [re, im] pairs"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def _povms_from_json(obj, field):
    if not isinstance(obj, dict):
        raise ValidationError(f"field {field!r} must map settings to effect pairs")
    povms = {}
    for u in ("z", "x"):
        if u not in obj:
            raise ValidationError(f"field {field!r} is missing setting {u!r}")
        pair = obj[u]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"field {field}.{u} must list exactly two effects")
        povms[u] = tuple(_matrix_from_json(p, f"{field}.{u}[{i}]") for i, p in enumerate(pair))
    return povms


def model_from_dict(d):
    for key in ("d_B", "rho_AB", "alice_povms", "bob_povms"):
        if key not in d:
            raise ValidationError(f"missing model field {key!r}")
    d_b = d["d_B"]
    if not isinstance(d_b, int) or d_b < 1:
        raise ValidationError("field 'd_B' must be a positive integer")
    rho = _matrix_from_json(d["rho_AB"], "rho_AB")
    if rho.shape != (2 * d_b, 2 * d_b):
        raise ValidationError(
            f"field 'rho_AB' has shape {rho.shape}, expected {(2 * d_b, 2 * d_b)}"
        )
    return MeasurementModel(
        rho=rho,
        alice=_povms_from_json(d["alice_povms"], "alice_povms"),
        bob=_povms_from_json(d["bob_povms"], "bob_povms"),
    )


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc


def _parse_request_options(req, zz_table=None):
    opts = req.get("options", {})
    if not isinstance(opts, dict):
        raise ValidationError("field 'options' must be an object")
    unknown = set(opts) - {"variant", "hab_mode"}
    if unknown:
        raise ValidationError(f"unknown option field {sorted(unknown)[0]!r}")
    variant = opts.get("variant", "improved")
    hab_mode = opts.get("hab_mode", "phi_bound")
    if variant not in VARIANTS:
        raise ValidationError(f"option 'variant' must be one of {VARIANTS}")
    if hab_mode not in HAB_MODES:
        raise ValidationError(f"option 'hab_mode' must be one of {HAB_MODES}")
    return CertifyOptions(variant=variant, hab_mode=hab_mode, zz_table=zz_table)


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed, "--seed"
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env), f"{SEED_ENV} environment variable"
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}")
    return DEFAULT_SEED, "default"


def cmd_certify(args):
    req = _load_json(args.request)
    if not isinstance(req, dict):
        raise ValidationError("request must be a JSON object")
    fmt = req.get("format")
    if fmt not in ("correlators", "probabilities", "counts"):
        raise ValidationError(
            "field 'format' must be one of 'correlators', 'probabilities', 'counts'"
        )
    if fmt not in req:
        raise ValidationError(f"missing payload field {fmt!r}")
    if fmt == "correlators":
        summary = summary_from_dict(req[fmt])
        opts = _parse_request_options(req)
        if opts.hab_mode == "exact":
            raise ValidationError(
                "hab_mode 'exact' needs joint tables; provide probabilities or counts"
            )
    else:
        kind = "probabilities" if fmt == "probabilities" else "counts"
        table = ingest_counts(req[fmt], kind=kind)
        summary = summarize(table)
        opts = _parse_request_options(req, zz_table=table.zz)
    cert = certified_rate(summary, opts)
    _emit(certificate_to_dict(cert))
    return 0


def cmd_simulate(args):
    m = model_from_dict(_load_json(args.model))
    opts = CertifyOptions(variant=args.variant, hab_mode=args.hab_mode)
    sample = evaluate_model(m, opts=opts)
    _emit({
        "summary": summary_to_dict(sample.summary),
        "certificate": certificate_to_dict(sample.certificate),
        "dw_rate": sample.dw_rate,
        "gap": sample.gap,
    })
    return 0


def cmd_scan(args):
    seed, source = _resolve_seed(args)
    try:
        d_bobs = tuple(int(x) for x in args.d_b.split(","))
    except ValueError:
        raise ValidationError(f"--d-b must be comma-separated integers, got {args.d_b!r}")
    if not d_bobs or any(d < 1 or d > 8 for d in d_bobs):
        raise ValidationError(f"--d-b entries must be within 1..8, got {d_bobs}")
    report = soundness_scan(args.n, seed, d_bobs)
    print(f"soundness scan: n={report.n} seed={seed} (from {source}) "
          f"d_B={','.join(str(d) for d in d_bobs)}")
    arg = report.argmin
    print(f"min gap {report.min_gap:.12g} at seed={arg.seed} d_B={arg.model.d_bob}")
    print("gap histogram:")
    for lo, hi, c in zip(report.histogram_edges[:-1], report.histogram_edges[1:],
                         report.histogram_counts):
        print(f"  [{lo:.12g}, {hi:.12g}) {c}")
    print(f"violations below -{GAP_TOL:g}: {len(report.failures)}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("seed,d_B,dw_rate,certified_rate,gap\n")
            for s, d, dw, rate, gap in report.rows:
                fh.write(f"{s},{d},{dw:.12g},{rate:.12g},{gap:.12g}\n")
    return 0 if report.passed else 1


def cmd_lemmas(args):
    seed, source = _resolve_seed(args)
    report = lemma_scan(args.n, seed)
    print(f"lemma scan: n={report.n} seed={seed} (from {source}) "
          f"skipped={report.skipped}")
    ok = True
    for name in ("lemma1", "lemma2", "lemma3"):
        gap = report.worst[name]
        status = "pass" if gap >= -INEQ_TOL else "FAIL"
        ok = ok and gap >= -INEQ_TOL
        print(f"{name} worst gap {gap:.12g} {status}")
    return 0 if ok else 1


def cmd_sweep(args):
    if args.step <= 0:
        raise ValidationError(f"--step must be positive, got {args.step}")
    if args.stop < args.start:
        raise ValidationError("--to must not be below --from")
    n = int(round((args.stop - args.start) / args.step)) + 1
    grid = np.clip(args.start + args.step * np.arange(n), args.start, args.stop)
    records = noise_sweep(grid)
    lines = ["visibility,certified_rate,shor_preskill,lambda,condition_ok"]
    for r in records:
        lines.append(
            f"{r.visibility:.12g},{r.certificate.rate:.12g},"
            f"{r.shor_preskill:.12g},{r.certificate.lam:.12g},"
            f"{'true' if r.certificate.condition_ok else 'false'}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bb84sdi",
        description="Certified key rates for two-basis qubit correlations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certificate from a JSON request file")
    p.add_argument("request", help="path to the request JSON")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("simulate", help="full pipeline on a model file")
    p.add_argument("model", help="path to the model JSON")
    p.add_argument("--variant", choices=VARIANTS, default="improved")
    p.add_argument("--hab-mode", choices=HAB_MODES, default="phi_bound")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="randomized soundness scan")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--d-b", default="2,3,4", help="comma-separated Bob dimensions")
    p.add_argument("--csv", default=None, help="write per-sample rows to this path")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("lemmas", help="randomized bound-slack scan")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("sweep", help="white-noise sweep as CSV")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
