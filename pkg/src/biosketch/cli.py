"""Command-line surface for the template-protection pipeline.

Subcommands: ``gen`` (synthetic dataset), ``params`` (code planning),
``enroll``, ``auth``, ``revoke``, ``eval`` (GAR-security CSV sweep) and
``oracle`` (small-code collision demo). Every subcommand honors ``--seed``
for bit-exact reproducibility; without it, enrollment randomness comes from
OS entropy.

Exit codes: 0 success/accept, 1 deny, 2 usage error, 3 runtime error.

A ``--config`` file holds ``key=value`` lines using the long option names
without the leading dashes (e.g. ``m=5``); explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import sys

from . import evaluate, oracle, store, synth
from .errors import BiosketchError
from .fusion import load_weights
from .pipeline import (
    PipelineConfig,
    build_weights,
    enroll_split,
    enroll_vectors,
    fuse_dataset,
    population_from_fused,
    probe_bits,
)
from .rs import DecodePolicy
from .sketch import SCHEME_FUZZY_COMMITMENT, SCHEME_SECURE_SKETCH, authenticate

EXIT_OK = 0
EXIT_DENY = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3

_SCHEMES = {"ss": SCHEME_SECURE_SKETCH, "fc": SCHEME_FUZZY_COMMITMENT}
_POLICIES = {
    "fail-deny": DecodePolicy.FAIL_DENY,
    "fallback": DecodePolicy.FALLBACK_SYSTEMATIC,
}


def _read_config_file(path) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise BiosketchError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config_file(args: argparse.Namespace):
    if not getattr(args, "config", None):
        return
    overrides = _read_config_file(args.config)
    for key, raw in overrides.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is not None:  # explicit flag wins
            continue
        setattr(args, key, raw)


def _resolve(args, name, cast, default=None, required=False):
    value = getattr(args, name, None)
    if value is None:
        if required:
            raise BiosketchError(f"missing required option --{name.replace('_', '-')}")
        return default
    return cast(value)


def _pipeline_config(args) -> PipelineConfig:
    m = _resolve(args, "m", int, required=True)
    k_symbols = _resolve(args, "k_symbols", int)
    security = _resolve(args, "security", int)
    if k_symbols is None:
        if security is None:
            raise BiosketchError("need --k-symbols or --security")
        k_symbols = evaluate.params_for_security(m, security).k_symbols
    scheme = _SCHEMES[_resolve(args, "scheme", str, default="ss")]
    policy = _POLICIES[_resolve(args, "policy", str, default="fallback")]
    return PipelineConfig(
        m=m,
        k_symbols=k_symbols,
        scheme=scheme,
        policy=policy,
        fusion_mode=_resolve(args, "fusion", str, default="fca"),
        out_dim=_resolve(args, "out_dim", int, default=m * ((1 << m) - 1)),
        window_factor=_resolve(args, "window_factor", float, default=2.0),
        seed=_resolve(args, "seed", int),
    )


def _load_pipeline_data(args, config: PipelineConfig):
    dataset = synth.read_embeddings(_resolve(args, "dataset", str, required=True))
    weights_path = _resolve(args, "weights", str)
    if weights_path:
        weights = load_weights(weights_path)
    else:
        weights = build_weights(config, dataset.d_face, dataset.d_iris)
    fused = fuse_dataset(dataset, weights)
    pop = population_from_fused(fused)
    return dataset, fused, pop


def cmd_gen(args) -> int:
    dataset = synth.gen_population(
        num_subjects=_resolve(args, "subjects", int, default=50),
        samples_per_subject=_resolve(args, "samples", int, default=20),
        d_face=_resolve(args, "d_face", int, default=64),
        d_iris=_resolve(args, "d_iris", int, default=64),
        between_std=_resolve(args, "between_std", float, default=1.0),
        within_std=_resolve(args, "within_std", float, default=0.3),
        seed=_resolve(args, "seed", int, default=0),
    )
    out = _resolve(args, "out", str, required=True)
    synth.write_embeddings(dataset, out)
    print(f"wrote {dataset.n_subjects} subjects x "
          f"{dataset.n_samples(dataset.subject_ids[0])} samples to {out}")
    return EXIT_OK


def cmd_params(args) -> int:
    m = _resolve(args, "m", int, required=True)
    n_symbols = (1 << m) - 1
    print(f"m={m} N={n_symbols} n={m * n_symbols}")
    security = _resolve(args, "security", int)
    if security is not None:
        plan = evaluate.params_for_security(m, security)
        print(f"K={plan.k_symbols} t={plan.t} "
              f"security={plan.security_bits} (requested {plan.nominal_security}) "
              f"rate={plan.rate:.4f}")
    return EXIT_OK


def cmd_enroll(args) -> int:
    config = _pipeline_config(args)
    dataset, fused, pop = _load_pipeline_data(args, config)
    subject = _resolve(args, "subject", str, required=True)
    if subject not in fused:
        raise BiosketchError(f"subject {subject!r} not in dataset")
    code = config.build_code()
    mat = fused[subject]
    enr = enroll_vectors(config, code, mat[: enroll_split(mat.shape[0])], pop,
                         subject_id=subject)
    db = store.TemplateDb(_resolve(args, "templates_dir", str, default="templates"))
    ks = store.KeyStore(_resolve(args, "keys_dir", str, default="keys"))
    overwrite = bool(getattr(args, "overwrite", False))
    db.save(subject, enr.record, overwrite=overwrite)
    ks.save(subject, enr.key, overwrite=overwrite)
    print(f"enrolled {subject}: scheme={enr.record.scheme} m={config.m} "
          f"K={config.k_symbols} G={config.reliable_count}")
    return EXIT_OK


def cmd_auth(args) -> int:
    config = _pipeline_config(args)
    dataset, fused, pop = _load_pipeline_data(args, config)
    subject = _resolve(args, "subject", str, required=True)
    probe_subject = _resolve(args, "probe_subject", str, default=subject)
    sample = _resolve(args, "probe_sample", int, default=0)
    if probe_subject not in fused:
        raise BiosketchError(f"subject {probe_subject!r} not in dataset")
    mat = fused[probe_subject]
    if not 0 <= sample < mat.shape[0]:
        raise BiosketchError(f"probe sample {sample} out of range")
    db = store.TemplateDb(_resolve(args, "templates_dir", str, default="templates"))
    ks = store.KeyStore(_resolve(args, "keys_dir", str, default="keys"))
    record = db.load(subject)
    key = ks.load(subject)
    r_b = probe_bits(mat[sample], pop, key)
    decision = authenticate(r_b, record)
    if decision.accepted:
        print(f"ACCEPT ({decision.reason.value})")
        return EXIT_OK
    print(f"DENY ({decision.reason.value})")
    return EXIT_DENY


def cmd_revoke(args) -> int:
    subject = _resolve(args, "subject", str, required=True)
    db = store.TemplateDb(_resolve(args, "templates_dir", str, default="templates"))
    ks = store.KeyStore(_resolve(args, "keys_dir", str, default="keys"))
    store.revoke(db, ks, subject)
    print(f"revoked {subject}")
    return EXIT_OK


def cmd_eval(args) -> int:
    k_list_raw = _resolve(args, "k_list", str)
    k_list = [int(v) for v in k_list_raw.split(",") if v] if k_list_raw else []
    if k_list and getattr(args, "k_symbols", None) is None:
        args.k_symbols = str(k_list[0])
    config = _pipeline_config(args)
    if not k_list:
        k_list = [config.k_symbols]
    dataset = synth.read_embeddings(_resolve(args, "dataset", str, required=True))
    scenario = _resolve(args, "scenario", str, default=evaluate.SCENARIO_STOLEN_KEY)
    trials = _resolve(args, "trials", int)
    points = evaluate.run_gs_curve(dataset, config, k_list, scenario=scenario,
                                   far_trials=trials, seed=config.seed)
    out = _resolve(args, "out", str)
    csv_text = evaluate.gs_curve_csv(points)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(csv_text)
        print(f"wrote {len(points)} curve points to {out}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .gf import Field
    from .rs import RsCode

    m = _resolve(args, "m", int, required=True)
    k_symbols = _resolve(args, "k_symbols", int, required=True)
    code = RsCode(Field(m), k_symbols)
    received = _resolve(args, "received", str)
    if received:
        symbols = [int(v) for v in received.split(",")]
        result = oracle.nearest_codeword(code, symbols)
        print(f"distance={result.distance} ties={len(result.codewords)}")
        for cw in result.codewords:
            print(",".join(str(s) for s in cw))
        return EXIT_OK
    trials = _resolve(args, "trials", int, default=10000)
    seed = _resolve(args, "seed", int, default=0)
    rate = oracle.column_collision_rate(code, trials, seed)
    security = k_symbols * m
    print(f"collision_rate={rate:.6g} analytic={2.0 ** -security:.6g} "
          f"trials={trials} security_bits={security}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key=value defaults file")
    parser.add_argument("--seed", help="master seed for reproducibility")


def _add_pipeline_options(parser: argparse.ArgumentParser):
    parser.add_argument("--m", help="symbol size in bits")
    parser.add_argument("--k-symbols", dest="k_symbols", help="message length K in symbols")
    parser.add_argument("--security", help="target security in bits (chooses K)")
    parser.add_argument("--scheme", choices=sorted(_SCHEMES), help="ss or fc")
    parser.add_argument("--policy", choices=sorted(_POLICIES), help="decode policy")
    parser.add_argument("--fusion", choices=["fca", "bla"], help="fusion mode")
    parser.add_argument("--out-dim", dest="out_dim", help="fused vector dimension")
    parser.add_argument("--window-factor", dest="window_factor",
                        help="reliable-selection window factor")
    parser.add_argument("--weights", help="fusion weights file")
    parser.add_argument("--dataset", help="embeddings CSV")
    parser.add_argument("--templates-dir", dest="templates_dir", help="record store")
    parser.add_argument("--keys-dir", dest="keys_dir", help="keystore")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biosketch",
        description="Multibiometric template protection and evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic embeddings CSV")
    _add_common(p)
    p.add_argument("--subjects")
    p.add_argument("--samples")
    p.add_argument("--d-face", dest="d_face")
    p.add_argument("--d-iris", dest="d_iris")
    p.add_argument("--between-std", dest="between_std")
    p.add_argument("--within-std", dest="within_std")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("params", help="plan code parameters for a security level")
    _add_common(p)
    p.add_argument("--m")
    p.add_argument("--security")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("enroll", help="enroll a subject from a dataset")
    _add_common(p)
    _add_pipeline_options(p)
    p.add_argument("--subject", help="subject id to enroll")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("auth", help="authenticate a probe against a record")
    _add_common(p)
    _add_pipeline_options(p)
    p.add_argument("--subject", help="claimed identity")
    p.add_argument("--probe-subject", dest="probe_subject",
                   help="actual biometric owner (defaults to --subject)")
    p.add_argument("--probe-sample", dest="probe_sample", help="sample index")
    p.set_defaults(func=cmd_auth)

    p = sub.add_parser("revoke", help="delete a subject's record and key")
    _add_common(p)
    p.add_argument("--subject")
    p.add_argument("--templates-dir", dest="templates_dir")
    p.add_argument("--keys-dir", dest="keys_dir")
    p.set_defaults(func=cmd_revoke)

    p = sub.add_parser("eval", help="GAR-security sweep, written as CSV")
    _add_common(p)
    _add_pipeline_options(p)
    p.add_argument("--k-list", dest="k_list", help="comma-separated K values")
    p.add_argument("--scenario",
                   choices=[evaluate.SCENARIO_ZERO_EFFORT, evaluate.SCENARIO_STOLEN_KEY])
    p.add_argument("--trials", help="empirical FAR trials per point")
    p.add_argument("--out", help="output CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle", help="brute-force decoder demos on small codes")
    _add_common(p)
    p.add_argument("--m")
    p.add_argument("--k-symbols", dest="k_symbols")
    p.add_argument("--trials")
    p.add_argument("--received", help="comma-separated symbols to decode exhaustively")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return args.func(args)
    except BiosketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
