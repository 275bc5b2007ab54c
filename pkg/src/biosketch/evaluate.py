"""Evaluation harness: GAR, empirical FAR, GAR-security sweeps, privacy.

The genuine accept rate enrolls every subject on its enrollment-half
samples and probes with the held-out half (or with the enrollment
representative itself, which by construction reproduces the enrolled bits).
Subjects whose enrollment fails under the fail-deny policy are reported and
excluded from the probe denominator.

The false accept rate is measured under two scenarios: ``zero-effort``
(impostor presents its own biometric and its own key against the victim's
record) and ``stolen-key`` (impostor biometric, victim's key). For the
stolen-key scenario the impostor bit source is either ``uniform`` fair coin
flips, which makes the analytic law 2^(-K*m) exact for the total decode
map, or ``dataset`` vectors from the other subjects.

Security is counted in message bits k = K * m; sweeping K at fixed m yields
the GAR-security trade-off curve, written as CSV with the header
``m,K,security_bits,rate,gar,far_analytic,far_empirical,scheme,policy,scenario``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EnrollmentDecodeError,
    InsufficientDataError,
    ParameterMismatchError,
)
from .pipeline import (
    Enrollment,
    PipelineConfig,
    build_weights,
    derive_rng,
    enroll_split,
    enroll_vectors,
    fuse_dataset,
    population_from_fused,
    probe_bits,
)
from .sketch import authenticate
from .synth import EmbeddingDataset

SCENARIO_ZERO_EFFORT = "zero-effort"
SCENARIO_STOLEN_KEY = "stolen-key"

GS_CSV_HEADER = "m,K,security_bits,rate,gar,far_analytic,far_empirical,scheme,policy,scenario"


@dataclass(frozen=True)
class ParamPlan:
    """Code parameters achieving a requested security level."""

    m: int
    n_symbols: int
    n_bits: int
    k_symbols: int
    security_bits: int       # achieved, K * m
    nominal_security: int    # requested
    rate: float              # security_bits / n_bits

    @property
    def t(self) -> int:
        return (self.n_symbols - self.k_symbols) // 2


def params_for_security(m: int, security_bits: int) -> ParamPlan:
    """Smallest-deviation K for a requested security level (half rounds up).

    Security is quantized to multiples of m because K is integral; both the
    nominal and the achieved level are reported.
    """
    n_symbols = (1 << m) - 1
    n_bits = m * n_symbols
    if not 1 <= security_bits <= n_bits:
        raise ValueError(
            f"security must be in 1..{n_bits} bits for m={m}, got {security_bits}"
        )
    k_symbols = min(n_symbols, max(1, math.floor(security_bits / m + 0.5)))
    return ParamPlan(
        m=m,
        n_symbols=n_symbols,
        n_bits=n_bits,
        k_symbols=k_symbols,
        security_bits=k_symbols * m,
        nominal_security=security_bits,
        rate=k_symbols * m / n_bits,
    )


def far_analytic(security_bits: int) -> float:
    """2^(-k); underflows to 0.0 beyond the float range."""
    try:
        return math.ldexp(1.0, -security_bits)
    except OverflowError:
        return 0.0


@dataclass(frozen=True)
class GarResult:
    rate: float
    accepted: int
    probed: int
    enrolled: int
    unenrollable: int


@dataclass(frozen=True)
class _Prepared:
    config: PipelineConfig
    code: object
    pop: object
    fused: dict[str, np.ndarray]
    enrollments: dict[str, Enrollment]
    unenrollable: list[str]


def _prepare(dataset: EmbeddingDataset, config: PipelineConfig) -> _Prepared:
    weights = build_weights(config, dataset.d_face, dataset.d_iris)
    fused = fuse_dataset(dataset, weights)
    pop = population_from_fused(fused)
    code = config.build_code()
    enrollments: dict[str, Enrollment] = {}
    unenrollable: list[str] = []
    for sid, mat in fused.items():
        cut = enroll_split(mat.shape[0])
        try:
            enrollments[sid] = enroll_vectors(config, code, mat[:cut], pop,
                                              subject_id=sid)
        except EnrollmentDecodeError:
            unenrollable.append(sid)
    return _Prepared(config, code, pop, fused, enrollments, unenrollable)


def gar_stats(dataset: EmbeddingDataset, config: PipelineConfig,
              probe_mode: str = "heldout") -> GarResult:
    """Genuine accept rate over enrolled subjects.

    ``heldout`` probes each subject with its held-out samples;
    ``enroll`` probes with the enrollment representative itself.
    """
    if probe_mode not in ("heldout", "enroll"):
        raise ValueError(f"unknown probe mode {probe_mode!r}")
    prep = _prepare(dataset, config)
    if not prep.enrollments:
        raise InsufficientDataError("no subject could be enrolled")
    accepted = probed = 0
    for sid, enr in prep.enrollments.items():
        mat = prep.fused[sid]
        cut = enroll_split(mat.shape[0])
        if probe_mode == "enroll":
            vectors = [mat[:cut].mean(axis=0)]
        else:
            vectors = list(mat[cut:])
        for vec in vectors:
            r_b = probe_bits(vec, prep.pop, enr.key)
            decision = authenticate(r_b, enr.record, prep.code)
            probed += 1
            accepted += int(decision.accepted)
    if probed == 0:
        raise InsufficientDataError(
            "no probe samples; need more than the enrollment half"
        )
    return GarResult(
        rate=accepted / probed,
        accepted=accepted,
        probed=probed,
        enrolled=len(prep.enrollments),
        unenrollable=len(prep.unenrollable),
    )


def gar(dataset: EmbeddingDataset, config: PipelineConfig,
        probe_mode: str = "heldout") -> float:
    return gar_stats(dataset, config, probe_mode).rate


def _try_accept(r_b, record, code) -> bool:
    """Authentication attempt where structural mismatches count as denial."""
    try:
        return authenticate(r_b, record, code).accepted
    except ParameterMismatchError:
        return False


def empirical_far(dataset: EmbeddingDataset, config: PipelineConfig,
                  scenario: str, trials: int, seed,
                  impostor_bits: str = "uniform") -> float:
    """Monte-Carlo false accept rate under an impostor scenario.

    ``zero-effort`` always probes with dataset vectors and the impostor's
    own key; ``stolen-key`` uses the victim's key with either ``uniform``
    random bits or ``dataset`` impostor vectors.
    """
    if scenario not in (SCENARIO_ZERO_EFFORT, SCENARIO_STOLEN_KEY):
        raise ValueError(f"unknown scenario {scenario!r}")
    if impostor_bits not in ("uniform", "dataset"):
        raise ValueError(f"unknown impostor bit source {impostor_bits!r}")
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    if dataset.n_subjects < 2:
        raise InsufficientDataError("impostor trials need >= 2 subjects")

    prep = _prepare(dataset, config)
    sids = list(prep.enrollments)
    if len(sids) < 2:
        raise InsufficientDataError("need >= 2 enrolled subjects")
    rng = derive_rng(seed, "far", scenario, impostor_bits)
    n_bits = prep.code.n_bits

    accepts = 0
    for trial in range(trials):
        victim = sids[trial % len(sids)]
        victim_enr = prep.enrollments[victim]
        if scenario == SCENARIO_STOLEN_KEY and impostor_bits == "uniform":
            r_b = rng.integers(0, 2, size=n_bits, dtype=np.uint8)
        else:
            others = [s for s in sids if s != victim]
            impostor = others[int(rng.integers(len(others)))]
            mat = prep.fused[impostor]
            vec = mat[int(rng.integers(mat.shape[0]))]
            key = (victim_enr.key if scenario == SCENARIO_STOLEN_KEY
                   else prep.enrollments[impostor].key)
            r_b = probe_bits(vec, prep.pop, key)
        accepts += int(_try_accept(r_b, victim_enr.record, prep.code))
    return accepts / trials


@dataclass(frozen=True)
class GsCurvePoint:
    m: int
    k_symbols: int
    security_bits: int
    rate: float
    gar: float
    far_analytic: float
    far_empirical: float | None
    scheme: str
    policy: str
    scenario: str


def run_gs_curve(dataset: EmbeddingDataset, config: PipelineConfig,
                 k_list, scenario: str = SCENARIO_STOLEN_KEY,
                 far_trials: int | None = None, seed=None,
                 probe_mode: str = "heldout") -> list[GsCurvePoint]:
    """One GAR-security point per K; deterministic given dataset and seeds."""
    seed = config.seed if seed is None else seed
    points = []
    for k_symbols in k_list:
        cfg = config.with_k(int(k_symbols))
        security = cfg.k_symbols * cfg.m
        g = gar(dataset, cfg, probe_mode=probe_mode)
        fe = None
        if far_trials:
            fe = empirical_far(dataset, cfg, scenario, far_trials, seed)
        points.append(GsCurvePoint(
            m=cfg.m,
            k_symbols=cfg.k_symbols,
            security_bits=security,
            rate=security / cfg.n_bits,
            gar=g,
            far_analytic=far_analytic(security),
            far_empirical=fe,
            scheme=cfg.scheme,
            policy=cfg.policy.value,
            scenario=scenario,
        ))
    return points


def gs_curve_csv(points) -> str:
    """Render curve points as CSV; floats use repr so bytes are stable."""
    buf = io.StringIO()
    buf.write(GS_CSV_HEADER + "\n")
    for p in points:
        fe = "" if p.far_empirical is None else repr(p.far_empirical)
        buf.write(
            f"{p.m},{p.k_symbols},{p.security_bits},{p.rate!r},{p.gar!r},"
            f"{p.far_analytic!r},{fe},{p.scheme},{p.policy},{p.scenario}\n"
        )
    return buf.getvalue()


def write_gs_csv(points, path):
    with open(path, "w", newline="") as fh:
        fh.write(gs_curve_csv(points))


@dataclass(frozen=True)
class PrivacyReport:
    """Worst-case information exposure when key and sketch leak.

    The enrolled binary feature vector has one balanced bit per dimension,
    so its entropy is d bits; an adversary holding the key and sketch
    observes at most the n exposed component bits, leaving d - n bits of
    uncertainty.
    """

    feature_bits: int        # d = H(x)
    exposed_bits: int        # n
    max_leakage_bits: int    # I(x; V) <= n
    residual_bits: int       # d - n

    def __post_init__(self):
        assert self.residual_bits == self.feature_bits - self.exposed_bits


def privacy_report(feature_bits: int, exposed_bits: int) -> PrivacyReport:
    if feature_bits <= 0 or exposed_bits < 0:
        raise ValueError("feature_bits must be positive and exposed_bits >= 0")
    if exposed_bits > feature_bits:
        raise ValueError(
            f"exposed bits {exposed_bits} exceed feature bits {feature_bits}"
        )
    return PrivacyReport(
        feature_bits=feature_bits,
        exposed_bits=exposed_bits,
        max_leakage_bits=exposed_bits,
        residual_bits=feature_bits - exposed_bits,
    )
