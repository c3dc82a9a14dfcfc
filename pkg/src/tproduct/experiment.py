"""Seeded bound-verification experiments.

One experiment runs a single calculator over ``trials`` random instances and
produces one :class:`ExperimentRow` per trial.

Seeding scheme: trial ``i`` of an experiment with master seed ``s`` uses
the 64-bit sub-seed ``trial_seed(s, i)``, the first word of
``numpy.random.SeedSequence([s, i])``.  Its instance is drawn from
``numpy.random.default_rng(sub_seed)`` and nothing else, so a trial can be
re-run on its own with ``--start i --trials 1`` and the output does not
depend on how many threads are used.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from importlib import resources

import numpy as np

from .algebra import spectral_norm, tprod
from .errors import InfeasibleDims, SingularTensor
from .instances import (check_rank_profile, conditioned, gaussian, random_rank_profile,
                        rank_preserving_perturbation, unit_tensor)
from .inverse import inv, pinv
from .perturb import (ABS_SLACK, REL_SLACK, Applicability, BoundReport,
                      equation_perturb, inv_perturb_posterior, inv_perturb_prior,
                      lstsq_perturb, multilinear_smw_perturb, pinv_perturb_general,
                      pinv_perturb_rank_preserving, pinv_perturb_relative)
from .smw import build_smw_factors, construct_conditioned_instance, smw_inverse, smw_pinv
from .tensor import Tensor3, frobenius_norm

__all__ = [
    "Theorem",
    "ExperimentConfig",
    "ExperimentRow",
    "ExperimentResult",
    "COLUMNS",
    "trial_seed",
    "run_trial",
    "run_experiment",
    "format_csv",
    "format_json",
    "thread_cap",
    "golden_names",
    "load_golden",
    "SMW_INV_TOL",
    "SMW_PINV_TOL",
]

SMW_INV_TOL = 1e-9
SMW_PINV_TOL = 1e-8


class Theorem(Enum):
    T3_1 = "T3_1"
    T3_2 = "T3_2"
    T3_3 = "T3_3"
    T4_1 = "T4_1"
    T4_2 = "T4_2"
    T4_3 = "T4_3"
    T4_4 = "T4_4"
    T5_2 = "T5_2"
    SMW_INV = "SMW_INV"
    SMW_PINV = "SMW_PINV"


SQUARE_ONLY = {Theorem.T3_1, Theorem.T3_2, Theorem.T3_3, Theorem.SMW_INV}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    ``dims = (n1, n2, n3, n4)``: ``A`` is ``n1 x n2 x n3`` and right-hand
    sides are ``n1 x n4 x n3``.  ``rank_profile`` is ``None`` (random),
    ``"full"``, ``"deficient"`` or an explicit conjugate-symmetric tuple.
    ``width`` is the SMW update width.
    """

    theorem: Theorem
    dims: tuple[int, int, int, int]
    trials: int = 100
    seed: int = 0
    scale: float = 1e-3
    rank_profile: tuple[int, ...] | str | None = None
    width: int = 1
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "theorem", Theorem(self.theorem))
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 3:
            dims = dims + (1,)
        if len(dims) != 4 or min(dims) < 1:
            raise ValueError(f"dims must be four positive integers (n1,n2,n3,n4), got {self.dims}")
        object.__setattr__(self, "dims", dims)
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError("scale must be a positive finite number")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if int(self.width) < 1:
            raise ValueError("width must be >= 1")
        if int(self.start) < 0:
            raise ValueError("start must be >= 0")
        n1, n2, n3, _ = dims
        if self.theorem in SQUARE_ONLY and n1 != n2:
            raise ValueError(f"{self.theorem.value} needs square frontal slices (n1 == n2)")
        rp = self.rank_profile
        if isinstance(rp, (list, tuple)):
            object.__setattr__(self, "rank_profile", check_rank_profile(rp, n1, n2, n3))
        elif rp not in (None, "full", "deficient"):
            raise ValueError(f"rank_profile must be a rank list, 'full' or 'deficient', got {rp!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        keys = {"theorem", "dims", "trials", "seed", "scale", "rank_profile", "width", "start"}
        unknown = set(d) - keys
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class ExperimentRow:
    trial: int
    seed: int
    applicability: str
    bound_F: float
    actual_F: float
    ratio_F: float
    bound_2: float
    actual_2: float
    ratio_2: float
    holds_F: bool | None
    holds_2: bool | None
    holds_extra: bool | None
    kappa_F: float
    kappa_2: float
    gamma_F: float | None
    gamma_2: float | None
    mu: float | None
    lam: float | None
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.applicability == Applicability.APPLICABLE.value

    @property
    def violated(self) -> bool:
        return self.applicable and not (self.holds_F and self.holds_2 and self.holds_extra)


COLUMNS = [f.name for f in ExperimentRow.__dataclass_fields__.values()]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ExperimentRow] = field(default_factory=list)

    @property
    def applicable(self) -> int:
        return sum(r.applicable for r in self.rows)

    @property
    def hypothesis_violations(self) -> int:
        return len(self.rows) - self.applicable

    @property
    def violations(self) -> int:
        return sum(r.violated for r in self.rows)

    def max_ratio(self) -> float:
        vals = [x for r in self.rows if r.applicable for x in (r.ratio_F, r.ratio_2)
                if not math.isnan(x)]
        return max(vals, default=0.0)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def summary(self) -> dict:
        return {
            "trials": len(self.rows),
            "applicable": self.applicable,
            "hypothesis_violated": self.hypothesis_violations,
            "violations": self.violations,
            "max_ratio": self.max_ratio(),
        }


def trial_seed(master: int, index: int) -> int:
    """Sub-seed of trial ``index``: first word of ``SeedSequence([master, index])``."""
    return int(np.random.SeedSequence([int(master), int(index)]).generate_state(1, np.uint64)[0])


def thread_cap(requested: int | None = None) -> int:
    """Worker count: ``requested`` (default: CPU count) capped by ``TPROD_THREADS``."""
    n = requested if requested else (os.cpu_count() or 1)
    env = os.environ.get("TPROD_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return max(1, n)


# ------------------------------------------------------------- instances


def _ranks(cfg: ExperimentConfig, rng: np.random.Generator, n1: int, n2: int, n3: int):
    rp = cfg.rank_profile
    if isinstance(rp, tuple):
        return rp
    if rp == "full":
        return (min(n1, n2),) * n3
    if rp == "deficient":
        return random_rank_profile(n1, n2, n3, rng, deficient=True, nonzero=True)
    return random_rank_profile(n1, n2, n3, rng, deficient=False, min_rank=1)


def _scaled_direction(dims, rng, size: float, norm: str = "2") -> Tensor3:
    return unit_tensor(dims, rng, norm) * size


def _identity_report(name: str, got: Tensor3, ref: Tensor3, tol: float) -> BoundReport:
    relF = frobenius_norm(got - ref) / max(frobenius_norm(ref), np.finfo(float).tiny)
    rel2 = spectral_norm(got - ref) / max(spectral_norm(ref), np.finfo(float).tiny)
    return BoundReport(name, bound_F=tol, bound_2=tol, actual_F=relF, actual_2=rel2)


def _violated(name: str, reason: str) -> BoundReport:
    nan = float("nan")
    return BoundReport(name, nan, nan, nan, nan,
                       applicability=Applicability.HYPOTHESIS_VIOLATED, reason=reason)


def run_trial(cfg: ExperimentConfig, index: int) -> ExperimentRow:
    """Generate trial ``index`` of ``cfg`` and evaluate its calculator."""
    seed = trial_seed(cfg.seed, index)
    rng = np.random.default_rng(seed)
    rep = _evaluate(cfg, rng, index)
    return ExperimentRow(
        trial=index,
        seed=seed,
        applicability=rep.applicability.value,
        bound_F=rep.bound_F,
        actual_F=rep.actual_F,
        ratio_F=rep.ratio_F if rep.applicable else float("nan"),
        bound_2=rep.bound_2,
        actual_2=rep.actual_2,
        ratio_2=rep.ratio_2 if rep.applicable else float("nan"),
        holds_F=rep.holds_F,
        holds_2=rep.holds_2,
        holds_extra=(all(c.holds for c in rep.extra.values()) if rep.applicable else None),
        kappa_F=rep.kappa_F,
        kappa_2=rep.kappa_2,
        gamma_F=rep.gamma_F,
        gamma_2=rep.gamma_2,
        mu=rep.mu,
        lam=rep.lam,
        reason=rep.reason or "",
    )


def _evaluate(cfg: ExperimentConfig, rng: np.random.Generator, index: int) -> BoundReport:
    th = cfg.theorem
    n1, n2, n3, n4 = cfg.dims
    s = cfg.scale

    if th in (Theorem.T3_1, Theorem.T3_2, Theorem.T3_3):
        A = conditioned(n1, n1, n3, rng)
        E = _scaled_direction(A.shape, rng, s * spectral_norm(A))
        if th is Theorem.T3_1:
            return inv_perturb_posterior(A, E)
        if th is Theorem.T3_2:
            return inv_perturb_prior(A, E)
        B = gaussian((n1, n4, n3), rng)
        K = _scaled_direction(B.shape, rng, s * frobenius_norm(B), "F")
        return equation_perturb(A, E, B, K)

    if th in (Theorem.T4_1, Theorem.T4_2, Theorem.T4_3, Theorem.T4_4):
        A = conditioned(n1, n2, n3, rng, ranks=_ranks(cfg, rng, n1, n2, n3))
        size = s * spectral_norm(A)
        if th is Theorem.T4_1:
            return pinv_perturb_general(A, _scaled_direction(A.shape, rng, size))
        E = rank_preserving_perturbation(A, size, rng)
        if th is Theorem.T4_2:
            return pinv_perturb_rank_preserving(A, E)
        if th is Theorem.T4_3:
            return pinv_perturb_relative(A, E)
        B = gaussian((n1, n4, n3), rng)
        K = _scaled_direction(B.shape, rng, s * frobenius_norm(B), "F")
        return lstsq_perturb(A, E, B, K)

    if th is Theorem.T5_2:
        A, f = _smw_instance(cfg, rng, index)
        f = build_smw_factors(A, f.U, f.B * s, f.V)
        D = tprod(A, gaussian((n2, n4, n3), rng))
        if frobenius_norm(D) == 0:
            return _violated(th.value, "right-hand side D is zero")
        H = _scaled_direction(D.shape, rng, s * frobenius_norm(D), "F")
        return multilinear_smw_perturb(A, f, D, H)

    if th is Theorem.SMW_INV:
        A = conditioned(n1, n1, n3, rng)
        B = conditioned(cfg.width, cfg.width, n3, rng)
        U = gaussian((n1, cfg.width, n3), rng) * s
        V = gaussian((cfg.width, n1, n3), rng)
        M = A + tprod(tprod(U, B), V)
        try:
            got = smw_inverse(A, U, B, V)
            ref = inv(M)
        except SingularTensor as exc:
            return _violated(th.value, str(exc))
        return _identity_report(th.value, got, ref, SMW_INV_TOL)

    A, f = _smw_instance(cfg, rng, index)
    M = A + f.update()
    return _identity_report(th.value, smw_pinv(A, f), pinv(M), SMW_PINV_TOL)


def _smw_instance(cfg: ExperimentConfig, rng, index: int):
    """Alternate the two conditioned families by trial parity; fall back to
    the trivial family when the dimensions leave no room for the lifted one."""
    n1, n2, n3, _ = cfg.dims
    family = "lifted" if index % 2 == 0 else "trivial"
    try:
        return construct_conditioned_instance((n1, cfg.width, n3), rng, family=family, cols=n2)
    except InfeasibleDims:
        return construct_conditioned_instance((n1, cfg.width, n3), rng, family="trivial",
                                              cols=n2)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Run every trial; rows come back in trial order whatever ``threads`` is."""
    indices = range(cfg.start, cfg.start + cfg.trials)
    workers = thread_cap(threads)
    if workers == 1:
        rows = [run_trial(cfg, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda i: run_trial(cfg, i), indices))
    return ExperimentResult(cfg, rows)


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_csv(result: ExperimentResult) -> str:
    """Header, one line per trial, then ``# summary key=value ...``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in result.rows:
        w.writerow([_fmt(getattr(row, c)) for c in COLUMNS])
    summ = " ".join(f"{k}={_fmt(v)}" for k, v in result.summary().items())
    buf.write(f"# summary theorem={result.config.theorem.value} {summ}\n")
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def format_json(result: ExperimentResult) -> str:
    cfg = asdict(result.config)
    cfg["theorem"] = result.config.theorem.value
    out = {
        "config": cfg,
        "tolerance": {"relative": REL_SLACK, "absolute": ABS_SLACK},
        "rows": [{c: _json_value(getattr(r, c)) for c in COLUMNS} for r in result.rows],
        "summary": result.summary(),
    }
    return json.dumps(out, indent=1) + "\n"


# ---------------------------------------------------------------- golden


def golden_names() -> list[str]:
    root = resources.files("tproduct") / "golden"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_golden(name: str) -> ExperimentConfig:
    path = resources.files("tproduct") / "golden" / f"{name}.json"
    if not path.is_file():
        raise ValueError(f"no golden config named {name!r}; have {golden_names()}")
    return ExperimentConfig.from_dict(json.loads(path.read_text()))

