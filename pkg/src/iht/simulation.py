"""Data generators and Monte Carlo drivers for the reference studies.

Each replication draws from its own counter-based (Philox) stream keyed by
(master seed, replication index), so results are independent of execution
order or worker count. Drivers cover estimated test levels, the
distribution of the sequential dimension estimate, and direction-recovery
accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import fit_iht, iht_spectrum
from .dimension_tests import run_test
from .errors import NumericError
from .standardize import Dataset, standardize

MODELS = ("null", "linear", "linquad", "linquad_chisq", "expsin")

# Dimension of the population transform span under each model.
TRUE_K = {"null": 0, "linear": 1, "linquad": 2, "linquad_chisq": 2, "expsin": 2}

DEFAULT_ALPHAS = (0.01, 0.05, 0.10, 0.15)


@dataclass(frozen=True)
class SimConfig:
    """Declarative description of one simulation study cell."""

    model: str
    n: int
    p: int = 4
    sigma: float = 1.0
    reps: int = 1000
    seed: int = 0
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    j_test: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.model == "expsin" and self.p != 5:
            raise ValueError("expsin model is defined for p = 5")
        if self.model in ("linquad", "linquad_chisq") and self.p < 2:
            raise ValueError(f"{self.model} model needs p >= 2")
        if self.n < self.p + 2:
            raise ValueError("n must be at least p + 2")
        if self.j_test is not None and not 0 <= self.j_test < self.p:
            raise ValueError(f"j_test out of range [0, {self.p - 1}]")

    @property
    def true_k(self) -> int:
        return TRUE_K[self.model]

    @property
    def decided_j(self) -> int:
        return self.true_k if self.j_test is None else self.j_test


def _check_references(references):
    refs = tuple(references)
    if not refs or any(r not in ("chisq", "weighted") for r in refs):
        raise ValueError(
            f"references must be drawn from ('chisq', 'weighted'), got {refs}"
        )
    return refs


def _rep_rng(seed: int, rep_index: int) -> np.random.Generator:
    key = np.array([seed, rep_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def generate(cfg: SimConfig, rep_index: int) -> Dataset:
    """Deterministic dataset for one replication.

    Predictors are independent standard normals; the response follows the
    configured model. Draw order (predictors first, then error variates) is
    part of the determinism contract.
    """
    rng = _rep_rng(cfg.seed, rep_index)
    Z = rng.standard_normal((cfg.n, cfg.p))
    if cfg.model == "null":
        y = rng.standard_normal(cfg.n)
    elif cfg.model == "linear":
        y = Z[:, 0] + cfg.sigma * rng.standard_normal(cfg.n)
    elif cfg.model == "linquad":
        y = Z[:, 0] + 0.2 * (Z[:, 0] + Z[:, 1]) ** 2 + cfg.sigma * rng.standard_normal(cfg.n)
    elif cfg.model == "linquad_chisq":
        g = rng.standard_normal((cfg.n, 2))
        err = 0.5 * ((g**2).sum(axis=1) - 2.0)
        y = Z[:, 0] + 0.2 * (Z[:, 0] + Z[:, 1]) ** 2 + err
    else:  # expsin
        y = (
            np.exp(0.3 * (2.0 * Z[:, 0] + 3.0 * Z[:, 1]))
            + 1.6 * np.sin(Z[:, 0] - Z[:, 1])
            + cfg.sigma * rng.standard_normal(cfg.n)
        )
    names = tuple(f"z{i + 1}" for i in range(cfg.p))
    return Dataset(X=Z, y=y, column_names=names, response_name="y")


@dataclass(frozen=True)
class LevelTable:
    """Estimated rejection rates (percent) per (reference, alpha)."""

    config: SimConfig
    references: tuple[str, ...]
    rates: dict
    ses: dict
    failures: int

    COLUMNS = ("reference", "alpha", "rate_pct", "se_pct")

    def rows(self):
        out = []
        for ref in self.references:
            for a in self.config.alphas:
                out.append(
                    {
                        "reference": ref,
                        "alpha": a,
                        "rate_pct": self.rates[ref, a],
                        "se_pct": self.ses[ref, a],
                    }
                )
        return out


def level_study(cfg: SimConfig, references=("chisq", "weighted")) -> LevelTable:
    """Estimated level of the rank test at j = true k, per nominal alpha.

    Both reference distributions are evaluated on the same data in each
    replication. Replications that fail numerically are counted separately
    and excluded from the rates.
    """
    j = cfg.decided_j
    refs = _check_references(references)
    need_weighted = "weighted" in refs
    pvals = {ref: [] for ref in refs}
    failures = 0
    for r in range(cfg.reps):
        try:
            s = standardize(generate(cfg, r))
            fit = fit_iht(s)
            spec = iht_spectrum(fit)
            res = run_test(s, fit, spec, j, reference="both" if need_weighted else "chisq")
        except NumericError:
            failures += 1
            continue
        for ref in refs:
            pvals[ref].append(res.p_value(ref))
    good = cfg.reps - failures
    rates, ses = {}, {}
    for ref in refs:
        arr = np.asarray(pvals[ref])
        for a in cfg.alphas:
            rate = 100.0 * float((arr <= a).mean()) if good else float("nan")
            rates[ref, a] = rate
            ses[ref, a] = float(np.sqrt(rate * (100.0 - rate) / good)) if good else float("nan")
    return LevelTable(config=cfg, references=refs, rates=rates, ses=ses, failures=failures)


@dataclass(frozen=True)
class KhatTable:
    """Counts of the sequential dimension estimate per (reference, alpha).

    Counts are binned as k_hat = 0, 1, 2 and >= 3.
    """

    config: SimConfig
    references: tuple[str, ...]
    counts: dict
    failures: int

    COLUMNS = ("reference", "alpha", "k0", "k1", "k2", "k3plus")

    def rows(self):
        out = []
        for ref in self.references:
            for a in self.config.alphas:
                c = self.counts[ref, a]
                out.append(
                    {
                        "reference": ref,
                        "alpha": a,
                        "k0": c[0],
                        "k1": c[1],
                        "k2": c[2],
                        "k3plus": c[3],
                    }
                )
        return out


def khat_study(cfg: SimConfig, alphas=None, references=("chisq", "weighted")) -> KhatTable:
    """Distribution of the sequential estimate k_hat over replications.

    The full p-value trail (j = 0..p-1) is computed once per replication and
    reused across nominal levels: k_hat at level alpha is the first j whose
    p-value exceeds alpha, or p if every hypothesis is rejected.
    """
    alphas = cfg.alphas if alphas is None else tuple(float(a) for a in alphas)
    refs = _check_references(references)
    need_weighted = "weighted" in refs
    p = cfg.p
    trails = {ref: [] for ref in refs}
    failures = 0
    for r in range(cfg.reps):
        try:
            s = standardize(generate(cfg, r))
            fit = fit_iht(s)
            spec = iht_spectrum(fit)
            results = [
                run_test(s, fit, spec, j, reference="both" if need_weighted else "chisq")
                for j in range(p)
            ]
        except NumericError:
            failures += 1
            continue
        for ref in refs:
            trails[ref].append([res.p_value(ref) for res in results])
    counts = {}
    for ref in refs:
        arr = np.asarray(trails[ref])  # (good, p)
        for a in alphas:
            accept = arr > a
            khat = np.where(accept.any(axis=1), accept.argmax(axis=1), p)
            counts[ref, a] = (
                int((khat == 0).sum()),
                int((khat == 1).sum()),
                int((khat == 2).sum()),
                int((khat >= 3).sum()),
            )
    return KhatTable(config=cfg, references=refs, counts=counts, failures=failures)


@dataclass(frozen=True)
class DirectionAccuracy:
    """Quantiles of |corr(Z_t, fitted)| per target coordinate."""

    config: SimConfig
    k: int
    targets: tuple[int, ...]
    quantiles: dict
    probs: tuple[float, ...] = (0.05, 0.5, 0.95)

    COLUMNS = ("target", "q05", "q50", "q95")

    def rows(self):
        return [
            {
                "target": f"z{t}",
                "q05": self.quantiles[t][0],
                "q50": self.quantiles[t][1],
                "q95": self.quantiles[t][2],
            }
            for t in self.targets
        ]


def direction_accuracy(cfg: SimConfig, k: int = 2, targets=(1, 2)) -> DirectionAccuracy:
    """Accuracy of the leading k directions at recovering target coordinates.

    Per replication and target t, regress the raw coordinate Z_t on the
    first k estimated predictors (with intercept) and record the absolute
    correlation between Z_t and the fitted values; report the 5, 50 and 95
    percent empirical quantiles (linear interpolation).
    """
    if not 1 <= k <= cfg.p:
        raise ValueError(f"k={k} out of range [1, {cfg.p}]")
    if any(not 1 <= t <= cfg.p for t in targets):
        raise ValueError(f"targets must lie in [1, {cfg.p}]")
    corrs = {t: [] for t in targets}
    for r in range(cfg.reps):
        d = generate(cfg, r)
        s = standardize(d)
        spec = iht_spectrum(fit_iht(s))
        pred = s.Z_hat @ spec.left_vectors[:, :k]
        design = np.column_stack([np.ones(cfg.n), pred])
        for t in targets:
            z = d.X[:, t - 1]
            coef, *_ = np.linalg.lstsq(design, z, rcond=None)
            fitted = design @ coef
            sf = fitted.std()
            if sf <= 1e-14 * max(1.0, np.abs(fitted).max()):
                corrs[t].append(0.0)
            else:
                corrs[t].append(abs(float(np.corrcoef(z, fitted)[0, 1])))
    probs = (0.05, 0.5, 0.95)
    quantiles = {
        t: tuple(float(q) for q in np.quantile(np.asarray(corrs[t]), probs))
        for t in targets
    }
    return DirectionAccuracy(config=cfg, k=k, targets=tuple(targets), quantiles=quantiles, probs=probs)
