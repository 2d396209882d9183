"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one `ACCEPT-n ... PASS/FAIL` line (visible with -s or -rA).
Monte Carlo criteria run the full 1000-replication design at the fixed
acceptance seed; tolerances follow the benchmark contract and combine the
Monte Carlo error of both the reference values and this run.
"""

import hashlib
import time
from importlib.resources import files

import numpy as np
import pytest

import conftest
from iht.chi2mix import chisq_sf, mixture_sf
from iht.core import IhtFit, fit_iht, iht_spectrum, null_bases
from iht.dimension_tests import c2_hat, run_test, weights
from iht.simulation import SimConfig, direction_accuracy, khat_study, level_study
from iht.standardize import Dataset, apply_log, load_dataset, standardize

from test_dimension_tests import c2_dense_oracle, weights_dense_oracle

# Fixed acceptance seed: a 1000-replication estimate carries ~0.3-1.1 point
# Monte Carlo error per cell, so the suite pins the stream for determinism.
ACCEPT_SEED = 1
ALPHAS = (0.01, 0.05, 0.10, 0.15)

FIXTURE_SHA256 = "a3ce6d9f1c176cd72e57c08a0db31b044699ad33af47180b3391948643dae431"

# Golden regression values for the bundled fixture (deterministic given the
# pinned CSV; first four trail rows).
GOLDEN_T = (135.2436527127883, 20.056670130468934, 11.327262205078231, 2.6621384518982936)
GOLDEN_P_CHISQ = (5.0346253119198845e-26, 0.0027057989188074808, 0.045263850715502256, 0.6158559634399239)
GOLDEN_P_WEIGHTED = (8.641569682055206e-10, 0.031400990105172055, 0.19460370669825788, 0.8164541309147576)


def report(name, ok, detail=""):
    line = f"ACCEPT-{name}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    conftest.acceptance_lines.append(line)
    return ok


def within(values, targets, tol):
    return all(abs(v - t) <= tol for v, t in zip(values, targets))


def test_accept_1_null_levels():
    t0 = time.time()
    cfg = SimConfig(model="null", n=200, p=4, reps=1000, seed=ACCEPT_SEED, alphas=ALPHAS)
    tab = level_study(cfg)
    elapsed = time.time() - t0
    chisq = [tab.rates["chisq", a] for a in ALPHAS]
    weighted = [tab.rates["weighted", a] for a in ALPHAS]
    ok = (
        tab.failures == 0
        and within(chisq, (1.1, 4.1, 9.3, 14.5), 2.8)
        and within(weighted, (1.3, 4.3, 10.5, 14.8), 2.8)
        and elapsed < 120.0
    )
    assert report(
        "1 null levels",
        ok,
        f"chisq={np.round(chisq, 1).tolist()} weighted={np.round(weighted, 1).tolist()} "
        f"({elapsed:.1f}s)",
    )


def test_accept_2_linquad_levels():
    cfg = SimConfig(model="linquad", n=400, p=4, sigma=1.6, reps=1000,
                    seed=ACCEPT_SEED, alphas=ALPHAS)
    tab = level_study(cfg)
    chisq = [tab.rates["chisq", a] for a in ALPHAS]
    weighted = [tab.rates["weighted", a] for a in ALPHAS]

    cfg_small = SimConfig(model="linquad", n=100, p=4, sigma=1.6, reps=1000,
                          seed=ACCEPT_SEED, alphas=(0.05,))
    tab_small = level_study(cfg_small, references=("weighted",))
    small5 = tab_small.rates["weighted", 0.05]

    ok_chisq = within(chisq, (1.4, 4.6, 9.4, 15.5), 2.8)
    ok_weighted = within(weighted, (0.7, 4.1, 9.5, 14.2), 2.8)
    ok_small = small5 <= 3.0
    ok = tab.failures == 0 and tab_small.failures == 0 and ok_chisq and ok_weighted and ok_small
    assert report(
        "2 model levels",
        ok,
        f"chisq={np.round(chisq, 1).tolist()} weighted={np.round(weighted, 1).tolist()} "
        f"small-n weighted 5%={small5:.1f}",
    )


def test_accept_3_khat_distribution():
    cfg = SimConfig(model="linquad", n=100, p=4, sigma=0.4, reps=1000,
                    seed=ACCEPT_SEED, alphas=(0.05,))
    tab = khat_study(cfg, references=("chisq",))
    counts = tab.counts["chisq", 0.05]
    pct_k2 = 100.0 * counts[2] / cfg.reps
    pct_k1 = 100.0 * counts[1] / cfg.reps
    ok = tab.failures == 0 and abs(pct_k2 - 93.1) <= 3.5 and pct_k1 <= 5.0
    assert report(
        "3 khat distribution",
        ok,
        f"counts={counts} k2={pct_k2:.1f}% k1={pct_k1:.1f}%",
    )


def test_accept_4_direction_accuracy():
    cfg = SimConfig(model="linquad", n=100, p=4, sigma=0.4, reps=1000, seed=ACCEPT_SEED)
    da = direction_accuracy(cfg, k=2, targets=(1,))
    q05, q50, _ = da.quantiles[1]
    ok = abs(q50 - 0.997) <= 0.005 and abs(q05 - 0.98) <= 0.02
    assert report("4 direction accuracy", ok, f"q05={q05:.4f} q50={q50:.4f}")


def test_accept_5_fixture_golden(ozone_csv):
    digest = hashlib.sha256(open(ozone_csv, "rb").read()).hexdigest()
    d = apply_log(load_dataset(ozone_csv, "ozone"), ["sbtp", "ibtp"])
    s = standardize(d)
    fit = fit_iht(s)
    spec = iht_spectrum(fit)
    trail = [run_test(s, fit, spec, j, "both") for j in range(d.p)]
    T = [r.T_j for r in trail[:4]]
    p_c = [r.p_chisq for r in trail[:4]]
    p_w = [r.p_weighted for r in trail[:4]]

    k_hat = {}
    for ref in ("chisq", "weighted"):
        k_hat[ref] = d.p
        for r in trail:
            if r.p_value(ref) > 0.05:
                k_hat[ref] = r.j
                break

    ok = (
        digest == FIXTURE_SHA256
        and all(abs(t - g) <= 0.01 * g for t, g in zip(T, GOLDEN_T))
        and all(abs(a - g) <= 5e-3 for a, g in zip(p_c, GOLDEN_P_CHISQ))
        and all(abs(a - g) <= 3e-2 for a, g in zip(p_w, GOLDEN_P_WEIGHTED))
        and k_hat == {"chisq": 3, "weighted": 2}
    )
    assert report(
        "5 fixture golden",
        ok,
        f"T={np.round(T, 2).tolist()} k_hat={k_hat} sha={digest[:8]}",
    )


def test_accept_6_property_suite(rng):
    t0 = time.time()
    notes = []

    # (a) affine invariance of T_j and both p-values, 20 random transforms
    cfg = SimConfig(model="linquad", n=150, p=4, sigma=0.4, reps=1, seed=ACCEPT_SEED)
    from iht.simulation import generate

    d = generate(cfg, 0)
    s = standardize(d)
    fit = fit_iht(s)
    spec = iht_spectrum(fit)
    base = [run_test(s, fit, spec, j, "both") for j in range(4)]
    ok_a = True
    for _ in range(20):
        A = rng.standard_normal((4, 4)) + 2.5 * np.eye(4)
        c = float(rng.uniform(0.5, 3.0)) * (-1 if rng.uniform() < 0.5 else 1)
        dt = Dataset(
            X=d.X @ A.T + rng.standard_normal(4),
            y=c * d.y + float(rng.standard_normal()),
            column_names=d.column_names,
        )
        st_ = standardize(dt)
        fit_t = fit_iht(st_)
        spec_t = iht_spectrum(fit_t)
        for j, res in enumerate(base):
            res_t = run_test(st_, fit_t, spec_t, j, "both")
            ok_a &= abs(res_t.T_j - res.T_j) <= 1e-6 * abs(res.T_j)
            ok_a &= abs(res_t.p_chisq - res.p_chisq) <= max(1e-6 * res.p_chisq, 1e-12)
            # deep-tail weighted p-values carry the quadrature's absolute
            # accuracy floor
            ok_a &= abs(res_t.p_weighted - res.p_weighted) <= max(
                1e-6 * res.p_weighted, 1e-7
            )
    notes.append(f"a:{'ok' if ok_a else 'FAIL'}")

    # (b) mixture tail vs chi-squared reduction and vs MC oracle
    ok_b = all(
        abs(mixture_sf(x, np.ones(m)) - chisq_sf(x, m)) <= 1e-6
        for m in (1, 2, 3, 5, 16)
        for x in (1.0, 5.0, 20.0)
    )
    mc_rng = np.random.default_rng(998877)
    n_draws = 10**7
    for _ in range(10):
        m = int(mc_rng.integers(2, 9))
        w = np.exp(mc_rng.uniform(np.log(0.05), np.log(3.0), size=m))
        x = float(mc_rng.uniform(0.4, 1.6)) * float(w.sum())
        hits = 0
        chunk = 2 * 10**6
        for _ in range(n_draws // chunk):
            q = (mc_rng.standard_normal((chunk, m)) ** 2) @ w
            hits += int((q > x).sum())
        pmc = hits / n_draws
        se = np.sqrt(max(pmc * (1 - pmc), 1e-12) / n_draws)
        ok_b &= abs(mixture_sf(x, w) - pmc) <= 3 * se + 1e-6
    notes.append(f"b:{'ok' if ok_b else 'FAIL'}")

    # (c) dense-oracle equality for the scaling constant and the weights
    ok_c = True
    for model, n, p, seed in (("linquad", 200, 4, 3001), ("linquad", 200, 3, 3002)):
        cfg = SimConfig(model=model, n=n, p=p, sigma=0.4, reps=1, seed=seed)
        dd = generate(cfg, 0)
        ss = standardize(dd)
        ff = fit_iht(ss)
        sp = iht_spectrum(ff)
        for j in range(p - 1):
            nb = null_bases(sp, j)
            c2 = c2_hat(ss, ff, nb)
            ok_c &= abs(c2 - c2_dense_oracle(ss, ff, nb)) <= 1e-10 * c2
            w = weights(ss, ff, nb, c2)
            w_o = weights_dense_oracle(ss, ff, nb, c2)
            ok_c &= np.all(np.abs(w - w_o) <= 1e-10 * max(w_o.max(), 1.0) + 1e-12)
    notes.append(f"c:{'ok' if ok_c else 'FAIL'}")

    # (d) constructed rank-2 matrix: estimated null basis annihilates it
    Q1, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    Q2, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    B = Q1 @ np.diag([3.0, 1.5, 0.0, 0.0]) @ Q2.T
    fitB = IhtFit(beta_hat=B[:, 0], e_hat=np.zeros(10), H_hat=np.zeros((4, 4)),
                  B_hat=B, B0_hat=B[:, :3], n=10)
    nb = null_bases(iht_spectrum(fitB), 2)
    ok_d = np.linalg.norm(nb.Gamma0.T @ B) < 1e-10
    notes.append(f"d:{'ok' if ok_d else 'FAIL'}")

    # (e) asymptotic weight structure at n = 2000 under the constrained case
    hits = 0
    for rep in range(100):
        cfg = SimConfig(model="linquad", n=2000, p=4, sigma=0.4, reps=100,
                        seed=ACCEPT_SEED)
        dd = generate(cfg, rep)
        ss = standardize(dd)
        ff = fit_iht(ss)
        sp = iht_spectrum(ff)
        nb = null_bases(sp, 2)
        w = np.sort(weights(ss, ff, nb, c2_hat(ss, ff, nb)))[::-1]
        if np.all((w[:2] > 0.5) & (w[:2] < 1.5)) and np.all(w[2:] < 0.25):
            hits += 1
    ok_e = hits >= 90
    notes.append(f"e:{hits}/100")

    elapsed = time.time() - t0
    ok = ok_a and ok_b and ok_c and ok_d and ok_e and elapsed < 300.0
    assert report("6 property suite", ok, " ".join(notes) + f" ({elapsed:.0f}s)")
