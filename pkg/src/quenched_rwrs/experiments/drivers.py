"""Quenched and annealed law experiments built on the core modules."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .. import strassen
from ..bounds import (calibrate_truncation_constant, check_second_moment, check_truncation_H,
                      check_truncation_f, h_truncation_gaps, tail_integrals)
from ..local_time import bm_local_time
from ..rwrs import compute_K, compute_Z, lil_denominator, rescale
from ..sampler import (DISCRETE, ContinuumField, FieldKindError, QuenchedField,
                       replica_seed, simulate_bm, simulate_srw)
from ..stats import EmpiricalDistribution, ks_critical_value, ks_distance, wasserstein1
from ..strassen import StrassenFunction, rescale_profile, sup_distance
from ..theta import SceneryLattice, pairing, paired_run, theta_law, theta_samples
from .config import ExperimentConfig


def map_replicas(fn, count: int, workers: int = 1) -> np.ndarray:
    """``[fn(i) for i in range(count)]`` as an array, optionally across processes.

    Every replica derives its randomness from its own index, so the result does
    not depend on ``workers``.
    """
    if workers <= 1:
        return np.array([fn(i) for i in range(count)], dtype=float)
    with ProcessPoolExecutor(workers) as pool:
        return np.array(list(pool.map(fn, range(count), chunksize=max(1, count // (8 * workers)))),
                        dtype=float)


class SceneryProfile(ContinuumField):
    """Partial sums ``Xi`` of a discrete scenery, linearly interpolated.

    ``Xi(x) - Xi(x - 1) = xi_x`` for every integer ``x`` and ``Xi(0) = 0``, so
    ``K_n = sum_x l_n(x) (Xi(x) - Xi(x - 1))``.
    """

    def __init__(self, scenery):
        if getattr(scenery, "kind", None) != DISCRETE:
            raise FieldKindError("scenery_profile needs a discrete scenery")
        self.scenery = scenery
        self.resolution = 0
        self._right = np.zeros(1)  # Xi(0), Xi(1), ...
        self._left = np.zeros(1)   # Xi(0), Xi(-1), ...

    def _grow(self, upto: int):
        if upto >= self._right.size:
            size = max(upto + 1, 2 * self._right.size)
            xi = self.scenery.site_values(np.arange(1, size))
            self._right = np.concatenate(([0.0], np.cumsum(xi)))
        if upto >= self._left.size:
            size = max(upto + 1, 2 * self._left.size)
            xi = self.scenery.site_values(-np.arange(0, size - 1))
            self._left = np.concatenate(([0.0], -np.cumsum(xi)))

    def at_sites(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        self._grow(int(np.max(np.abs(k), initial=0)) + 1)
        return np.where(k >= 0, self._right[np.clip(k, 0, None)], self._left[np.clip(-k, 0, None)])

    def values(self, x, level=None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo = np.floor(x).astype(np.int64)
        a, b = self.at_sites(lo), self.at_sites(lo + 1)
        return a + (x - lo) * (b - a)


def scenery_profile(field) -> SceneryProfile:
    return SceneryProfile(field)


@dataclass(frozen=True, eq=False)
class QuenchedLawPoint:
    lam: float
    time: float
    law: EmpiricalDistribution
    matched_target: str | None = None
    match_sup_distance: float | None = None


def _k_scaled(field, n, seed, i):
    path = simulate_srw(n, replica_seed(seed, i))
    return rescale(compute_K(path, field), n).scaled


def quenched_law_discrete(field, n: int, replicas: int, seed: int,
                          workers: int = 1) -> QuenchedLawPoint:
    """Law of ``K_n / sqrt(2 n^{3/2} ln ln n)`` over walks, scenery held fixed."""
    lil_denominator(n)  # domain check
    vals = map_replicas(partial(_k_scaled, field, n, seed), replicas, workers)
    law = EmpiricalDistribution(vals, {"experiment": "quenched_law_discrete", "n": n,
                                       "seed": seed, "replicas": replicas})
    return QuenchedLawPoint(math.sqrt(n), float(n), law)


def kappa(t: float) -> float:
    """``sqrt(ln ln sqrt(t) / ln ln t)``: ratio of the scale-sqrt(t) and time-t LIL normalisers."""
    return math.sqrt(math.log(math.log(math.sqrt(t))) / math.log(math.log(t)))


def _h_value(lattice, dt, h, seed, i):
    path = simulate_bm(1.0, dt, replica_seed(seed, i))
    grid = bm_local_time(path, h)
    return pairing(grid, lattice.at(grid.edge_index))


def h_lambda_law(field, lam: float, replicas: int, seed: int, dt: float = 1e-4,
                 h: float = 0.02, workers: int = 1) -> np.ndarray:
    """``H_lam`` on ``replicas`` independent paths, unsorted, in replica order."""
    lattice = SceneryLattice(field, lam, h)
    return map_replicas(partial(_h_value, lattice, dt, h, seed), replicas, workers)


def quenched_law_bmbs(field, t: float, replicas: int, seed: int, dt: float = 1e-4,
                      h: float = 0.02, workers: int = 1) -> QuenchedLawPoint:
    """Law of ``Z_t / sqrt(2 t^{3/2} ln ln t)`` under the fixed scenery.

    Uses ``Z_t / t^{3/4} = -int t^{-1/4} W(sqrt(t) y) dL_1(y)`` in law, i.e.
    ``-kappa(t) H_lam`` with ``lam = sqrt(t)``.
    """
    lil_denominator(t)  # domain check
    lam = math.sqrt(t)
    vals = -kappa(t) * h_lambda_law(field, lam, replicas, seed, dt, h, workers)
    law = EmpiricalDistribution(vals, {"experiment": "quenched_law_bmbs", "t": t,
                                       "seed": seed, "replicas": replicas, "dt": dt, "h": h})
    return QuenchedLawPoint(lam, float(t), law)


def match_distances(field, f: StrassenFunction, window, lambdas,
                    spacing: float = 1 / 256) -> np.ndarray:
    return np.array([sup_distance(rescale_profile(field, lam, window, spacing), f)
                     for lam in lambdas])


def find_matching_times(field, f: StrassenFunction, window, epsilon: float, lambdas,
                        spacing: float = 1 / 256) -> list[float]:
    """Scales in ``lambdas`` where ``W_lam`` is within ``epsilon`` of ``f`` on ``window``."""
    d = match_distances(field, f, window, lambdas, spacing)
    return sorted(float(lam) for lam, dist in zip(lambdas, d) if dist <= epsilon)


def lil_constant(field, config: ExperimentConfig) -> float:
    """Empirical ``A_W``: the uniform-LIL statistic maximised over the lambda grid."""
    return float(np.max(strassen.lil_statistic_over(field, config.lambdas, config.lil_window,
                                                    config.lil_spacing)))


@dataclass
class MatchedLaw:
    target: str
    lam: float
    sup_distance: float
    law: EmpiricalDistribution
    l1_distance: float
    l1_standard_error: float
    truncation_l1: float
    lemma_budget: float
    law_w1: float
    law_ks: float
    law_budget: float

    @property
    def within_lemma_budget(self) -> bool:
        return self.l1_distance <= self.lemma_budget

    @property
    def within_law_budget(self) -> bool:
        return self.law_w1 <= self.law_budget

    def summary(self) -> dict:
        return {
            "target": self.target, "lambda": self.lam, "sup_distance": self.sup_distance,
            "l1_distance": self.l1_distance, "l1_standard_error": self.l1_standard_error,
            "truncation_l1": self.truncation_l1, "lemma_budget": self.lemma_budget,
            "within_lemma_budget": self.within_lemma_budget, "law_w1_to_target": self.law_w1,
            "law_ks_to_target": self.law_ks, "law_budget": self.law_budget,
            "within_law_budget": self.within_law_budget, "law_mean": self.law.mean(),
        }


@dataclass
class NonconvergenceReport:
    scenery_seed: int
    a_w: float
    matches: dict
    laws: list
    ks_matrix: np.ndarray
    separation: float | None
    separation_threshold: float
    verdict: str
    theta_laws: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.verdict not in ("inconclusive", "vacuous")

    def summary(self) -> dict:
        return {
            "scenery_seed": self.scenery_seed, "A_W": self.a_w, "matches": self.matches,
            "laws": [m.summary() for m in self.laws],
            "ks_matrix": self.ks_matrix.tolist(), "separation": self.separation,
            "separation_threshold": self.separation_threshold, "verdict": self.verdict,
        }


def _law_slack(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    # four standard errors of a difference of means: sampling allowance for W1
    return 4.0 * math.sqrt(a.samples.var() / a.n + b.samples.var() / b.n)


def matched_law(field, name: str, f: StrassenFunction, lam: float, dist: float, a_w: float,
                config: ExperimentConfig, law_seed: int, theta: EmpiricalDistribution) -> MatchedLaw:
    """Quenched law at a matched scale, with its L1 and law budgets.

    The L1 budget is ``(5 + A_W) eps`` plus the measured truncation term
    ``E|H - H^{(n)}|`` (n = window radius) plus three standard errors. The law
    of ``Z~_t = -kappa H`` is compared with the law of ``-int f dL_1``, and
    ``W1`` between them is bounded by ``kappa D + (1 - kappa) E|int f dL_1|``.
    """
    radius = min(-config.window[0], config.window[1])
    run = paired_run(field, lam, f, config.l1_paths, law_seed + 1, radius, config.dt, config.h)
    budget = (5.0 + a_w) * config.epsilon + run.truncation_l1 + 3.0 * run.l1_standard_error
    point = quenched_law_bmbs(field, lam * lam, config.replicas, law_seed, config.dt, config.h,
                              config.workers)
    target_law = theta.negated()
    k = kappa(lam * lam)
    law_budget = (k * budget + (1.0 - k) * float(np.mean(np.abs(theta.samples)))
                  + _law_slack(point.law, target_law))
    return MatchedLaw(name, lam, dist, point.law, run.l1_distance, run.l1_standard_error,
                      run.truncation_l1, budget, wasserstein1(point.law, target_law),
                      ks_distance(point.law, target_law), law_budget)


def lemma_at_matches(field, targets: dict, config: ExperimentConfig) -> dict:
    """L1 distance against ``(5 + A_W) eps`` plus truncation slack at every match.

    The slack is the measured ``E|H - H^{(n)}|`` at the window radius plus three
    standard errors of the L1 estimate.
    """
    a_w = lil_constant(field, config)
    radius = min(-config.window[0], config.window[1])
    rows = []
    for t_index, (name, f) in enumerate(targets.items()):
        d = match_distances(field, f, config.window, config.lambdas, config.profile_spacing)
        for j in np.flatnonzero(d <= config.epsilon):
            lam = float(config.lambdas[j])
            run = paired_run(field, lam, f, config.l1_paths, config.path_seed + 500 + j,
                             radius, config.dt, config.h)
            slack = run.truncation_l1 + 3.0 * run.l1_standard_error
            budget = (5.0 + a_w) * config.epsilon + slack
            rows.append({"target": name, "lambda": lam, "sup_distance": float(d[j]),
                         "l1_distance": run.l1_distance, "slack": slack, "budget": budget,
                         "ok": run.l1_distance <= budget})
    return {"A_W": a_w, "rows": rows, "passed": all(r["ok"] for r in rows)}


def nonconvergence_report(field, targets: dict, config: ExperimentConfig) -> NonconvergenceReport:
    """Matched quenched laws for each target and the non-convergence verdict.

    Verdicts: ``"nonconvergence_evidenced"``, ``"no_separation"``,
    ``"budget_exceeded"``, ``"inconclusive"`` (some target never matched) and
    ``"vacuous"`` (fewer than two targets).
    """
    lambdas = config.lambdas
    matches = {}
    for name, f in targets.items():
        d = match_distances(field, f, config.window, lambdas, config.profile_spacing)
        hit = d <= config.epsilon
        matches[name] = {"lambdas": [float(v) for v in lambdas[hit]],
                         "sup_distances": [float(v) for v in d[hit]]}
    a_w = lil_constant(field, config)
    seed = getattr(field, "seed", None)
    if len(targets) < 2 or any(not m["lambdas"] for m in matches.values()):
        verdict = "vacuous" if len(targets) < 2 else "inconclusive"
        return NonconvergenceReport(seed, a_w, matches, [], np.zeros((0, 0)), None,
                                    config.separation_threshold, verdict)

    laws, thetas = [], {}
    law_index = 0
    for t_index, (name, f) in enumerate(targets.items()):
        thetas[name] = theta_law(f, config.replicas, config.path_seed + 1000 + t_index, config.dt)
        m = matches[name]
        best = np.argsort(m["sup_distances"], kind="stable")[:config.max_laws_per_target]
        for j in sorted(best):
            laws.append(matched_law(field, name, f, m["lambdas"][j], m["sup_distances"][j], a_w,
                                    config, config.path_seed + 2 * law_index, thetas[name]))
            law_index += 1

    k = len(laws)
    ks = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            ks[i, j] = ks[j, i] = ks_distance(laws[i].law, laws[j].law)
    across = [ks[i, j] for i in range(k) for j in range(k) if laws[i].target != laws[j].target]
    separation = float(max(across))
    budgets_ok = all(m.within_lemma_budget and m.within_law_budget for m in laws)
    if not budgets_ok:
        verdict = "budget_exceeded"
    elif separation >= config.separation_threshold:
        verdict = "nonconvergence_evidenced"
    else:
        verdict = "no_separation"
    return NonconvergenceReport(seed, a_w, matches, laws, ks, separation,
                                config.separation_threshold, verdict, thetas)


def quenched_scan(field, targets: dict, config: ExperimentConfig) -> dict:
    """Matching scales per target and the quenched law at the best matches."""
    lambdas = config.lambdas
    out = {"A_W": lil_constant(field, config), "matches": {}, "laws": []}
    samples = {}
    law_index = 0
    for name, f in targets.items():
        d = match_distances(field, f, config.window, lambdas, config.profile_spacing)
        hit = np.flatnonzero(d <= config.epsilon)
        out["matches"][name] = {"lambdas": lambdas[hit].tolist(), "sup_distances": d[hit].tolist(),
                                "min_sup_distance": float(d.min())}
        best = sorted(hit[np.argsort(d[hit], kind="stable")][:config.max_laws_per_target])
        for j in best:
            point = quenched_law_bmbs(field, lambdas[j] ** 2, config.replicas,
                                      config.path_seed + 2 * law_index, config.dt, config.h,
                                      config.workers)
            law_index += 1
            key = f"{name}_lam{lambdas[j]:.6g}"
            samples[key] = point.law.samples
            out["laws"].append({"target": name, "lambda": float(lambdas[j]),
                                "sup_distance": float(d[j]), "mean": point.law.mean(),
                                "samples": key})
    out["samples"] = samples
    return out


def calibrate_separation_threshold(targets: dict, replicas: int, seed: int,
                                   dt: float = 1e-4, epsilon: float = 0.4) -> dict:
    """Separation threshold for the non-convergence verdict from theta-law oracles.

    Matched quenched laws estimate ``-int f dL_1`` for each target. If every
    sample of both laws were displaced by at most ``epsilon`` in the least
    favourable direction, their KS distance could fall no lower than
    ``sup_x max(F_b(x - eps) - F_a(x + eps), F_a(x - eps) - F_b(x + eps))``;
    that floor, computed from independent theta laws, is the threshold.
    """
    names = list(targets)[:2]
    laws = {n: theta_law(targets[n], replicas, seed + i, dt).negated() for i, n in enumerate(names)}
    a, b = laws[names[0]], laws[names[1]]
    grid = np.unique(np.concatenate((a.samples, b.samples)))
    floor = np.maximum(b.cdf(grid - epsilon) - a.cdf(grid + epsilon),
                       a.cdf(grid - epsilon) - b.cdf(grid + epsilon))
    return {"ideal_ks": ks_distance(a, b), "threshold": float(max(0.0, floor.max())),
            "replicas": replicas, "seed": seed, "epsilon": epsilon, "targets": names}


def _annealed_k(n, law, scenery_seed, path_seed, i):
    field = QuenchedField(replica_seed(scenery_seed, i), "discrete_scenery", law)
    path = simulate_srw(n, replica_seed(path_seed, i))
    return compute_K(path, field) / n**0.75


def _annealed_z(t, dt, h, scenery_seed, path_seed, i):
    field = QuenchedField(replica_seed(scenery_seed, i), "continuum_scenery")
    path = simulate_bm(t, dt, replica_seed(path_seed, i))
    return compute_Z(bm_local_time(path, h), field) / t**0.75


def annealed_z_law(replicas: int, scenery_seed: int, path_seed: int, dt: float = 1e-4,
                   h: float = 0.02, t: float = 1.0, workers: int = 1) -> np.ndarray:
    return map_replicas(partial(_annealed_z, t, dt, h, scenery_seed, path_seed), replicas, workers)


def annealed_k_law(n: int, replicas: int, scenery_seed: int, path_seed: int,
                   law: str = "rademacher", workers: int = 1) -> np.ndarray:
    return map_replicas(partial(_annealed_k, n, law, scenery_seed, path_seed), replicas, workers)


def annealed_limit_check(config: ExperimentConfig, final_tolerance: float = 0.05,
                         noise: float = 0.03) -> dict:
    """KS between ``n^{-3/4} K_n`` (fresh scenery per walk) and ``Z_1`` along the schedule."""
    z = annealed_z_law(config.replicas, config.scenery_seed + 1, config.path_seed + 1,
                       config.dt, config.h, workers=config.workers)
    rows, samples = [], {"Z_1": z}
    for n in config.annealed_schedule:
        k = annealed_k_law(n, config.replicas, config.scenery_seed, config.path_seed,
                           config.scenery_law, config.workers)
        samples[f"K_{n}"] = k
        rows.append({"n": n, "ks": ks_distance(k, z), "w1": wasserstein1(k, z)})
    d = [r["ks"] for r in rows]
    nonincreasing = all(d[i + 1] <= d[i] + noise for i in range(len(d) - 1))
    final_ok = d[-1] <= final_tolerance
    return {"rows": rows, "nonincreasing_within_noise": nonincreasing,
            "final_ks": d[-1], "final_ok": final_ok, "passed": nonincreasing and final_ok,
            "critical_ks_99": ks_critical_value(config.replicas, config.replicas),
            "samples": samples}


def _scaling_direct(t, dt, h, scenery_seed, path_seed, i):
    field = QuenchedField(replica_seed(scenery_seed, i), "continuum_scenery")
    path = simulate_bm(t, dt, replica_seed(path_seed, i))
    return compute_Z(bm_local_time(path, h), field) / t**0.75


def _scaling_rescaled(t, dt, h, scenery_seed, path_seed, i):
    field = QuenchedField(replica_seed(scenery_seed, i), "continuum_scenery")
    path = simulate_bm(1.0, dt, replica_seed(path_seed, i))
    grid = bm_local_time(path, h)
    level = strassen.dyadic_level_for(math.sqrt(t) * h)
    w = field.values(math.sqrt(t) * grid.edges, level) / t**0.25
    return pairing(grid, w) * -1.0


def scaling_identity_check(config: ExperimentConfig, t: float = 16.0,
                           tolerance: float = 0.05) -> dict:
    """Direct ``Z_t / t^{3/4}`` against ``-int t^{-1/4} W(sqrt(t) y) dL_1(y)``."""
    direct = map_replicas(partial(_scaling_direct, t, config.dt, config.h, config.scenery_seed,
                                  config.path_seed), config.replicas, config.workers)
    rescaled = map_replicas(partial(_scaling_rescaled, t, config.dt, config.h,
                                    config.scenery_seed + 1, config.path_seed + 1),
                            config.replicas, config.workers)
    ks = ks_distance(direct, rescaled)
    return {"t": t, "ks": ks, "w1": wasserstein1(direct, rescaled), "passed": ks <= tolerance,
            "samples": {"direct": direct, "rescaled": rescaled}}


def verify_identities(config: ExperimentConfig, n_paths: int | None = None,
                      median_tol: float = 0.02, p95_tol: float = 0.1, cs_slack: float = 0.05) -> dict:
    """Three-estimator agreement and the per-path Cauchy-Schwarz bound over the dictionary.

    Runs at ``(dt, h)`` and again at ``(dt/2, h/2)``; the worst pairwise median
    discrepancy must drop under refinement.
    """
    n_paths = config.identity_paths if n_paths is None else n_paths
    rows, kept = [], {}
    for name, f in strassen.dictionary().items():
        row = {"target": name}
        for tag, dt, h in (("base", config.dt, config.h), ("fine", config.dt / 2, config.h / 2)):
            samples = theta_samples(f, n_paths, config.path_seed, dt, h)
            kept[f"{name}_{tag}"] = np.array([[s.value_occupation, s.value_stieltjes, s.value_ito]
                                              for s in samples]).ravel()
            d = np.array([s.discrepancies() for s in samples])
            row[tag] = {
                "median": np.median(d, axis=0).tolist(),
                "p95": np.quantile(d, 0.95, axis=0).tolist(),
                "worst_median": float(np.median(d, axis=0).max()),
                "worst_p95": float(np.quantile(d, 0.95, axis=0).max()),
                "cs_violations": int(sum(s.value_occupation**2 > s.sup_local_time + cs_slack
                                         for s in samples)),
                "cs_max_excess": float(max(s.value_occupation**2 - s.sup_local_time
                                           for s in samples)),
            }
        base, fine = row["base"], row["fine"]
        row["agreement_ok"] = base["worst_median"] <= median_tol and base["worst_p95"] <= p95_tol
        # a function with no slope anywhere has identically zero discrepancies
        row["refinement_ok"] = (fine["worst_median"] < base["worst_median"]
                                or base["worst_median"] == 0.0)
        row["cs_ok"] = base["cs_violations"] == 0 and fine["cs_violations"] == 0
        rows.append(row)
    passed = all(r["agreement_ok"] and r["refinement_ok"] and r["cs_ok"] for r in rows)
    return {"rows": rows, "n_paths": n_paths, "passed": passed, "samples": kept}


def lemma_bounds(config: ExperimentConfig, radii=(0, 1, 2, 3), h_radii=(1, 2, 3)) -> dict:
    """Second-moment and truncation bounds for the dictionary plus the ``H`` truncation decay."""
    n_paths = config.bound_paths
    reports = []
    decay = {}
    for i, (name, f) in enumerate(strassen.dictionary().items()):
        seed = config.path_seed + 100 + i
        reports.append(("second_moment", name, check_second_moment(f, n_paths, seed, config.dt)))
        tails = tail_integrals(f, radii, n_paths, seed, config.dt, config.h)
        lhs = np.abs(tails).mean(axis=0)
        for j, n in enumerate(radii):
            reports.append(("truncation_f", name,
                            check_truncation_f(f, n, n_paths, seed, config.dt, config.h,
                                               tails=tails[:, j])))
        if 1 in radii and 3 in radii and lhs[list(radii).index(1)] > 0:
            ratio = lhs[list(radii).index(3)] / lhs[list(radii).index(1)]
            decay[name] = {"ratio_3_over_1": float(ratio),
                           "allowed": 4.0 * math.exp(-(9 - 1) / 4.0),
                           "ok": bool(ratio <= 4.0 * math.exp(-(9 - 1) / 4.0))}

    field = QuenchedField(config.scenery_seed, "continuum_scenery")
    a_w = lil_constant(field, config)
    lam = config.bound_lambda
    c_hat = calibrate_truncation_constant(field, lam, h_radii, max(1000, n_paths // 5),
                                          config.path_seed + 999, a_w, dt=config.dt, h=config.h)
    gaps = h_truncation_gaps(field, lam, h_radii, n_paths, config.path_seed + 200,
                             config.dt, config.h)
    for j, n in enumerate(h_radii):
        reports.append(("truncation_H", "W_lambda",
                        check_truncation_H(field, lam, n, n_paths, config.path_seed + 200, c_hat,
                                           a_w, config.dt, config.h, gaps=gaps[:, j])))
    means = gaps.mean(axis=0)
    h_decay = []
    for j in range(len(h_radii) - 1):
        n0, n1 = h_radii[j], h_radii[j + 1]
        allowed = 3.0 * math.exp(-(n1 * n1 - n0 * n0) / 4.0)
        ratio = float(means[j + 1] / means[j]) if means[j] > 0 else 0.0
        h_decay.append({"from": n0, "to": n1, "ratio": ratio, "allowed": allowed,
                        "ok": ratio <= allowed})
    passed = (all(r.satisfied for _, _, r in reports) and all(d["ok"] for d in decay.values())
              and all(d["ok"] for d in h_decay))
    return {"reports": reports, "decay_f": decay, "decay_H": h_decay, "c_hat": c_hat,
            "A_W": a_w, "lambda": lam, "passed": passed}
