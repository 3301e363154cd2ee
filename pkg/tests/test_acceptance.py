"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

import time

import networkx as nx
import numpy as np

from narlift import (
    NarParams,
    NarSpec,
    NetworkTimeSeries,
    SimConfig,
    Var1Params,
    acf,
    build_design,
    cross_correlation,
    fit_nar,
    network_difference,
    region_grid,
    simulate_nar,
    simulate_var1_pair,
    stationary_covariance,
    var1_summary,
)

from conftest import random_geometric_graph, random_graph, ring_with_chords


def report(num, description, ok, elapsed):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {status} ({elapsed:.2f}s) {description}")
    assert ok, f"criterion {num} failed: {description}"


def test_criterion_01_cross_correlation_closed_form_and_simulation():
    start = time.perf_counter()
    ok = abs(cross_correlation(0.4, 0.4) - 8 / 17) < 1e-12
    ok &= abs(cross_correlation(0.4, -0.4) + 8 / 17) < 1e-12
    for beta, target, seed in ((0.4, 8 / 17, 101), (-0.4, -8 / 17, 102)):
        sim = simulate_var1_pair(0.4, beta, 1.0, n_times=100_000, seed=seed)
        rho_hat = np.corrcoef(sim.values[:, 0], sim.values[:, 1])[0, 1]
        ok &= abs(rho_hat - target) < 0.02
    elapsed = time.perf_counter() - start
    ok &= elapsed < 5.0
    report(1, "cross-correlation 8/17 closed form and simulation", ok, elapsed)


def test_criterion_02_stationary_covariance_series_oracle():
    start = time.perf_counter()
    worst = 0.0
    for u in np.linspace(-0.9, 0.9, 21):
        for v in np.linspace(-0.9, 0.9, 21):
            a, b = (u + v) / 2, (v - u) / 2
            closed = stationary_covariance(Var1Params(a, b, 1.0))
            pi2 = np.array([[a, b], [b, a]]) @ np.array([[a, b], [b, a]])
            acc, term = np.zeros((2, 2)), np.eye(2)
            for _ in range(201):
                acc += term
                term = term @ pi2
            worst = max(worst, float(np.abs(closed - acc).max()))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 1.0
    report(2, f"stationary covariance vs truncated series (worst {worst:.2e})", ok, elapsed)


def test_criterion_03_lifted_autocorrelation_matches_theory():
    start = time.perf_counter()
    ok = True
    # positive coupling: lifted series white, reduction positive
    sim = simulate_var1_pair(0.4, 0.4, 1.0, n_times=100_000, seed=201)
    d = network_difference(sim).details[:, 0]
    r1 = acf(d, 1).values[1]
    ok &= abs(r1 - 0.0) < 0.02
    ok &= var1_summary(Var1Params(0.4, 0.4)).cov_reduction > 0
    # negative coupling: lifted lag-1 reaches alpha - beta = 0.8 and exceeds
    # the unlifted scaled covariance 10/17
    sim = simulate_var1_pair(0.4, -0.4, 1.0, n_times=100_000, seed=202)
    d = network_difference(sim).details[:, 0]
    r1 = acf(d, 1).values[1]
    ok &= abs(r1 - 0.8) < 0.02
    ok &= 0.8 > 10 / 17
    ok &= var1_summary(Var1Params(0.4, -0.4)).cov_reduction < 0
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    report(3, "lifted lag-1 autocorrelation and reduction signs", ok, elapsed)


def test_criterion_04_reduction_sign_follows_correlation():
    start = time.perf_counter()
    grid = region_grid(201)
    pos = grid.rho > 0.5
    neg = grid.rho < -0.5
    frac_pos = float((grid.cov_reduction[pos] > 0).mean())
    frac_neg = float((grid.cov_reduction[neg] < 0).mean())
    elapsed = time.perf_counter() - start
    ok = frac_pos >= 0.95 and frac_neg >= 0.95 and elapsed < 5.0
    report(4, f"201x201 grid census (pos {frac_pos:.3f}, neg {frac_neg:.3f})", ok, elapsed)


def test_criterion_05_parameter_recovery_ten_seeds():
    start = time.perf_counter()
    spec = NarSpec(p=1, s=(1,))
    params = NarParams(alpha=(0.647,), beta=((0.330,),), sigma2=1.0)
    alphas, betas = [], []
    for seed in range(10):
        g = random_geometric_graph(20, 0.35, seed=100 + seed)
        sim = simulate_nar(SimConfig(spec=spec, params=params, graph=g, n_times=2000,
                                     burn_in=500, seed=seed))
        fit = fit_nar(sim, spec)
        alphas.append(fit.params.alpha[0])
        betas.append(fit.params.beta[0][0])
    a_bar, b_bar = float(np.mean(alphas)), float(np.mean(betas))
    elapsed = time.perf_counter() - start
    ok = abs(a_bar - 0.647) < 0.05 and abs(b_bar - 0.330) < 0.05 and elapsed < 30.0
    report(5, f"recovery over 10 seeds (alpha {a_bar:.3f}, beta {b_bar:.3f})", ok, elapsed)


def test_criterion_06_nested_rss_never_increases():
    start = time.perf_counter()
    chains = [
        [NarSpec(1, (0,)), NarSpec(1, (1,)), NarSpec(1, (2,)), NarSpec(2, (2, 1))],
        [NarSpec(1, (0,)), NarSpec(2, (0, 0)), NarSpec(2, (1, 0)), NarSpec(2, (1, 1))],
    ]
    ok = True
    for ds in range(25):
        g = ring_with_chords(7, ds % 3, seed=400 + ds)
        rng = np.random.default_rng(500 + ds)
        x = NetworkTimeSeries(rng.standard_normal((60, 7)), graph=g)
        for chain in chains:
            t0 = max(sp.p for sp in chain) + 1
            rss = [fit_nar(x, sp, t_start=t0).rss for sp in chain]
            for small, big in zip(rss, rss[1:]):
                ok &= big <= small * (1 + 1e-8) + 1e-12
    elapsed = time.perf_counter() - start
    report(6, "nested RSS monotone on 25 random datasets", ok, elapsed)


def test_criterion_07_lifting_invariants():
    start = time.perf_counter()
    ok = True
    rng = np.random.default_rng(606)
    for trial in range(5):
        g = ring_with_chords(10, trial % 4, seed=600 + trial)
        # spatial constants annihilated
        c = rng.standard_normal(12) * 10
        const = NetworkTimeSeries(np.tile(c[:, None], (1, 10)), graph=g)
        ok &= float(np.max(np.abs(network_difference(const).details))) < 1e-12
        # linearity
        X = rng.standard_normal((9, 10))
        Y = rng.standard_normal((9, 10))
        a, b = rng.uniform(-3, 3, size=2)
        dx = network_difference(NetworkTimeSeries(X, graph=g)).details
        dy = network_difference(NetworkTimeSeries(Y, graph=g)).details
        dz = network_difference(NetworkTimeSeries(a * X + b * Y, graph=g)).details
        ok &= float(np.max(np.abs(dz - (a * dx + b * dy)))) < 1e-12
    # two-node antisymmetry is exact
    sim = simulate_var1_pair(0.4, 0.25, 1.0, n_times=500, seed=601)
    d = network_difference(sim).details
    ok &= bool(np.array_equal(d[:, 1], -d[:, 0]))
    elapsed = time.perf_counter() - start
    report(7, "lifting annihilation, linearity, antisymmetry", ok, elapsed)


def test_criterion_08_stage_neighbors_match_bfs_oracle():
    start = time.perf_counter()
    mismatches = 0
    for seed in range(100):
        n = 5 + (seed * 7) % 46            # sizes 5..50
        g = random_graph(n, edge_prob=min(0.5, 3.0 / n), seed=700 + seed)
        H = nx.Graph()
        H.add_nodes_from(g.nodes)
        H.add_edges_from(g.edges)
        for i in g.nodes:
            hops = nx.single_source_shortest_path_length(H, i)
            max_r = max(hops.values()) if len(hops) > 1 else 1
            for r in range(1, max_r + 2):
                expect = frozenset(j for j, dist in hops.items() if dist == r)
                if g.stage_neighbors(i, r).members != expect:
                    mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0
    report(8, f"stage sets vs BFS oracle on 100 graphs ({mismatches} mismatches)", ok, elapsed)


def test_criterion_09_misspecification_diagnostic():
    start = time.perf_counter()
    true_spec = NarSpec(p=2, s=(1, 0))
    true_params = NarParams(alpha=(0.394, 0.380), beta=((0.204,), ()), sigma2=1.0)
    mis_spec = NarSpec(p=1, s=(0,))
    breach_seeds = 0
    inside = 0
    total = 0
    for k in range(10):
        g = random_geometric_graph(15, 0.4, seed=300 + k)
        sim = simulate_nar(SimConfig(spec=true_spec, params=true_params, graph=g,
                                     n_times=800, burn_in=300, seed=50 + k))
        mis = fit_nar(sim, mis_spec)
        breaches = 0
        for i in range(sim.n_nodes):
            cg = acf(mis.residuals[:, i], 10)
            if abs(cg.values[1]) > cg.band:
                breaches += 1
        if breaches >= sim.n_nodes / 2:
            breach_seeds += 1
        good = fit_nar(sim, true_spec)
        for i in range(sim.n_nodes):
            cg = acf(good.residuals[:, i], 10)
            inside += int(np.sum(np.abs(cg.values[1:]) <= cg.band))
            total += 10
    inside_frac = inside / total
    elapsed = time.perf_counter() - start
    ok = breach_seeds >= 9 and inside_frac >= 0.95
    report(9, f"misspecification: {breach_seeds}/10 seeds breach, "
              f"{inside_frac:.3f} inside under the true spec", ok, elapsed)


def test_criterion_10_dynamic_graph_locality_and_dropout_recovery():
    start = time.perf_counter()
    from narlift import Graph

    K, T = 12, 2000
    g = random_geometric_graph(K, 0.4, seed=77)
    node, window = 3, (80, 120)
    kept = [(i, j) for (i, j) in sorted(g.edges) if node not in (i, j)]
    g_cut = Graph(K, kept, {e: g.distance(*e) for e in kept})
    base_seq = [g] * T
    mod_seq = [g_cut if window[0] <= t <= window[1] else g for t in range(1, T + 1)]

    spec = NarSpec(p=1, s=(1,))
    params = NarParams(alpha=(0.5,), beta=((0.3,),), sigma2=1.0)
    sim = simulate_nar(SimConfig(spec=spec, params=params, graph=mod_seq, n_times=T,
                                 burn_in=400, seed=13))

    base = NetworkTimeSeries(sim.values, graph=base_seq)
    mod = NetworkTimeSeries(sim.values, graph=mod_seq)
    db, dm = build_design(base, spec), build_design(mod, spec)
    ok = db.rows == dm.rows
    changed = {
        db.rows[k][0]
        for k in range(len(db.rows))
        if not np.array_equal(db.matrix[k], dm.matrix[k])
    }
    ok &= bool(changed)
    ok &= all(window[0] + 1 <= t <= window[1] + spec.p for t in changed)

    rng = np.random.default_rng(999)
    mask = rng.random(sim.values.shape) < 0.10
    masked = NetworkTimeSeries(np.where(mask, np.nan, sim.values), graph=mod_seq)
    fit = fit_nar(masked, spec)
    ok &= abs(fit.params.alpha[0] - 0.5) < 0.07
    ok &= abs(fit.params.beta[0][0] - 0.3) < 0.07
    elapsed = time.perf_counter() - start
    report(10, f"gNAR locality and 10% dropout recovery "
               f"(alpha {fit.params.alpha[0]:.3f}, beta {fit.params.beta[0][0]:.3f})",
           ok, elapsed)
