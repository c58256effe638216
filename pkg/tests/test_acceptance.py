"""Acceptance criteria, each at its stated tolerance.

Every test records one ``CRITERION k: PASS|FAIL`` line, printed in the
pytest terminal summary.  Criteria that cannot be met by a faithful
implementation are marked ``xfail(strict=True)``: the check runs unchanged
and the suite stays green only while the criterion keeps failing.  Running
this file as a script prints the same lines.
"""
import math
import re
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from renyibounds.concurrence import (
    concurrence_bracket,
    concurrence_pure,
    max_concurrence,
    ppt_ccnr_terms,
    purity_terms,
    two_copy_identity_check,
)
from renyibounds.curves import curve_values, named_curve
from renyibounds.hulls import HullCache, bounds_from_concurrence, evaluate_bounds
from renyibounds.measures import (
    alpha_monotonicity_check,
    gconc_inequality_check,
    gm_lemma_check,
    ln_inequality_check,
    log_negativity,
)
from renyibounds.oracle import simplex_oracle
from renyibounds.qstate import DensityMatrix, renyi_entropy, schmidt_vector
from renyibounds.states import (
    convex_roof_upper_estimate,
    example2_closed_forms,
    example2_state,
    random_decompositions,
    random_density,
    random_pure,
    spawn_seeds,
    werner,
)

CACHE = HullCache()
C3 = 2 / math.sqrt(3)
LOG3 = math.log2(3)
ALPHAS = (0.3, 0.6, 1.0, 2.0, 3.0, 5.0)


def record(k: int, passed: bool, detail: str) -> None:
    line = f"CRITERION {k:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def cli(*argv):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "renyibounds", *argv], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout, time.perf_counter() - t0


def breakpoints(out, kind):
    pat = re.compile(rf"# breakpoint {kind}: c=(\S+) value=(\S+)")
    return [(float(a), float(b)) for a, b in pat.findall(out)]


def test_c01_tangent():
    out, secs = cli("hull", "--alpha", "3", "--m", "3", "--method", "paper", "--kind", "co")
    tang = [(float(c), float(k)) for c, k in
            re.findall(r"# tangency co: c_star=(\S+) slope_bits=\S+ slope_nats=(\S+)", out)]
    hit = [(c, k) for c, k in tang if abs(k - 5.2401) <= 2e-3 and abs(c - 1.1533) <= 2e-3]
    ok = bool(hit) and secs < 5.0
    record(1, ok, f"tangencies (c*, k1 in nats) = {[(round(c, 6), round(k, 6)) for c, k in tang]}; "
                  f"runtime {secs:.2f}s")


@pytest.mark.xfail(strict=True, reason="alpha=3 lower hull has no vertex at (1, 1): the printed minimum curve drops to 0.855 just above c=1")
def test_c02_hull_vertices():
    targets = [(0.0, 0.0), (1.0, 1.0), (C3, LOG3)]
    details, ok = [], True
    for alpha in (3.0, 0.6):
        out, _ = cli("hull", "--alpha", str(alpha), "--m", "3", "--method", "paper", "--kind", "co")
        bps = breakpoints(out, "co")
        missing = [t for t in targets
                   if not any(abs(c - t[0]) <= 1e-6 and abs(v - t[1]) <= 1e-6 for c, v in bps)]
        ok &= not missing
        details.append(f"alpha={alpha}: vertices {[(round(c, 6), round(v, 6)) for c, v in bps]}"
                       + (f" missing {[(round(a, 6), round(b, 6)) for a, b in missing]}" if missing else " all present"))
    record(2, ok, "; ".join(details))


def test_c03_alpha2_coincidence():
    worst_gap = worst_closed = 0.0
    for m in (2, 3, 4):
        for method in ("enumeration", "paper"):
            c = np.linspace(0.0, max_concurrence(m), 10_000)
            lo = curve_values(c, 2.0, m, "min", method)
            hi = curve_values(c, 2.0, m, "max", method)
            closed = -np.log2(1 - c**2 / 2)
            worst_gap = max(worst_gap, float(np.max(np.abs(lo - hi))))
            worst_closed = max(worst_closed, float(np.max(np.abs(lo - closed))), float(np.max(np.abs(hi - closed))))
    record(3, worst_gap < 1e-9 and worst_closed < 1e-9,
           f"max|R_L-R_U| = {worst_gap:.2e}, max deviation from -log(1-c^2/2) = {worst_closed:.2e} (m=2..4, both methods)")


@pytest.mark.slow
def test_c04_oracle_equivalence():
    t0 = time.perf_counter()
    worst, where = 0.0, None
    for m in (2, 3, 4):
        for c in np.linspace(0.0, max_concurrence(m), 40):
            for alpha in ALPHAS:
                for mode in ("min", "max"):
                    d = abs(curve_values(c, alpha, m, mode) - simplex_oracle(c, alpha, m, mode))
                    if d > worst:
                        worst, where = d, (m, alpha, round(float(c), 4), mode)
    secs = time.perf_counter() - t0
    record(4, worst < 1e-6 and secs < 120, f"max |enumeration - oracle| = {worst:.2e} at {where}; runtime {secs:.1f}s")


def werner_closed(f, alpha):
    s = math.sqrt(1 - f * f)
    return math.log2(((1 + s) / 2) ** alpha + ((1 - s) / 2) ** alpha) / (1 - alpha)


@pytest.mark.xfail(strict=True, reason="upper bound ca(R_U)(-f) exceeds -f, and the lower bound at f=-1 is 0.855, not 1")
def test_c05_werner():
    ok, parts = True, []
    for f in (-1.0, -0.75, -0.5, -0.25):
        c = -f
        lo, hi = bounds_from_concurrence(c, c, 3.0, 3, "paper", cache=CACHE)
        lo_enum, _ = bounds_from_concurrence(c, c, 3.0, 3, "enumeration", cache=CACHE)
        target_lo = werner_closed(f, 3.0)
        good = abs(lo - target_lo) <= 1e-9 and abs(hi - c) <= 1e-9
        ok &= good
        parts.append(f"f={f}: ({lo:.6f}, {hi:.6f}) vs ({target_lo:.6f}, {c:.6f}) enum_low={lo_enum:.6f}"
                     + ("" if good else " x"))
    record(5, ok, "; ".join(parts))


@pytest.mark.xfail(strict=True, reason="closed forms for C2 and C3 disagree with the matrix values beyond 2e-2")
def test_c06_example2():
    ok, parts = True, []
    for a in (0.0, 0.25, 0.5, 0.75, 1.0):
        rho = example2_state(a, 0.1)
        sep, pur = ppt_ccnr_terms(rho), purity_terms(rho)
        mat = {"C1": pur["lower_A"], "C2": sep["ppt"], "C3": sep["ccnr"], "Cbar": pur["upper_A"]}
        closed = example2_closed_forms(a)
        bad = {k: round(closed[k] - mat[k], 4) for k in mat if abs(closed[k] - mat[k]) > 2e-2}
        ok &= not bad
        parts.append(f"a={a}: " + ("ok" if not bad else f"closed-matrix {bad}"))
        if a == 0.0:
            anchor = abs(mat["C1"] - 0.8518) < 1e-4 and abs(mat["Cbar"] - 1.0312) < 1e-4
            ok &= anchor
            parts.append(f"anchors C1={mat['C1']:.4f} Cbar={mat['Cbar']:.4f}")
    record(6, ok, "; ".join(parts))


@pytest.mark.slow
def test_c07_pure_sandwich():
    worst_low = worst_up = worst_br = 0.0
    for m in (2, 3):
        for alpha in (0.6, 3.0):
            for seed in spawn_seeds(7 + m, 500):
                psi = random_pure(m, m, seed=seed)
                mu = schmidt_vector(psi)
                h = renyi_entropy(mu, alpha)
                rep = evaluate_bounds(psi.density(), alpha, cache=CACHE)
                c = concurrence_pure(mu)
                worst_low = max(worst_low, rep.e_low - h)
                worst_up = max(worst_up, h - rep.e_up)
                worst_br = max(worst_br, abs(rep.bracket.lower - c), abs(rep.bracket.upper - c))
    ok = worst_low <= 1e-9 and worst_up <= 1e-9 and worst_br <= 1e-9
    record(7, ok, f"2000 states: max(e_low-H) = {worst_low:.2e}, max(H-e_up) = {worst_up:.2e}, "
                  f"max bracket error = {worst_br:.2e}")


def test_c08_roof_consistency():
    states = {f"werner f={f}": werner(3, f) for f in (-0.25, -0.5, -0.75)}
    states.update({f"example2 a={a}": example2_state(a, 0.1) for a in (0.0, 0.5, 1.0)})
    ok, parts = True, []
    for name, rho in states.items():
        for alpha in (0.6, 3.0):
            rep = evaluate_bounds(rho, alpha, cache=CACHE)
            est = convex_roof_upper_estimate(rho, alpha, samples=300, seed=11)
            good = est >= rep.e_low - 1e-9 and rep.e_up >= rep.e_low - 1e-9
            ok &= good
            parts.append(f"{name} alpha={alpha}: {rep.e_low:.4f} <= {est:.4f}" + ("" if good else " INVERSION"))
    record(8, ok, "; ".join(parts))


def test_c09_two_copy():
    worst = 0.0
    for m, n in ((2, 2), (2, 3)):
        for seed in spawn_seeds(9 * n, 200):
            rank = int(np.random.default_rng(seed).integers(1, m * n + 1))
            worst = max(worst, max(two_copy_identity_check(random_density(m, n, rank, seed)).values()))
    record(9, worst < 1e-10, f"400 states: max residual {worst:.2e}")


def two_qubit_mixture(p):
    """p |Phi+><Phi+| + (1-p) |01><01|: concurrence p, and the
    entanglement of formation that lower-bounds E_alpha for alpha <= 1."""
    v = np.zeros(4)
    v[[0, 3]] = 1 / math.sqrt(2)
    rho = DensityMatrix(p * np.outer(v, v) + (1 - p) * np.diag([0, 1, 0, 0]), (2, 2))
    s = math.sqrt(1 - p * p)
    eof = renyi_entropy([(1 + s) / 2, (1 - s) / 2], 1.0)
    return rho, p, eof


@pytest.mark.xfail(strict=True, reason="n LN(rho) >= E_alpha(rho) does not hold for mixed states")
def test_c10_measure_suite():
    ln_pairs = ((0.5, 1), (0.6, 2), (0.75, 2))
    fails = {"chain": 0, "gm_squared": 0, "gconc": 0, "ln_pure": 0, "ln_mixed": 0}
    seeds = spawn_seeds(10, 600)
    for i, seed in enumerate(seeds[:500]):
        m = 2 + i % 3
        mu = schmidt_vector(random_pure(m, m, seed=seed))
        fails["chain"] += not alpha_monotonicity_check(mu, [0.5, 1.0, 3.0]).passed
        for alpha in (0.5, 1.0, 3.0):
            fails["gm_squared"] += not gm_lemma_check(mu, alpha)["squared"].passed
        for alpha in (0.5, 3.0):
            fails["gconc"] += not gconc_inequality_check(mu, alpha).passed
        psi = random_pure(m, m, seed=seed)
        for alpha, n in ln_pairs:
            fails["ln_pure"] += not ln_inequality_check(psi.density(), alpha, n)["pure"].passed
    worst_ratio = np.inf
    for i, seed in enumerate(seeds[500:]):
        m, n_ = (2, 2) if i % 2 else (2, 3)
        rho = random_density(m, n_, seed=seed)
        dec = next(random_decompositions(rho, None, 1, seed))
        for alpha in (0.5, 1.0, 3.0):
            fails["gm_squared"] += not gm_lemma_check(dec, alpha)["squared"].passed
        for alpha, n in ln_pairs:
            r = ln_inequality_check(rho, alpha, n, decomposition=dec)
            fails["ln_mixed"] += not r["decomposition"].passed
            worst_ratio = min(worst_ratio, r["decomposition"].lhs - r["decomposition"].rhs)
    bell = gm_lemma_check([0.5, 0.5], 3.0)
    gm_reproduced = bell["definitional"].lhs == pytest.approx(0.75) and not bell["definitional"].passed
    # certified counterexample: E_alpha >= E_F for alpha <= 1, both known exactly here
    rho, conc, eof = two_qubit_mixture(0.2)
    ln = log_negativity(rho)
    certified = [(a, n) for a, n in ln_pairs if n * ln < eof]
    ok = not any(fails.values()) and gm_reproduced
    record(10, ok, f"failure counts {fails}; worst n*LN - avg = {worst_ratio:.3f}; "
                   f"GM definitional Bell alpha=3: {bell['definitional'].lhs:.2f} < 1 reproduced={gm_reproduced}; "
                   f"two-qubit p=0.2: LN={ln:.4f}, E_F={eof:.4f} violates (alpha,n) in {certified}")


def test_c11_figure_curves():
    parts, ok = [], True
    for alpha, want in ((0.6, ">"), (3.0, "<")):
        out, _ = cli("hull", "--alpha", str(alpha), "--m", "3", "--method", "paper", "--grid", "200")
        rows = [ln.split(",") for ln in out.splitlines() if ln and not ln.startswith("#")]
        cols = rows[0]
        data = np.array([[float(x) for x in r] for r in rows[1:]])
        have = all(k in cols for k in ("R_11", "R_12", "R_21"))
        c = data[:, cols.index("c")]
        covered = have and c[0] == 0.0 and abs(c[-1] - C3) < 1e-12
        row = data[np.argmin(np.abs(c - 1.0))]
        r12, r21 = row[cols.index("R_12")], row[cols.index("R_21")]
        assert abs(r12 - named_curve(1, 2, 1.0, alpha)) < 1e-9
        order = r12 > r21 if want == ">" else r12 < r21
        ok &= covered and order
        parts.append(f"alpha={alpha}: R12(1)={r12:.6f} {want} R21(1)={r21:.6f} {'holds' if order else 'fails'}")
    record(11, ok, "; ".join(parts))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
