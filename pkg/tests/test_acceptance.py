"""The eight acceptance criteria, each held to its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line (visible without -s)
and then asserts.
"""

import math
import time
from collections import defaultdict

import numpy as np
import pytest
from scipy import integrate, special, stats

from fadingcap import specfun, tables
from fadingcap.capacity import c_opra_closed, c_opra_oracle, c_ora_closed, c_ora_oracle, log_exp_moment, solve_gamma0
from fadingcap.corrections import ALL
from fadingcap.entropy import cross_entropy_closed, cross_entropy_oracle, entropy_oracle, matched_reference, \
    shannon_entropy_closed
from fadingcap.models import AlphaEtaMuParams, AlphaLambdaMuParams, cdf_snr, db_to_linear, pdf_snr, sample
from fadingcap.numeric import mc_estimate
from fadingcap.validate import KS_MODELS, distribution_checks

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, detail=""):
        verdict = "PASS" if not failures else "FAIL"
        line = f"criterion {number}: {verdict} {title}"
        if detail:
            line += f" ({detail})"
        if failures:
            line += " :: " + "; ".join(failures[:8]) + (" ..." if len(failures) > 8 else "")
        with capsys.disabled():
            print("\n" + line)
        assert not failures, line
    return emit


def test_criterion_1_entropy_table(report):
    start = time.perf_counter()
    records = tables.table1_records(ALL)
    elapsed = time.perf_counter() - start
    cells = defaultdict(dict)
    for r in records:
        cells[(r.model, r.alpha, r.quantity)][r.method] = r
    failures, authoritative = [], []
    for (model, alpha, quantity), cell in cells.items():
        tag = f"{model} a={alpha:g} {quantity}"
        closed = cell.get("closed")
        if closed is None:
            failures.append(f"{tag}: no closed form")
            continue
        if closed.abs_err <= tables.ENTROPY_TOL:
            continue
        # Oracle-authoritative clause: the printed value is unreachable, so the
        # closed form must still agree with the quadrature oracle.
        if cell["discrepancy"].value <= tables.ENTROPY_ORACLE_TOL:
            authoritative.append(tag)
        else:
            failures.append(f"{tag}: closed {closed.value:.4f} printed {cell['printed'].value}")
    for model in ("alpha-eta-mu", "alpha-lambda-mu"):
        d = cells[(model, 2.0, "D(p||q)")]["closed"].value
        if abs(d) > 0.02:
            failures.append(f"{model} a=2 D = {d:.4f} > 0.02")
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.1f} s >= 10 s")
    report(1, "entropy table", failures,
           f"{len(cells) - len(authoritative)}/{len(cells)} cells match printed within 0.05, "
           f"{len(authoritative)} oracle-authoritative, {elapsed:.2f} s")


def test_criterion_2_capacity_table(report):
    start = time.perf_counter()
    records = tables.table2_records(ALL)
    elapsed = time.perf_counter() - start
    failures = []
    checked = 0
    for r in records:
        if r.method not in ("closed", "oracle"):
            continue
        checked += 1
        if r.abs_err > tables.CAPACITY_TOL:
            failures.append(f"{r.alpha:g}-{r.eta_or_lambda:g}-{r.mu:g}/{r.snr_db:g}dB {r.method} "
                            f"{r.value:.4f} off by {r.abs_err:.4f}")
    if sum(r.method == "printed" for r in records) != 30:
        failures.append("expected 30 printed cells")
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f} s >= 30 s")
    report(2, "capacity table", failures, f"{checked - len(failures)}/{checked} closed/oracle values within 0.01, "
                                          f"{elapsed:.2f} s")


def test_criterion_3_closed_vs_oracle(report):
    failures = []
    n = 0
    grid = dict(alpha=(1, 2, 3), eta=(0.6, 1 + 1e-6, 2.0, 3.0), mu=(1, 2, 3), snr_db=(-5.0, 15.0, 35.0))
    for a in grid["alpha"]:
        for eta in grid["eta"]:
            for mu in grid["mu"]:
                for s in grid["snr_db"]:
                    m = AlphaEtaMuParams(a, eta, mu, db_to_linear(s))
                    oracle = c_ora_oracle(m)
                    gap = abs(c_ora_closed(m, ALL) - oracle) / oracle
                    g0 = solve_gamma0(m)
                    oracle_p = c_opra_oracle(m, g0)
                    gap_p = abs(c_opra_closed(m, g0) - oracle_p) / oracle_p
                    n += 2
                    if gap >= 1e-4:
                        failures.append(f"ORA {m.tag}: {gap:.2e}")
                    if gap_p >= 1e-4:
                        failures.append(f"OPRA {m.tag}: {gap_p:.2e}")
    for model, _ in tables.table1_models():
        h = abs(shannon_entropy_closed(model, ALL) - entropy_oracle(model))
        q = matched_reference(model)
        hx = abs(cross_entropy_closed(model, q, ALL) - cross_entropy_oracle(model, q))
        n += 2
        if h > 0.1:
            failures.append(f"H(p) {model.tag}: {h:.3g}")
        if hx > 0.1:
            failures.append(f"H(p,q) {model.tag}: {hx:.3g}")
    report(3, "closed forms vs oracles", failures, f"{n - len(failures)}/{n} comparisons")


def test_criterion_4_distribution(report):
    checks = list(distribution_checks(None))
    failures = [f"{c.name} {c.model.tag if c.model else ''}: {c.metric:.2e}" for c in checks if not c.passed]
    # Normalization again with an external quadrature, as a guard on the in-house integrator.
    n_ext = 0
    for a in (0.5, 1.0, 2.0, 3.0):
        for eta in (0.3, 1.0, 2.0):
            for mu in (0.5, 1.0, 2.5):
                for s in (-5.0, 15.0, 35.0):
                    m = AlphaEtaMuParams(a, eta, mu, db_to_linear(s))
                    gb = m.mean_snr
                    head = integrate.quad(lambda t: 4 * t ** 3 * pdf_snr(m, t ** 4) if t > 0 else 0.0, 0, gb ** 0.25,
                                          limit=400, epsabs=0, epsrel=1e-12)[0]
                    tail = integrate.quad(lambda g: pdf_snr(m, g), gb, np.inf, limit=400, epsabs=0, epsrel=1e-12)[0]
                    n_ext += 1
                    if abs(head + tail - 1) > 1e-8:
                        failures.append(f"external normalization {m.tag}: {abs(head + tail - 1):.2e}")
    by_name = defaultdict(int)
    for c in checks:
        by_name[c.name] += 1
    detail = ", ".join(f"{k} x{v}" for k, v in by_name.items()) + f", external normalization x{n_ext}"
    report(4, "distribution correctness", failures, detail)


def test_criterion_5_sampler(report):
    failures = []
    for i, m in enumerate(KS_MODELS):
        draws = sample(m, 100_000, seed=i)
        p = stats.kstest(draws, lambda x: cdf_snr(m, x, 1e-9)).pvalue
        if p <= 0.01:
            failures.append(f"KS {m.tag}: p = {p:.3g}")
        # The mean SNR parameter is the alpha/2-power scale; at alpha = 2 it is the plain mean.
        power = m.alpha / 2
        rel = abs(np.mean(draws ** power) - m.mean_snr ** power) / m.mean_snr ** power
        if rel > 0.01:
            failures.append(f"scale moment {m.tag}: {rel:.3%}")
    m = AlphaEtaMuParams(2.0, 0.6, 2.0, 10.0)
    rel = abs(sample(m, 1_000_000, seed=0).mean() - 10.0) / 10.0
    if rel > 0.01:
        failures.append(f"mean {m.tag}: {rel:.3%}")
    report(5, "sampler validity", failures, f"KS on {len(KS_MODELS)} parameter sets at n = 1e5")


def test_criterion_6_opra_curves(report):
    records = tables.fig1_records()
    curves = defaultdict(dict)
    failures = [f"failed point {r.model} a={r.alpha:g} {r.snr_db:g} dB" for r in records if r.method == "failed"]
    for r in records:
        if r.quantity == "C_OPRA/B" and r.method == "closed":
            curves[(r.model, r.alpha)][r.snr_db] = r.value
    snr = tables.FIG1_SNR_DB
    for key, curve in curves.items():
        if not np.all(np.diff([curve[s] for s in snr]) > 0):
            failures.append(f"{key} not monotone")
    for a in tables.FIG1_ALPHAS:
        eta_c, lam_c = curves[("alpha-eta-mu", a)], curves[("alpha-lambda-mu", a)]
        worst = max(abs(eta_c[s] - lam_c[s]) / eta_c[s] for s in snr)
        if worst > 1e-8:
            failures.append(f"variants differ at alpha={a:g}: {worst:.2e}")
    for model in ("alpha-eta-mu", "alpha-lambda-mu"):
        bad = [s for s in snr
               if not curves[(model, 3.0)][s] >= curves[(model, 2.0)][s] >= curves[(model, 1.0)][s]]
        if bad:
            s = bad[0]
            vals = ", ".join(f"{curves[(model, a)][s]:.4f}" for a in tables.FIG1_ALPHAS)
            failures.append(f"{model} alpha ordering violated at {len(bad)} SNRs ({min(bad):g}..{max(bad):g} dB); "
                            f"at {s:g} dB C(1,2,3) = {vals}")
    report(6, "OPRA curves", failures, f"{len(curves)} curves x {len(snr)} points")


def test_criterion_7_special_functions(report):
    failures = []
    x = np.array([0.01, 0.3, 1.0, 4.0, 25.0])
    for k in range(1, 6):
        nu = k + 0.5
        lhs = specfun.bessel_i_half(k - 1, x) - specfun.bessel_i_half(k + 1, x)
        rhs = 2 * nu / x * specfun.bessel_i_half(k, x)
        err = np.max(np.abs(lhs - rhs) / np.abs(rhs))
        if err > 1e-10:
            failures.append(f"bessel recurrence nu={nu}: {err:.2e}")
        ref = special.iv(nu, x)
        err = np.max(np.abs(specfun.bessel_i_half(k, x) - ref) / ref)
        if err > 1e-12:
            failures.append(f"bessel vs reference nu={nu}: {err:.2e}")
    for n in range(0, 6):
        for xv in (0.05, 1.0, 3.0, 20.0):
            ref = integrate.quad(lambda t: t ** (n - 1) * math.exp(-t), xv, np.inf, epsabs=0, epsrel=1e-13)[0]
            got = float(specfun.upper_incomplete_gamma(n, xv))
            if abs(got - ref) > 1e-10 * ref:
                failures.append(f"Gamma({n}, {xv}): {abs(got - ref) / ref:.2e}")
    for z in (0.1, 1.0, 3.0, 9.0):
        g_exp = specfun.meijer_g(specfun.EXP_SHAPE, z, shortcut=False)
        g_log = specfun.meijer_g(specfun.LOG1P_SHAPE, z, shortcut=False)
        if abs(g_exp - math.exp(-z)) > 1e-10 * math.exp(-z):
            failures.append(f"meijer exp at {z}")
        if abs(g_log - math.log1p(z)) > 1e-10 * math.log1p(z):
            failures.append(f"meijer log1p at {z}")
    n_comp = 0
    for alpha in (1, 2, 3):
        for c in (0.05, 0.5, 3.0):
            for s in (0.5, 1.0, 2.5, 6.0):
                # v = c u^(alpha/2) puts the exponential on a unit scale however small c is.
                k = 2 / alpha
                f = lambda v: math.log1p((v / c) ** k) * v ** (k * s - 1) * math.exp(-v)
                ref = k * c ** (-k * s) * (integrate.quad(f, 0, 1, limit=400, epsabs=0, epsrel=1e-12)[0]
                                           + integrate.quad(f, 1, np.inf, limit=400, epsabs=0, epsrel=1e-12)[0])
                got = log_exp_moment(alpha, c, s)
                n_comp += 1
                if abs(got - ref) > 1e-4 * ref:
                    failures.append(f"composite alpha={alpha} c={c} s={s}: {abs(got - ref) / ref:.2e}")
    report(7, "special functions", failures, f"{n_comp} Mellin-Barnes composite evaluations vs quadrature")


MC_SETS = (
    AlphaEtaMuParams(1.0, 1.0, 1.0, db_to_linear(-5.0)),
    AlphaEtaMuParams(2.0, 2.0, 1.0, db_to_linear(15.0)),
    AlphaEtaMuParams(3.0, 3.0, 3.0, db_to_linear(35.0)),
    AlphaLambdaMuParams(1.5, 0.25, 2.0, db_to_linear(5.0)),
    AlphaEtaMuParams(0.5, 0.6, 2.0, db_to_linear(10.0)),
)


def test_criterion_8_monte_carlo(report):
    failures = []
    for i, m in enumerate(MC_SETS):
        sampler = lambda n, seed, m=m: sample(m, n, seed)
        ora = mc_estimate(sampler, lambda g: np.log1p(g) / math.log(2), 1_000_000, seed=100 + i)
        ent = mc_estimate(sampler, lambda g, m=m: -np.log(pdf_snr(m, g)) / math.log(2), 1_000_000, seed=100 + i)
        for name, est, oracle in (("C_ORA", ora, c_ora_oracle(m)), ("H(p)", ent, entropy_oracle(m))):
            z = (est.mean - oracle) / est.std_error
            if abs(z) > 3:
                failures.append(f"{name} {m.tag}: MC {est.mean:.5f} vs oracle {oracle:.5f}, z = {z:+.2f}")
    report(8, "Monte-Carlo concordance", failures, f"{len(MC_SETS)} parameter sets, n = 1e6")
