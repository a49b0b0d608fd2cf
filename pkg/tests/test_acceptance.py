"""Acceptance run: every criterion at its stated tolerance, from one ``all`` suite run.

Run directly (``python tests/test_acceptance.py``) for the per-criterion table
alone; under pytest the same table is printed in the terminal summary.
"""

import time

import pytest

from axblab.suites import SuiteConfig, run_suite

CRITERIA = {
    1: "groupoid axioms on G_B, G_C and Gamma_s",
    2: "modular functions j_B = |a|, j_C = 1",
    3: "twist cocycle identity on points and functions",
    4: "Phi/Psi diffeomorphisms are mutually inverse",
    5: "intertwining identities for T1 and T2",
    6: "measure estimate: value and uniform bound",
    7: "identity representation bounded by the weighted 2-norm",
    8: "generator relations, X as generator of B_t, T_t group law, T_1 K = T",
    9: "K as a sign-split of J",
    10: "twisted coproducts of Y, X and J in closed form",
    11: "semiclassical residual slopes r2, r3, r4 >= 0.9",
    12: "support boxes of deformed products and coproducts",
    13: "bracket antisymmetry, involution compatibility, Jacobi",
    14: "deformed coproduct converges with slope >= 0.9",
    15: "Fourier side: bracket, dual coproduct, dual group",
    16: "extension identity for the transposed multiplication",
}

LINES = {}
TIMING = {}


@pytest.fixture(scope="session")
def report():
    t0 = time.perf_counter()
    rep = run_suite("all", SuiteConfig(seed=0))
    TIMING["all"] = time.perf_counter() - t0
    return rep


def summarize(crit, records):
    worst = max(records, key=lambda r: (not r.passed, r.residual / r.tolerance if r.tolerance else r.residual))
    ok = all(r.passed for r in records)
    return (f"criterion {crit:2d} {'PASS' if ok else 'FAIL'}  {CRITERIA[crit]}  "
            f"[{sum(r.passed for r in records)}/{len(records)} checks; worst {worst.check_id}: "
            f"residual {worst.residual:.3g} vs tol {worst.tolerance:.3g}]")


@pytest.mark.parametrize("crit", sorted(CRITERIA))
def test_criterion(report, crit):
    records = report.by_criterion().get(crit, [])
    assert records, f"no checks recorded for criterion {crit}"
    LINES[crit] = summarize(crit, records)
    failures = [f"{r.check_id}: {r.residual} > {r.tolerance} {r.note}" for r in records if not r.passed]
    assert not failures, "\n".join(failures)


def test_runtime_budget(report):
    assert TIMING["all"] < 600


def acceptance_lines():
    return [LINES[k] for k in sorted(LINES)]


if __name__ == "__main__":
    rep = run_suite("all", SuiteConfig(seed=0))
    groups = rep.by_criterion()
    for crit in sorted(CRITERIA):
        print(summarize(crit, groups[crit]) if crit in groups else f"criterion {crit:2d} FAIL  no checks")
