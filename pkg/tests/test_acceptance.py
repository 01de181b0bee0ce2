"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line (visible with pytest -s) and then
asserts.  The reference table below is the frozen six-column benchmark the
package reproduces.  Three of its cells are mutually inconsistent with
other cells of their own rows; those comparisons fail by design and the
impossibility argument lives next to the relevant assertion.  Run with

    pytest -s tests/test_acceptance.py
"""

import math
import random

import numpy as np
import pytest

from bellscan.catalog import PRIMARY_NAMES, catalog_get, catalog_list
from bellscan.core import (
    BellFunctional,
    Scenario,
    behavior_of_strategy,
    evaluate,
    lift,
    strategies,
)
from bellscan.polytope import (
    facet_check,
    local_bound,
    local_bound_bruteforce,
    ns_dimension,
)
from bellscan.quantum import (
    model_behavior,
    projector,
    QubitModel,
    quantum_value_at,
    seesaw_maximize,
    _joint_prob_angles,
    _joint_prob_angles_grad,
)
from bellscan.robustness import (
    DetectionModel,
    detected_behavior,
    eta_threshold_asymmetric,
    eta_threshold_symmetric,
)
from bellscan.search import SearchConfig, run_search
from bellscan.symmetry import (
    apply_transformation,
    canonical_key,
    random_transformation,
    relabel_behavior,
    symmetric_representative,
)
from bellscan.table import compute_row

SEED = 0
CHSH_MAX = 1 / math.sqrt(2) - 0.5

# (violation, theta_max/pi, w_max, w, eta); violation is the raw maximum of
# the functional (identical to the violation for every bound-0 row)
REFERENCE = {
    "CHSH":     (CHSH_MAX, 0.2500, 1 / math.sqrt(2), 1 / math.sqrt(2),
                 2 / (math.sqrt(2) + 1)),
    "I3322":    (0.2500, 0.2500, 0.8000, 0.8000, 0.8284),
    "I4322_1":  (0.2361, 0.2668, 0.8640, 0.8660, 0.8761),
    "I4322_2":  (0.2596, 0.2749, 0.8280, 0.8333, 0.8685),
    "I4322_3":  (0.4365, 0.2500, 0.7746, 0.7746, 0.8514),
    "I4422_1":  (0.1970, 0.2644, 0.8988, 0.9000, 0.8571),
    "I4422_2":  (0.6214, 0.2479, 0.7630, 0.7630, 0.8443),
    "A5":       (0.4353, 0.2450, 0.7751, 0.7752, 0.8214),
    "A6":       (0.2321, 0.2500, 0.8829, 0.8829, 0.8373),
    "AS1":      (0.5412, 0.2500, 0.7348, 0.7348, 0.8472),
    "AS2":      (0.8785, 0.2500, 0.7400, 0.7400, 0.8506),
    "AII1":     (0.6055, 0.2564, 0.7676, 0.7679, 0.8323),
    "AII2":     (0.5000, 0.2500, 0.8000, 0.8000, 0.8508),
    "I4422_3":  (0.2380, 0.2257, 0.8630, 0.8660, 0.8761),
    "I4422_4":  (0.2071, 0.2500, 0.7071, 0.7071, 0.8284),
    "I4422_5":  (0.4365, 0.2500, 0.7746, 0.7746, 0.8514),
    "I4422_6":  (0.4495, 0.2500, 0.8165, 0.8165, 0.8697),
    "I4422_7":  (1.4548, 0.2622, 0.7937, 0.7949, 0.8405),
    "I4422_8":  (0.4206, 0.2457, 0.8560, 0.8561, 0.8858),
    "I4422_9":  (0.4617, 0.2648, 0.8441, 0.8455, 0.8392),
    "I4422_10": (0.6139, 0.2538, 0.8175, 0.8176, 0.8458),
    "I4422_11": (0.6384, 0.2444, 0.7790, 0.7792, 0.8474),
    "I4422_12": (0.6188, 0.2404, 0.7843, 0.7849, 0.8382),
    "I4422_13": (0.2500, 0.2500, 0.8889, 0.8889, 0.8944),
    "I4422_14": (0.4103, 0.3790, 0.8298, 0.8310, 0.8523),
    "I4422_15": (0.2500, 0.2500, 0.8889, 0.8889, 0.8944),
    "I4422_16": (0.2407, 0.2810, 0.8791, 0.8829, 0.9009),
    "I4422_17": (0.6714, 0.2503, 0.7883, 0.7883, 0.8611),
    "I4422_18": (0.1812, 0.2498, 0.9575, 0.9623, 0.9575),
    "I4422_19": (0.4307, 0.2500, 0.8745, 0.8745, 0.8870),
    "I4422_20": (0.3056, 0.3036, 0.9075, 0.9231, 0.8990),
}

SYMMETRIC_MISSING = {"I4422_2", "AII2", "I4422_3", "I4422_5", "I4422_6", "I4422_7"}


def fold(theta_over_pi: float) -> float:
    """Schmidt angles t and 1/2 - t describe locally equivalent states."""
    return min(theta_over_pi, 0.5 - theta_over_pi)


def report(criterion: str, failures: list):
    status = "PASS" if not failures else "FAIL"
    print(f"[acceptance] {criterion}: {status}")
    for line in failures:
        print(f"    {line}")
    assert not failures, f"{criterion}: {len(failures)} check(s) failed: {failures}"


@pytest.fixture(scope="session")
def table_rows():
    """One pipeline pass per catalog entry, shared by criteria 4-6."""
    return {name: compute_row(name, seed=SEED) for name in PRIMARY_NAMES}


def random_functional(rng, scenario, lo=-3, hi=3):
    return BellFunctional.build(
        [rng.randint(lo, hi) for _ in range(scenario.m_a)],
        [rng.randint(lo, hi) for _ in range(scenario.m_b)],
        [[rng.randint(lo, hi) for _ in range(scenario.m_b)]
         for _ in range(scenario.m_a)],
        0)


def test_criterion_1_exact_bounds():
    failures = []
    for entry in catalog_list():
        if not entry.primary:
            continue
        expected = 1 if entry.name == "I4422_7" else 0
        lb = local_bound(entry.functional)
        if lb != expected:
            failures.append(f"{entry.name}: local bound {lb} != {expected}")
        if lb != local_bound_bruteforce(entry.functional):
            failures.append(f"{entry.name}: fast and brute-force bounds differ")
    rng = random.Random(12345)
    scenarios = [Scenario(2, 2), Scenario(3, 3), Scenario(4, 3), Scenario(4, 4)]
    for i in range(1000):
        f = random_functional(rng, scenarios[i % len(scenarios)])
        if local_bound(f) != local_bound_bruteforce(f):
            failures.append(f"random functional #{i}: bound mismatch")
    report("criterion 1 (exact local bounds)", failures)


def test_criterion_2_facets():
    failures = []
    for entry in catalog_list():
        if not entry.primary:
            continue
        rep = facet_check(entry.functional)
        if not rep.is_tight:
            failures.append(f"{entry.name}: not tight ({rep})")
        expected_dim = ns_dimension(entry.native_scenario) - 1
        if rep.affine_dim != expected_dim:
            failures.append(
                f"{entry.name}: affine dim {rep.affine_dim} != {expected_dim}")
    chsh = facet_check(catalog_get("CHSH").functional)
    if (chsh.affine_dim, chsh.ns_dim) != (7, 8):
        failures.append(f"CHSH dims {chsh.affine_dim}/{chsh.ns_dim} != 7/8")
    i3322 = facet_check(catalog_get("I3322").functional)
    if (i3322.affine_dim, i3322.ns_dim) != (14, 15):
        failures.append(f"I3322 dims {i3322.affine_dim}/{i3322.ns_dim} != 14/15")
    report("criterion 2 (facet dimensions)", failures)


def test_criterion_3_equivalence_classes():
    failures = []
    names_4422 = [e.name for e in catalog_list()
                  if e.primary and e.native_scenario == Scenario(4, 4)]
    keys = {name: canonical_key(catalog_get(name).functional)
            for name in names_4422}
    if len(set(keys.values())) != 26:
        failures.append(f"expected 26 distinct canonical forms, "
                        f"got {len(set(keys.values()))}")
    from bellscan.symmetry import equivalent
    if not equivalent(catalog_get("I3322").functional,
                      catalog_get("I3322_TILDE").functional):
        failures.append("I3322 and its symmetric form are not equivalent")
    missing = {name for name in names_4422
               if symmetric_representative(catalog_get(name).functional) is None}
    if missing != SYMMETRIC_MISSING:
        failures.append(f"asymmetric set {sorted(missing)} != "
                        f"{sorted(SYMMETRIC_MISSING)}")
    if len(names_4422) - len(missing) != 20:
        failures.append("symmetric representative count != 20")
    report("criterion 3 (equivalence classes)", failures)


def test_criterion_4_quantum_violations(table_rows):
    failures = []
    for name in PRIMARY_NAMES:
        row = table_rows[name]
        ref_v, ref_t = REFERENCE[name][0], REFERENCE[name][1]
        if abs(row.violation - ref_v) > 1e-3:
            failures.append(
                f"{name}: value {row.violation:.4f} vs reference {ref_v:.4f}")
        if abs(row.theta_max_over_pi - fold(ref_t)) > 5e-3:
            failures.append(
                f"{name}: theta/pi {row.theta_max_over_pi:.4f} vs "
                f"reference {fold(ref_t):.4f}")

    chsh = table_rows["CHSH"]
    if abs(chsh.violation - CHSH_MAX) > 1e-6:
        failures.append("CHSH value not within 1e-6 of the closed form")
    if abs(chsh.theta_max_over_pi - 0.25) > 1e-6:
        failures.append("CHSH theta not within 1e-6 of 1/4")

    f4 = catalog_get("I4422_4").functional
    rank1 = quantum_value_at(f4, math.pi / 4, False, restarts=50, seed=SEED)
    if rank1 > 1e-6:
        failures.append(f"I4422_4 rank-1 value at pi/4 is {rank1:.2e} > 1e-6")
    # The reference cell 0.2071 is the value of the specific construction
    # that deterministically drops two settings per side (reproduced in
    # tests/test_quantum.py).  The optimum of the full degenerate effect
    # class {projector, identity, zero} is provably 2*(1/sqrt2 - 1/2): zero
    # effects on Alice's last two settings plus Bob projectors with
    # b0 = b1, b3 = -b2 leave twice the CH form.  The faithful optimizer
    # therefore cannot land within 1e-4 of 0.2071; this check fails by
    # design and is documented as a reference-table defect.
    deg = quantum_value_at(f4, math.pi / 4, True, restarts=50, seed=SEED)
    if abs(deg - 0.2071) > 1e-4:
        failures.append(
            f"I4422_4 degenerate value at pi/4 is {deg:.4f}, reference 0.2071 "
            f"(true class optimum 2*CHSH = {2 * CHSH_MAX:.4f})")
    report("criterion 4 (quantum violations)", failures)


def test_criterion_5_noise_thresholds(table_rows):
    failures = []
    for name in PRIMARY_NAMES:
        row = table_rows[name]
        ref_wmax, ref_w = REFERENCE[name][2], REFERENCE[name][3]
        if abs(row.w_max - ref_wmax) > 1e-3:
            failures.append(
                f"{name}: w_max {row.w_max:.4f} vs reference {ref_wmax:.4f}")
        if abs(row.w - ref_w) > 1e-3:
            failures.append(f"{name}: w {row.w:.4f} vs reference {ref_w:.4f}")
        if not row.w_max <= row.w + 1e-6:
            failures.append(f"{name}: w_max {row.w_max:.6f} > w {row.w:.6f}")
    if abs(table_rows["CHSH"].w - 1 / math.sqrt(2)) > 1e-9:
        failures.append("w(CHSH) not within 1e-9 of 1/sqrt(2)")
    if abs(table_rows["I3322"].w - 0.8) > 1e-9:
        failures.append("w(I3322) not within 1e-9 of 4/5")
    report("criterion 5 (noise thresholds)", failures)


def test_criterion_6_detection_thresholds(table_rows):
    failures = []
    for name in PRIMARY_NAMES:
        row = table_rows[name]
        ref_eta = REFERENCE[name][4]
        if abs(row.eta_symmetric - ref_eta) > 2e-3:
            failures.append(
                f"{name}: eta {row.eta_symmetric:.4f} vs reference {ref_eta:.4f}")

    fine = eta_threshold_symmetric(catalog_get("CHSH").functional,
                                   seed=SEED, eta_tol=1e-7)
    if abs(fine.eta - 2 / (math.sqrt(2) + 1)) > 1e-6:
        failures.append("eta(CHSH) not within 1e-6 of 2/(sqrt(2)+1)")

    # asymmetric trend toward weak entanglement (limits are asymptotic and
    # deliberately not asserted as point values)
    i3322 = catalog_get("I3322").functional
    at_001 = eta_threshold_asymmetric(i3322, 0.01 * math.pi, seed=SEED).eta
    at_005 = eta_threshold_asymmetric(i3322, 0.05 * math.pi, seed=SEED).eta
    if not 0.43 <= at_001 <= 0.46:
        failures.append(f"I3322 eta_B at theta/pi=0.01 is {at_001:.4f}, "
                        "outside [0.43, 0.46]")
    if not at_001 < at_005:
        failures.append("I3322 eta_B is not decreasing toward weak entanglement")
    f3 = catalog_get("I4422_3").functional
    f3_001 = eta_threshold_asymmetric(f3, 0.01 * math.pi, seed=SEED).eta
    f3_005 = eta_threshold_asymmetric(f3, 0.05 * math.pi, seed=SEED).eta
    if not 0.425 <= f3_001 <= 0.46:
        failures.append(f"I4422_3 eta_B at theta/pi=0.01 is {f3_001:.4f}, "
                        "outside [0.425, 0.46]")
    if not f3_001 < f3_005:
        failures.append("I4422_3 eta_B is not decreasing toward weak entanglement")
    report("criterion 6 (detection thresholds)", failures)


def test_criterion_7_search():
    failures = []
    cfg = SearchConfig(Scenario(3, 3), corr_range=(-1, 1), marg_min=-2)
    rep = run_search(cfg)
    found = {canonical_key(f.functional) for f in rep.facets_found}
    expected = {
        canonical_key(lift(catalog_get("CHSH").functional, Scenario(3, 3))),
        canonical_key(catalog_get("I3322").functional),
    }
    if found != expected:
        failures.append(
            f"3322 exhaustive search found {len(found)} classes, expected "
            "exactly the CHSH lifting and the I3322 class")

    cfg = SearchConfig(Scenario(4, 4), mode="random", sample_count=10 ** 5, seed=SEED)
    rep = run_search(cfg)
    if rep.candidates_tested != 10 ** 5:
        failures.append("random search did not test the requested sample count")
    seen = set()
    for finding in rep.facets_found:
        if not facet_check(finding.functional).is_tight:
            failures.append(f"reported non-facet {finding.functional}")
        key = canonical_key(finding.functional)
        if key in seen:
            failures.append("duplicate canonical class in report")
        seen.add(key)
    report("criterion 7 (candidate search)", failures)


def test_criterion_8_properties():
    failures = []

    # exact invariance of value - bound under relabelings
    rng = random.Random(777)
    for _ in range(40):
        scenario = rng.choice([Scenario(2, 2), Scenario(3, 3), Scenario(3, 2)])
        f = random_functional(rng, scenario, -2, 2)
        t = random_transformation(scenario, rng)
        verts = list(strategies(scenario))
        p = behavior_of_strategy(rng.choice(verts))
        g = apply_transformation(f, t)
        q = relabel_behavior(p, t)
        if evaluate(f, p) - f.bound != evaluate(g, q) - g.bound:
            failures.append(f"relabeling changed value-bound for {f}")
    for name in ("CHSH", "I3322", "AS2", "I4422_7"):
        f = catalog_get(name).functional
        t = random_transformation(f.scenario, rng)
        if not facet_check(apply_transformation(f, t)).is_tight:
            failures.append(f"{name}: relabeling broke tightness")

    # see-saw sweeps never decrease the objective
    for name in ("CHSH", "I4422_2"):
        res = seesaw_maximize(catalog_get(name).functional, restarts=6,
                              seed=SEED, record_history=True)
        for row in res.history:
            if min(b - a for a, b in zip(row, row[1:])) < -1e-9:
                failures.append(f"{name}: objective decreased during a sweep")
                break

    # closed-form derivatives vs central finite differences
    rng2 = random.Random(4)
    worst = 0.0
    for _ in range(30):
        args = [rng2.uniform(0.05, math.pi / 4 - 0.05)] + \
               [rng2.uniform(0.1, math.pi - 0.1) for _ in range(4)]
        grads = _joint_prob_angles_grad(*args)
        for i in range(5):
            hi_args, lo_args = list(args), list(args)
            hi_args[i] += 1e-5
            lo_args[i] -= 1e-5
            fd = (_joint_prob_angles(*hi_args) - _joint_prob_angles(*lo_args)) / 2e-5
            worst = max(worst, abs(fd - grads[i]))
    if worst > 1e-6:
        failures.append(f"derivative mismatch {worst:.2e} > 1e-6")

    # detection maps keep behaviors inside the box constraints
    rng3 = random.Random(8)
    for _ in range(60):
        model = QubitModel(
            rng3.uniform(0, math.pi / 4),
            tuple(projector([rng3.gauss(0, 1) for _ in range(3)]) for _ in range(2)),
            tuple(projector([rng3.gauss(0, 1) for _ in range(3)]) for _ in range(2)))
        p = model_behavior(model)
        for ea in np.linspace(0, 1, 5):
            for eb in np.linspace(0, 1, 5):
                d = DetectionModel(float(ea), float(eb),
                                   (rng3.randrange(2), rng3.randrange(2)),
                                   (rng3.randrange(2), rng3.randrange(2)))
                try:
                    detected_behavior(p, d)
                except Exception as exc:  # Behavior validation raising = failure
                    failures.append(f"box constraint violated: {exc}")
    report("criterion 8 (properties)", failures)
