"""Acceptance gate: the headline guarantees at full scale.

Each test prints exactly one [PASS]/[FAIL] line (run with -s to see
them all).  Counts, fuel, sample sizes, and time budgets are fixed
here on purpose — do not shrink them to make a failure go away.
"""

import time
from pathlib import Path

import pytest

from lamg import suites, surface
from lamg.propgen import GenConfig

CORPUS = Path(__file__).parent.parent / "corpus"
SEED = 2026
CFG = GenConfig(seed=SEED)  # fuel=2000, samples=8, function depth cap 3


def _gate(label, ok, summary):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {summary}")
    assert ok, f"{label}: {summary}"


@pytest.fixture(scope="module")
def ep_reports():
    return {
        "retraction": suites.run_suite("retraction", CFG, 500),
        "projection": suites.run_suite("projection", CFG, 500),
    }


def test_criterion_1_exact_operational_traces():
    fuel = {"17_omega": 6}
    start = time.perf_counter()
    mismatches, seen_rules = [], set()
    programs = sorted(CORPUS.glob("*.lamg"))
    for path in programs:
        t = surface.parse_gradual(path.read_text())
        got = surface.format_gradual_trace(t, fuel=fuel.get(path.stem, 200))
        if got != path.with_suffix(".trace").read_text():
            mismatches.append(path.stem)
        for line in got.splitlines():
            if line.startswith("--["):
                seen_rules.add(line[3:line.index("]")])
    wall = time.perf_counter() - start
    cast_rules = {"cast-dyn-id", "cast-unit-id", "cast-tag-up",
                  "cast-tag-down", "cast-tag-hit", "cast-tag-miss",
                  "cast-mismatch", "cast-pair", "cast-sum-inl",
                  "cast-sum-inr", "cast-fun"}
    missing = cast_rules - seen_rules
    ok = len(programs) == 25 and not mismatches and not missing and wall < 1.0
    _gate("criterion 1 (exact traces)",
          ok, f"25 programs, {len(mismatches)} trace mismatches, "
              f"{len(missing)} uncovered cast rules, {wall:.2f}s")


def test_criterion_2_meta_soundness():
    report = suites.run_suite("meta", CFG, 1000)
    ok = (report.fails == 0 and report.inconclusive == 0
          and report.wall_seconds < 30)
    _gate("criterion 2 (typing/progress/determinism)",
          ok, f"1000 programs x 2 languages, {report.fails} violations, "
              f"{report.wall_seconds:.1f}s")


def test_criterion_3_compilation_adequacy():
    report = suites.run_suite("adequacy", CFG, 300)
    ok = (report.fails == 0 and report.inconclusive <= 15
          and report.wall_seconds < 60)
    _gate("criterion 3 (compilation adequacy)",
          ok, f"300 programs, {report.fails} fails, "
              f"{report.inconclusive} inconclusive (cap 15), "
              f"{report.wall_seconds:.1f}s")


def test_criterion_4_ep_pair_laws(ep_reports):
    r, p = ep_reports["retraction"], ep_reports["projection"]
    wall = r.wall_seconds + p.wall_seconds
    ok = r.fails == 0 and p.fails == 0 and wall < 60
    _gate("criterion 4 (retraction/projection laws)",
          ok, f"500+500 cases, fails {r.fails}+{p.fails}, {wall:.1f}s")


def test_criterion_5_purity_and_termination(ep_reports):
    r, p = ep_reports["retraction"], ep_reports["projection"]
    stuck_embeds = r.notes.get("embedding_exhausted", 0)
    stuck_projs = p.notes.get("projection_exhausted", 0)
    impure = sum(1 for row in r.rows if row["cause"] == "embedding was not pure")
    checked = (r.notes.get("purity_checked", 0),
               p.notes.get("termination_checked", 0))
    ok = (stuck_embeds == 0 and stuck_projs == 0 and impure == 0
          and all(n > 400 for n in checked))
    _gate("criterion 5 (embedding purity, projection termination)",
          ok, f"{impure} impure embeddings, {stuck_embeds}+{stuck_projs} "
              f"non-terminating runs, {checked[0]}/{checked[1]} checked")


def test_criterion_6_decomposition():
    d = suites.run_suite("decomposition", CFG, 300)
    u = suites.run_suite("ud_are_casts", CFG, 300)
    ok = d.fails == 0 and u.fails == 0
    _gate("criterion 6 (ep decomposition, boundary casts)",
          ok, f"300+300 cases, fails {d.fails}+{u.fails}")


def test_criterion_7_factorization():
    report = suites.run_suite("factorization", CFG, 300)
    pinned = report.rows[:len(suites._FORCED_FACTOR)]
    pinned_ok = all(row["verdict"] == "holds" for row in pinned)
    expected_heads = [
        f"{surface.print_gradual_type(a)} to {surface.print_gradual_type(b)}"
        for a, b in suites._FORCED_FACTOR]
    heads_ok = [row["detail"] for row in pinned] == expected_heads
    ok = report.fails == 0 and pinned_ok and heads_ok
    _gate("criterion 7 (casts factor through ?)",
          ok, f"300 cases incl {len(pinned)} pinned incompatible-tag pairs, "
              f"{report.fails} fails")


def test_criterion_8_graduality():
    report = suites.run_suite("graduality", CFG, 220)
    accepted = report.notes.get("accepted", 0)
    ok = (report.fails == 0 and accepted >= 200
          and report.inconclusive <= 22 and report.wall_seconds < 120)
    _gate("criterion 8 (graduality)",
          ok, f"{accepted} accepted pairs (need 200), {report.fails} fails, "
              f"{report.inconclusive} inconclusive (cap 22), "
              f"{report.wall_seconds:.1f}s")


def test_criterion_9_reflexivity():
    report = suites.run_suite("reflexivity", CFG, 200)
    ok = report.fails == 0
    _gate("criterion 9 (precision is reflexive)",
          ok, f"200 programs, {report.fails} fails")
