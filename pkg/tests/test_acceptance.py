"""The ten acceptance criteria, one pass/fail line each.

Each test runs one criterion end to end, prints its summary line to the
terminal (bypassing capture so the line is always visible in the pytest
output), and asserts both the verdict and the wall-clock budget.
"""

from __future__ import annotations

import pytest

from critlab import run_criterion


def check(capsys, number: int) -> None:
    r = run_criterion(number)
    with capsys.disabled():
        print(flush=True)
        print(r.line, flush=True)
    assert r.passed, r.line
    assert r.elapsed < r.budget, r.line


def test_criterion_01_exhaustive_classification(capsys):
    check(capsys, 1)


def test_criterion_02_transform_invariants(capsys):
    check(capsys, 2)


def test_criterion_03_reduction_certificates(capsys):
    check(capsys, 3)


def test_criterion_04_tight_pair_structure(capsys):
    check(capsys, 4)


def test_criterion_05_interval_model_detection(capsys):
    check(capsys, 5)


def test_criterion_06_exact_circle_arithmetic(capsys):
    check(capsys, 6)


def test_criterion_07_stability_sampling(capsys):
    check(capsys, 7)


def test_criterion_08_factorization_lemmas(capsys):
    check(capsys, 8)


def test_criterion_09_relativization_dichotomy(capsys):
    check(capsys, 9)


def test_criterion_10_rigidity_forcing(capsys):
    check(capsys, 10)
