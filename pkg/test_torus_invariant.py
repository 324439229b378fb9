#!/usr/bin/env python3
"""
Tests for the torus intertwiners C_R, C_L and the assembled invariant.
"""

import cmath
import math
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mcg.word import MappingClassWord
from shear.dynamics import ShearWeights, SurfaceKind, evolve, select_geometric, step_L, step_R
from shear.solver import solve_periodic
from weyl.roots import RootOfUnity, principal_root
from weyl.torus import build_torus_rep
from invariants.assembly import cyclic_residual, ordered_product
from invariants.roots import RootChoice, choose_roots
from invariants.spectrum import projective_invariants, spectra_agree, spectral_distance
from invariants.torus import (
    TORUS_MODEL,
    assemble_invariant,
    matrix_C_L,
    matrix_C_R,
    matrix_C_tilde_L,
    verify_conjugation,
    verify_word,
)
from utils.errors import IllConditioned, InvalidParameter, NonPeriodicTrajectory, NotPseudoAnosov

OMEGA = cmath.exp(2j * math.pi / 3)
TORUS = SurfaceKind.TORUS

nonzero = st.builds(cmath.rect, st.floats(0.6, 1.6), st.floats(-math.pi, math.pi))
phases = st.builds(lambda t: cmath.exp(1j * t), st.floats(-math.pi, math.pi))


def next_roots(root, u, v, h, letter):
    """Principal roots of the shear step of (u^N, v^N)."""
    N = root.N
    w = ShearWeights(u ** N, v ** N, h ** N)
    stepped = step_R(w, TORUS) if letter == "R" else step_L(w, TORUS)
    return principal_root(stepped.x1, N), principal_root(stepped.x2, N)


def closed_form_C_R(root, u, v, u1, v1, h, i, j):
    """Entry (i, j) of C_R for any integers i, j >= 0, without reducing mod N."""
    q = root.q
    m = j - i
    value = q ** (2 * m * m) * (u1 * v1 / (u * h)) ** m * (v1 / v) ** i
    for a in range(1, i + 1):
        value /= (1 + q ** (4 * a - 3) * u) * (1 + q ** (4 * a - 1) * u)
    return value


def omega_roots(N: int) -> RootChoice:
    trajectory = evolve(MappingClassWord("RL"), ShearWeights(OMEGA, OMEGA), TORUS)
    return choose_roots(trajectory, RootOfUnity(N))


# Closed forms

@pytest.mark.parametrize("builder", [matrix_C_R, matrix_C_L])
def test_scalar_case(builder):
    C = builder(RootOfUnity(1), 2.0, 3.0, 0.5, 1.5, 1.0)
    assert C.shape == (1, 1)
    assert C[0, 0] != 0


@pytest.mark.parametrize("N", [3, 5, 7])
def test_C_R_recursions(N):
    root = RootOfUnity(N)
    q = root.q
    u, v, h = 0.7 + 0.4j, 1.2 - 0.3j, cmath.exp(0.3j)
    u1, v1 = next_roots(root, u, v, h, "R")
    C = matrix_C_R(root, u, v, u1, v1, h)
    for i in range(1, N):
        for j in range(1, N):
            diagonal = (v1 / v) / ((1 + q ** (4 * i - 3) * u) * (1 + q ** (4 * i - 1) * u))
            assert cmath.isclose(C[i, j] / C[i - 1, j - 1], diagonal, rel_tol=1e-10)
            column = q ** (4 * (j - 1 - i)) * u1 * v1 / (u * q ** -2 * h)
            assert cmath.isclose(C[i, j] / C[i, j - 1], column, rel_tol=1e-10)


@pytest.mark.parametrize("N", [3, 5])
def test_C_tilde_L_recursions(N):
    root = RootOfUnity(N)
    q = root.q
    u, v, h = 1.1 + 0.2j, 0.6 - 0.5j, 1.0
    u2, v2 = next_roots(root, u, v, h, "L")
    D = matrix_C_tilde_L(root, u, v, u2, v2, h)
    for i in range(N - 1):
        for j in range(N - 1):
            diagonal = q ** (4 * i) * (u * v * v2 / (q ** -2 * h)) / (
                (1 + q ** (4 * i + 1) * v) * (1 + q ** (4 * i + 3) * v)
            )
            assert cmath.isclose(D[i + 1, j + 1] / D[i, j], diagonal, rel_tol=1e-10)
            column = q ** (4 * (j - i)) * u2 * v2 / (v * q ** -2 * h)
            assert cmath.isclose(D[i, j + 1] / D[i, j], column, rel_tol=1e-10)


@pytest.mark.parametrize("N", [3, 5])
def test_C_R_entries_are_N_periodic(N):
    root = RootOfUnity(N)
    u, v, h = 0.9 - 0.2j, 1.3 + 0.6j, cmath.exp(-0.7j)
    u1, v1 = next_roots(root, u, v, h, "R")
    C = matrix_C_R(root, u, v, u1, v1, h)
    for i in range(2 * N):
        for j in range(2 * N):
            assert cmath.isclose(closed_form_C_R(root, u, v, u1, v1, h, i, j), C[i % N, j % N], rel_tol=1e-9)


def test_C_L_is_G_times_C_tilde_L():
    root = RootOfUnity(5)
    u, v, h = 0.8 + 0.1j, 1.4j, 1.0
    u2, v2 = next_roots(root, u, v, h, "L")
    D = matrix_C_tilde_L(root, u, v, u2, v2, h)
    C = matrix_C_L(root, u, v, u2, v2, h)
    q = root.q
    for i in range(5):
        for j in range(5):
            summed = sum(q ** (4 * i * k) * D[k, j] for k in range(5))
            assert cmath.isclose(C[i, j], summed, rel_tol=1e-10, abs_tol=1e-12)


# Per-step conjugation

@pytest.mark.parametrize("letter", ["R", "L"])
@given(u=nonzero, v=nonzero, h=phases, N=st.sampled_from([3, 5, 7]))
@settings(max_examples=25, deadline=None)
def test_single_step_conjugation(letter, u, v, h, N):
    assume(abs(1 + u ** N) > 0.1 and abs(1 + v ** N) > 0.1)
    root = RootOfUnity(N)
    u1, v1 = next_roots(root, u, v, h, letter)
    C = (matrix_C_R if letter == "R" else matrix_C_L)(root, u, v, u1, v1, h)
    rep, rep_next = build_torus_rep(root, u, v, h), build_torus_rep(root, u1, v1, h)
    assert verify_conjugation(rep, letter, C, rep_next) <= 1e-10


def test_conjugation_holds_for_any_root_choice():
    root = RootOfUnity(5)
    u, v, h = 0.9 + 0.3j, 1.1 - 0.2j, 1.0
    u1, v1 = next_roots(root, u, v, h, "R")
    u1, v1 = u1 * root.power(4 * 2), v1 * root.power(4 * 3)
    C = matrix_C_R(root, u, v, u1, v1, h)
    assert verify_conjugation(build_torus_rep(root, u, v, h), "R", C, build_torus_rep(root, u1, v1, h)) <= 1e-10


# Root choice

def test_choose_roots_principal_and_selected():
    root = RootOfUnity(3)
    trajectory = [ShearWeights(8.0, 8.0), ShearWeights(8.0, 8.0)]
    assert cmath.isclose(choose_roots(trajectory, root).u[0], 2.0)
    chosen = choose_roots(trajectory, root, [(1, 0)])
    assert cmath.isclose(chosen.u[0], 2 * cmath.exp(2j * math.pi / 3))
    assert chosen.u[-1] == chosen.u[0] and chosen.v[-1] == chosen.v[0]


def test_choose_roots_rejects_open_trajectory():
    with pytest.raises(NonPeriodicTrajectory):
        choose_roots([ShearWeights(8.0, 8.0), ShearWeights(7.0, 8.0)], RootOfUnity(3))


def test_choose_roots_rejects_bad_selectors():
    trajectory = [ShearWeights(8.0, 8.0), ShearWeights(8.0, 8.0)]
    with pytest.raises(InvalidParameter):
        choose_roots(trajectory, RootOfUnity(3), [(3, 0)])
    with pytest.raises(InvalidParameter):
        choose_roots(trajectory, RootOfUnity(3), [(0, 0), (0, 0)])


def test_root_choice_rotation_stays_closed():
    roots = omega_roots(5)
    rotated = roots.rotate(1)
    assert rotated.u[0] == roots.u[1]
    assert rotated.u[-1] == rotated.u[0]


# Spectrum

def test_spectrum_of_scalar_matrix():
    spectrum = projective_invariants(2.5j * np.eye(3))
    assert np.allclose(spectrum.ratios, 1.0)


def test_spectrum_similarity_and_scalar_invariance():
    rng = np.random.default_rng(7)
    C = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    P = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    base = projective_invariants(C)
    similar = projective_invariants(P @ C @ np.linalg.inv(P))
    scaled = projective_invariants((0.3 - 2j) * C)
    assert spectral_distance(base.eigenvalues, similar.eigenvalues) <= 1e-8
    assert np.allclose(base.ratios, scaled.ratios, atol=1e-10)
    assert spectra_agree(base, scaled)


def test_char_poly_is_det_normalized():
    rng = np.random.default_rng(3)
    C = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    spectrum = projective_invariants(C)
    assert cmath.isclose(spectrum.char_poly[0], 1.0)
    assert cmath.isclose(spectrum.char_poly[-1], -1.0, abs_tol=1e-10)


def test_ill_conditioned_rejected():
    with pytest.raises(IllConditioned):
        projective_invariants(np.diag([1.0, 1e-14]))


# Assembly

@pytest.mark.parametrize("N", [3, 5])
def test_assemble_rl_at_omega(N):
    root = RootOfUnity(N)
    roots = omega_roots(N)
    report = assemble_invariant("RL", root, roots)
    assert max(report.residuals["perStep"]) <= 1e-10
    assert report.residuals["fullWord"] <= 1e-8
    assert report.residuals["cyclicCheck"] <= 1e-6
    assert report.passed
    assert verify_word("RL", roots, report.C) <= 1e-8
    assert cmath.isclose(np.linalg.norm(report.C), 1.0)


def test_rl_and_lr_spectra_agree():
    root = RootOfUnity(3)
    rl = assemble_invariant("RL", root, omega_roots(3))
    lr_trajectory = evolve(MappingClassWord("LR"), ShearWeights(OMEGA.conjugate(), OMEGA.conjugate()), TORUS)
    lr = assemble_invariant("LR", root, choose_roots(lr_trajectory, root))
    assert spectral_distance(rl.spectrum.eigenvalues, lr.spectrum.eigenvalues) <= 1e-6


def test_assemble_rejects_non_pseudo_anosov():
    trajectory = [ShearWeights(2.0, 3.0), ShearWeights(2.0, 3.0)]
    with pytest.raises(NotPseudoAnosov):
        assemble_invariant("R", RootOfUnity(3), choose_roots(trajectory, RootOfUnity(3)))


def test_assemble_rejects_length_mismatch():
    with pytest.raises(InvalidParameter):
        assemble_invariant("RRL", RootOfUnity(3), omega_roots(3))


def test_non_unit_h_is_flagged():
    root = RootOfUnity(3)
    h = cmath.exp(0.5j)
    word = MappingClassWord("RL")
    solutions = solve_periodic(word, TORUS, hN=h ** 3)
    trajectory = evolve(word, select_geometric(solutions, word, TORUS), TORUS)
    report = assemble_invariant(word, root, choose_roots(trajectory, root, h=h))
    assert "non-geometric" in report.flags
    assert report.residuals["fullWord"] <= 1e-8


@pytest.mark.parametrize("N", [3, 5])
@pytest.mark.parametrize("letters", ["RL", "RRL", "RLL", "RRLL", "RRRL", "RLRLLL"])
def test_cyclic_invariance_over_words(letters, N):
    word = MappingClassWord(letters)
    root = RootOfUnity(N)
    trajectory = evolve(word, select_geometric(solve_periodic(word, TORUS), word, TORUS), TORUS)
    report = assemble_invariant(word, root, choose_roots(trajectory, root))
    assert report.residuals["fullWord"] <= 1e-8
    assert report.residuals["cyclicCheck"] <= 1e-6


def test_cyclic_residual_catches_a_wrong_factor():
    word = MappingClassWord("RRL")
    trajectory = evolve(word, select_geometric(solve_periodic(word, TORUS), word, TORUS), TORUS)
    roots = choose_roots(trajectory, RootOfUnity(3))
    reps = [TORUS_MODEL.representation(roots, i) for i in range(roots.n + 1)]
    factors = [TORUS_MODEL.factor(letter, roots, i) for i, letter in enumerate(word)]
    eigenvalues = np.linalg.eigvals(ordered_product(factors))
    assert cyclic_residual(word, TORUS_MODEL, reps, factors, eigenvalues) <= 1e-6

    factors[1] = np.eye(3, dtype=complex)
    eigenvalues = np.linalg.eigvals(ordered_product(factors))
    assert cyclic_residual(word, TORUS_MODEL, reps, factors, eigenvalues) > 1e-3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
