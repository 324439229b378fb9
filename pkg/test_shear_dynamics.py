#!/usr/bin/env python3
"""
Tests for the classical shear recursions and the periodic-orbit solver.
"""

import cmath
import itertools
import math
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import pytest
from hypothesis import assume, given, settings, strategies as st

from mcg.word import MappingClassWord, cyclic_normalize
from shear.dynamics import (
    ShearWeights,
    SurfaceKind,
    closing_residual,
    evolve,
    flip_parameters,
    is_nonreal,
    select_geometric,
    step_L,
    step_R,
    unstep,
)
from shear.solver import SeedGrid, is_isolated, isolation_measure, periodic_residual, solve_periodic
from utils.errors import DegenerateWeight, InvalidParameter, NoGeometricCandidate, NoSolutionFound

OMEGA = cmath.exp(2j * math.pi / 3)
GOLDEN_ROOTS = ((-3 + math.sqrt(5)) / 2, (-3 - math.sqrt(5)) / 2)

TORUS = SurfaceKind.TORUS
SPHERE = SurfaceKind.SPHERE

weights = st.builds(
    lambda r1, t1, r2, t2: (cmath.rect(r1, t1), cmath.rect(r2, t2)),
    st.floats(0.3, 3.0), st.floats(-math.pi, math.pi),
    st.floats(0.3, 3.0), st.floats(-math.pi, math.pi),
)


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def found(solutions, x1, x2, tol=1e-8) -> bool:
    return any(close(w.x1, x1, tol) and close(w.x2, x2, tol) for w in solutions)


@pytest.mark.parametrize("value,expected", [
    ("torus", TORUS), ("Torus1", TORUS), ("sphere", SPHERE), ("sphere4", SPHERE),
])
def test_surface_kind_aliases(value, expected):
    assert SurfaceKind.parse(value) is expected


def test_surface_kind_rejects_unknown():
    with pytest.raises(InvalidParameter):
        SurfaceKind.parse("genus2")


def test_third_weight_is_derived():
    w = ShearWeights(2.0, 0.5, hN=3.0)
    assert close(w.x3, 3.0)


def test_torus_rl_orbit_of_omega():
    w = ShearWeights(OMEGA, OMEGA)
    after_r = step_R(w, TORUS)
    assert close(after_r.x1, OMEGA.conjugate()) and close(after_r.x2, OMEGA.conjugate())
    after_l = step_L(after_r, TORUS)
    assert close(after_l.x1, OMEGA) and close(after_l.x2, OMEGA)


def test_torus_rl_orbit_through_one():
    trajectory = evolve(MappingClassWord("RL"), ShearWeights(OMEGA, 1.0), TORUS)
    assert close(trajectory[1].x1, 1.0) and close(trajectory[1].x2, OMEGA)
    assert closing_residual(trajectory) < 1e-12


@pytest.mark.parametrize("kind,letter,start,expected", [
    (TORUS, "R", (2.0, 1.0), (2 / 9, 9.0)),
    (TORUS, "L", (1.0, 2.0), (4 / 9, 9 / 2)),
    (SPHERE, "R", (1.0, 1.0), (-1 / 4, 4.0)),
])
def test_step_examples(kind, letter, start, expected):
    stepped = step_R(ShearWeights(*start), kind) if letter == "R" else step_L(ShearWeights(*start), kind)
    assert close(stepped.x1, expected[0], 1e-12) and close(stepped.x2, expected[1], 1e-12)


@pytest.mark.parametrize("kind", [TORUS, SPHERE])
@given(pair=weights, phase=st.floats(-math.pi, math.pi), letters=st.text(alphabet="RL", min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_steps_preserve_hN(kind, pair, phase, letters):
    hN = cmath.exp(1j * phase)
    try:
        trajectory = evolve(MappingClassWord(letters), ShearWeights(*pair, hN=hN), kind)
    except DegenerateWeight:
        assume(False)
    assert all(w.hN == hN for w in trajectory)


def test_closing_residual_is_relative_for_small_weights():
    trajectory = [ShearWeights(1e-9, 1.0), ShearWeights(2e-9, 1.0)]
    assert closing_residual(trajectory) >= 0.5


def test_sphere_sign_twist():
    w = ShearWeights(0.7 + 0.2j, 1.3 - 0.4j)
    torus, sphere = step_R(w, TORUS), step_R(w, SPHERE)
    assert close(sphere.x1, -torus.x1)
    assert close(sphere.x2, torus.x2)
    torus, sphere = step_L(w, TORUS), step_L(w, SPHERE)
    assert close(sphere.x1, torus.x1)
    assert close(sphere.x2, -torus.x2)


@pytest.mark.parametrize("kind", [TORUS, SPHERE])
@pytest.mark.parametrize("letter", ["R", "L"])
@given(pair=weights)
@settings(max_examples=40, deadline=None)
def test_unstep_inverts_step(kind, letter, pair):
    x1, x2 = pair
    assume(abs(1 + x1) > 0.05 and abs(1 + x2) > 0.05)
    w = ShearWeights(x1, x2)
    try:
        stepped = step_R(w, kind) if letter == "R" else step_L(w, kind)
        back = unstep(stepped, letter, kind)
    except DegenerateWeight:
        assume(False)
    assert close(back.x1, x1, 1e-8) and close(back.x2, x2, 1e-8)


def test_degenerate_input_reports_step():
    with pytest.raises(DegenerateWeight) as info:
        evolve(MappingClassWord("RL"), ShearWeights(-1.0, 2.0), TORUS)
    assert info.value.step == 1
    assert info.value.to_dict()["stage"] == "solve"


def test_flip_parameters():
    word = MappingClassWord("RL")
    trajectory = evolve(word, ShearWeights(OMEGA, OMEGA), TORUS)
    params = flip_parameters(word, trajectory)
    assert close(params[0], OMEGA)
    assert close(params[1], 1 / OMEGA.conjugate())


def test_seed_grid_specs():
    grid = SeedGrid.from_spec("4x6")
    assert (grid.n_mod, grid.n_arg) == (4, 6)
    assert grid.points().size == 24
    z1, z2 = grid.starts()
    assert z1.size == z2.size == 24 * 24
    with pytest.raises(InvalidParameter):
        SeedGrid.from_spec("0x3")


def test_solve_torus_rl():
    word = MappingClassWord("RL")
    solutions = solve_periodic(word, TORUS)
    for x1, x2 in [(OMEGA, OMEGA), (OMEGA.conjugate(), OMEGA.conjugate()), (OMEGA, 1.0), (OMEGA.conjugate(), 1.0)]:
        assert found(solutions, x1, x2)
    for w in solutions:
        assert periodic_residual(word, w, TORUS) <= 1e-12


def test_solutions_closed_under_conjugation():
    word = MappingClassWord("RRL")
    solutions = solve_periodic(word, TORUS)
    for w in solutions:
        assert found(solutions, w.x1.conjugate(), w.x2.conjugate(), 1e-7)


def test_solutions_sorted_and_distinct():
    solutions = solve_periodic(MappingClassWord("RL"), TORUS)
    keys = [w.key for w in solutions]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_select_geometric_torus_rl():
    word = MappingClassWord("RL")
    chosen = select_geometric(solve_periodic(word, TORUS), word, TORUS)
    assert close(chosen.x1, OMEGA, 1e-8) and close(chosen.x2, OMEGA, 1e-8)


def test_select_geometric_without_word_prefers_upper_half_plane():
    chosen = select_geometric([ShearWeights(OMEGA.conjugate(), OMEGA.conjugate()), ShearWeights(OMEGA, OMEGA)])
    assert chosen.x1.imag > 0


def test_select_geometric_rejects_real_solutions():
    with pytest.raises(NoGeometricCandidate):
        select_geometric([ShearWeights(OMEGA, 1.0), ShearWeights(2.0, 3.0)])
    with pytest.raises(NoGeometricCandidate):
        select_geometric([])


def test_select_geometric_single_candidate():
    only = ShearWeights(OMEGA.conjugate(), OMEGA.conjugate())
    assert select_geometric([only]) is only


def test_sphere_rl_solutions_are_real():
    word = MappingClassWord("RL")
    solutions = solve_periodic(word, SPHERE)
    assert solutions
    for w in solutions:
        assert abs(w.x1.imag) < 1e-9 and abs(w.x2.imag) < 1e-9
        assert any(close(w.x1, root, 1e-8) for root in GOLDEN_ROOTS)
    with pytest.raises(NoGeometricCandidate):
        select_geometric(solutions, word, SPHERE)


def test_select_geometric_accepts_orbit_entered_at_real_point():
    # LRR enters the RRL orbit where x1 = 1
    word = MappingClassWord("LRR")
    chosen = select_geometric(solve_periodic(word, TORUS), word, TORUS)
    assert close(chosen.x1, 1.0, 1e-8)
    assert abs(chosen.x2.imag) > 0.1
    trajectory = evolve(word, chosen, TORUS)
    assert any(
        abs(w.x1.imag) > 1e-6 and abs(w.x2.imag) > 1e-6 and abs(w.x3.imag) > 1e-6
        for w in trajectory
    )


@pytest.mark.parametrize("x1,x2", [(OMEGA, OMEGA), (OMEGA, 1.0)])
def test_rl_solutions_are_isolated(x1, x2):
    word = MappingClassWord("RL")
    w = ShearWeights(x1, x2)
    assert isolation_measure(word, w, TORUS) > 0.01
    assert is_isolated(word, w, TORUS)


def test_solve_rrll_reports_families_once():
    word = MappingClassWord("RRLL")
    solutions = solve_periodic(word, TORUS)
    assert 0 < len(solutions) < 50
    assert any(is_nonreal(w.x1) or is_nonreal(w.x2) for w in solutions)
    assert sum(not is_isolated(word, w, TORUS) for w in solutions) <= 2
    for w in solutions:
        trajectory = evolve(word, w, TORUS)
        assert closing_residual(trajectory) <= 1e-12
        for point in trajectory:
            for z in (point.x1, point.x2):
                assert abs(z) > 1e-6 and abs(1 + z) > 1e-6


def _necklaces(max_length):
    words = set()
    for length in range(2, max_length + 1):
        for letters in itertools.product("RL", repeat=length):
            word = MappingClassWord("".join(letters))
            if word.is_admissible():
                words.add(cyclic_normalize(word).letters)
    return sorted(words)


def test_short_words_close_up():
    seeds = SeedGrid.from_spec("4x6")
    solved = 0
    words = _necklaces(8)
    for letters in words:
        word = MappingClassWord(letters)
        try:
            solutions = solve_periodic(word, TORUS, seeds=seeds)
        except NoSolutionFound:
            continue
        solved += 1
        for w in solutions:
            assert periodic_residual(word, w, TORUS) <= 1e-10, letters
    assert solved >= len(words) // 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
