import numpy as np
import pytest

from mvlsync.dynamics import attractors, max_invariant_subset
from mvlsync.errors import DimensionError, InfeasibleError, SynthesisError
from mvlsync.logic import operator_matrix
from mvlsync.network import node_structure_from_L
from mvlsync.pinning import (PerturbTargets, apply_feedback, attractors_to_perturb,
                             perturb_transition, plan_from_matrix, solve_feedback, solve_plan,
                             synthesize_pinning, t_sets, validate_assignment, verify_plan)
from mvlsync.stp import LogicMatrix, cheng_product, delta, khatri_rao_fold, stp_chain
from mvlsync.sync import SyncSpec, check_global_sync, masb, sast, sync_state_set

from conftest import random_system


def lam_of(sysm, gamma=1):
    return sync_state_set(SyncSpec(sysm.k, sysm.n, gamma))


@pytest.fixture(scope="module")
def paper_like_bar(systems):
    """Example 2 with its bad fixed point redirected to 13963: the printed pinning."""
    s2 = systems["example2"]
    cols = s2.L.cols.copy()
    cols[15563 - 1] = 13963
    return LogicMatrix(cols.size, cols)


def test_targets_example2(systems):
    s2 = systems["example2"]
    assert attractors_to_perturb(attractors(s2), lam_of(s2)).omega0 == [[15563]]


def test_targets_example1_empty(systems):
    s1 = systems["example1"]
    assert len(attractors_to_perturb(attractors(s1), lam_of(s1))) == 0


def test_targets_example3(systems):
    s3 = systems["example3"]
    lam = lam_of(s3, 0)
    got = attractors_to_perturb(attractors(s3), lam).omega0
    diag = {(i - 1) * 64 + i for i in range(1, 65)}
    assert got == [[c] for c in (1387, 2752, 4096) if c not in diag]


def test_nothing_to_perturb(systems):
    s1 = systems["example1"]
    lam = lam_of(s1)
    plan = perturb_transition(s1, lam, max_invariant_subset(s1, lam), masb(s1, lam), PerturbTargets([]))
    assert plan.L_bar == s1.L and plan.pinned == []
    solve_plan(plan)
    check = verify_plan(plan, lam)
    assert check.global_sync and check.gamma == 9


def test_empty_sync_set_is_infeasible(systems):
    s2 = systems["example2"]
    empty = np.zeros(s2.size, bool)
    with pytest.raises(InfeasibleError):
        perturb_transition(s2, empty, empty, empty, PerturbTargets([[15563]]))


def test_default_policy_example2(systems):
    s2 = systems["example2"]
    lam = lam_of(s2)
    plan = synthesize_pinning(s2, 1)
    assert plan.redirects == [(15563, 7813)]
    assert plan.pinned == [1, 2, 3] and plan.p1 == [1, 2, 3] and plan.p2 == []
    check = verify_plan(plan, lam)
    assert check.global_sync
    assert check_global_sync(s2.with_matrix(plan.L_bar), lam)
    for i in plan.pinned:
        assert validate_assignment(plan.K[i], plan.H[i], plan.Hbar[i], 5)


def test_minimal_pinned_set(systems):
    s2 = systems["example2"]
    plan = synthesize_pinning(s2, 1)
    for i in range(1, 7):
        same = node_structure_from_L(plan.L_bar, i, 5) == node_structure_from_L(s2.L, i, 5)
        assert (i in plan.pinned) != same


def test_printed_plan_reproduced(systems, paper_like_bar):
    s2 = systems["example2"]
    lam = lam_of(s2)
    plan = plan_from_matrix(s2, paper_like_bar)
    assert plan.pinned == [2, 3, 4] and plan.p1 == [2, 3] and plan.p2 == [1]
    solve_plan(plan)
    check = verify_plan(plan, lam)
    assert check.global_sync and check.gamma == 9
    assert sast(s2.with_matrix(paper_like_bar), [15563], lam) == 6


def test_printed_operators_fit(systems, paper_like_bar):
    s2 = systems["example2"]
    OR, AND = operator_matrix("or", 5), operator_matrix("and", 5)
    plan = solve_plan(plan_from_matrix(s2, paper_like_bar), {2: OR, 3: OR, 4: AND})
    assert plan.M[2] == OR and plan.M[3] == OR and plan.M[4] == AND
    assert plan.K[2].tolist()[:8] == [5] * 8 and plan.K[2].tolist()[-8:] == [5] * 8
    assert plan.K[3].tolist()[:8] == [1] * 8 and plan.K[3].tolist()[-8:] == [5] * 8
    assert verify_plan(plan, lam_of(s2)).global_sync


def test_operator_that_cannot_fit(systems, paper_like_bar):
    s2 = systems["example2"]
    plan = plan_from_matrix(s2, paper_like_bar)
    const = LogicMatrix(5, [1] * 25)
    with pytest.raises(SynthesisError):
        solve_feedback(plan.H[2], plan.Hbar[2], 5, const)


def test_t_sets_partition(rng):
    H = LogicMatrix(3, rng.integers(1, 4, size=81))
    Hb = LogicMatrix(3, rng.integers(1, 4, size=81))
    state = t_sets(H, Hb, 3)
    allv = np.concatenate(list(state.T.values()))
    assert sorted(allv.tolist()) == list(range(1, 82))
    for sigma in range(1, 4):
        assert len(state.family(sigma)) <= 3


def test_solve_feedback_columnwise(rng):
    for k in (2, 3, 5):
        for _ in range(10):
            H = LogicMatrix(k, rng.integers(1, k + 1, size=k**2))
            Hb = LogicMatrix(k, rng.integers(1, k + 1, size=k**2))
            K, M = solve_feedback(H, Hb, k)
            assert validate_assignment(K, H, Hb, k)
            for l in range(k**2):
                col = stp_chain(M.dense(), delta(k, int(K.cols[l])), delta(k, int(H.cols[l])))
                assert np.array_equal(col, delta(k, int(Hb.cols[l])))


def test_solve_feedback_identity():
    H = LogicMatrix(3, [1, 2, 3, 3, 2, 1, 1, 1, 2])
    K, M = solve_feedback(H, H, 3)
    assert apply_feedback(K, M, H, 3) == H


def test_unused_entries_default_to_one():
    H = LogicMatrix(3, [1, 1])
    K, M = solve_feedback(H, LogicMatrix(3, [2, 3]), 3)
    assert K.tolist() == [1, 2]
    assert M.tolist() == [2, 1, 1, 3, 1, 1, 1, 1, 1]


def test_validate_contradiction():
    check = validate_assignment(LogicMatrix(2, [1, 1]), LogicMatrix(2, [1, 1]), LogicMatrix(2, [1, 2]), 2)
    assert not check.ok
    assert check.violations == [(1, 1, 2)]


def test_validate_any_k_when_groups_singleton(rng):
    H = LogicMatrix(3, [1, 2, 3, 1, 2, 3])
    Hb = LogicMatrix(3, [2, 2, 1, 2, 2, 1])
    for _ in range(10):
        assert validate_assignment(LogicMatrix(3, rng.integers(1, 4, size=6)), H, Hb, 3)


def test_shape_errors():
    with pytest.raises(DimensionError):
        solve_feedback(LogicMatrix(2, [1]), LogicMatrix(3, [1]), 2)


def test_corrupted_plan_detected(systems):
    s2 = systems["example2"]
    plan = synthesize_pinning(s2, 1)
    i = plan.pinned[0]
    m = plan.M[i].cols.copy()
    used = (plan.K[i].cols - 1) * 5 + plan.H[i].cols - 1
    m[used[0]] = m[used[0]] % 5 + 1
    plan.M[i] = LogicMatrix(5, m)
    with pytest.raises(SynthesisError):
        verify_plan(plan, lam_of(s2))


def test_unsolved_plan_rejected(systems):
    s2 = systems["example2"]
    lam = lam_of(s2)
    rep = attractors(s2)
    plan = perturb_transition(s2, lam, max_invariant_subset(s2, lam), masb(s2, lam, rep),
                              attractors_to_perturb(rep, lam))
    with pytest.raises(SynthesisError):
        verify_plan(plan, lam)


def test_seeded_policy_is_reproducible(systems):
    s2 = systems["example2"]
    a = synthesize_pinning(s2, 1, "seeded", 7)
    b = synthesize_pinning(s2, 1, "seeded", 7)
    assert a.L_bar == b.L_bar and a.pinned == b.pinned
    assert verify_plan(a, lam_of(s2)).global_sync


def test_unknown_policy(systems):
    with pytest.raises(ValueError):
        synthesize_pinning(systems["example2"], 1, "greedy")


def _sweep(rng, gamma, count, policy="lowest-index"):
    done, empty_basin = 0, 0
    while done < count:
        sysm = random_system(rng)
        lam = lam_of(sysm, gamma)
        if check_global_sync(sysm, lam):
            continue
        empty_basin += len(masb(sysm, lam)) == 0
        plan = synthesize_pinning(sysm, gamma, policy, seed=done)
        check = verify_plan(plan, lam)
        assert check.global_sync
        for i in plan.pinned:
            assert apply_feedback(plan.K[i], plan.M[i], plan.H[i], 3) == plan.Hbar[i]
        mats = [plan.Hbar.get(i, node_structure_from_L(sysm.L, i, 3)) for i in range(1, 3)]
        assert khatri_rao_fold(mats) == plan.L_bar
        done += 1
    return empty_basin


def test_sweep_nonempty_basin(rng):
    _sweep(rng, 1, 40)


def test_sweep_complete_sync_hits_empty_basins(rng):
    assert _sweep(rng, 0, 60) > 0


def test_sweep_seeded(rng):
    _sweep(rng, 0, 30, "seeded")
