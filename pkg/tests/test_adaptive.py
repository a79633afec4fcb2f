import pytest
from hypothesis import given, strategies as st

from synpar.adaptive import DEFAULT_CACHE_BUDGET, WorkloadFeatures, choose_strategy, measure_features
from synpar.kernels import SmvpInput
from synpar.numerics import DenseMatrix, Rng, gen_block_sparse
from synpar.runtime import ExecConfig, Strategy

MiB = 1024 * 1024


def test_one_thread_is_serial():
    assert choose_strategy(WorkloadFeatures(10**9, 1, 0)) is Strategy.SERIAL


def test_small_footprint_privatized():
    assert choose_strategy(WorkloadFeatures(8 * 10**3, 8, 4 * MiB)) is Strategy.PRIVATIZED


def test_large_footprint_atomic():
    assert choose_strategy(WorkloadFeatures(8 * 10**6, 8, 4 * MiB)) is Strategy.ATOMIC


def test_boundary_is_inclusive():
    assert choose_strategy(WorkloadFeatures(MiB, 4, 4 * MiB)) is Strategy.PRIVATIZED
    assert choose_strategy(WorkloadFeatures(MiB + 1, 4, 4 * MiB)) is Strategy.ATOMIC


def test_default_budget():
    assert DEFAULT_CACHE_BUDGET == 8 * MiB
    assert WorkloadFeatures(0, 2).cache_budget_bytes == 8 * MiB


@pytest.mark.parametrize("args", [(-1, 2, 0), (0, 0, 0), (0, 2, -5)])
def test_invariants(args):
    with pytest.raises(ValueError):
        WorkloadFeatures(*args)


def smvp_input(n, block):
    m, v = gen_block_sparse(n, 4, block, Rng(0))
    return SmvpInput(m, v, DenseMatrix.zeros(n, block))


def test_measure_features_arithmetic():
    f = measure_features(smvp_input(1000, 3), ExecConfig(8))
    assert f == WorkloadFeatures(24000, 8, 8 * MiB)


def test_measure_features_empty_matrix():
    from synpar.numerics import BlockSparseSym
    import numpy as np

    m = BlockSparseSym(0, 2, np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros((0, 2, 2)))
    inp = SmvpInput(m, DenseMatrix(np.zeros((0, 2))), DenseMatrix(np.zeros((0, 2))))
    f = measure_features(inp, ExecConfig(4), budget=0)
    assert f.reduction_slot_bytes == 0 and choose_strategy(f) is Strategy.PRIVATIZED


def test_zero_budget_means_atomic():
    f = measure_features(smvp_input(10, 1), ExecConfig(2), budget=0)
    assert choose_strategy(f) is Strategy.ATOMIC


sizes = st.integers(0, 10**9)
threads = st.integers(2, 256)


@given(sizes, sizes, threads, sizes)
def test_monotone_in_footprint(a, b, t, budget):
    lo, hi = sorted((a, b))
    small = choose_strategy(WorkloadFeatures(lo, t, budget))
    big = choose_strategy(WorkloadFeatures(hi, t, budget))
    assert not (small is Strategy.ATOMIC and big is Strategy.PRIVATIZED)


@given(sizes, threads, threads, sizes)
def test_monotone_in_threads(size, a, b, budget):
    lo, hi = sorted((a, b))
    more = choose_strategy(WorkloadFeatures(size, hi, budget))
    fewer = choose_strategy(WorkloadFeatures(size, lo, budget))
    assert not (more is Strategy.PRIVATIZED and fewer is Strategy.ATOMIC)


@given(sizes, st.integers(1, 256), sizes)
def test_never_locked(size, t, budget):
    assert choose_strategy(WorkloadFeatures(size, t, budget)) in (
        Strategy.SERIAL, Strategy.PRIVATIZED, Strategy.ATOMIC)
