"""Backend equivalence and semantics of the label kernels."""

import subprocess
import sys

import numpy as np
import pytest

from scenagg import _labelops_py

try:
    from scenagg import _labelops
    IMPLS = [_labelops_py, _labelops]
except ImportError:  # extension not built
    _labelops = None
    IMPLS = [_labelops_py]

impl_param = pytest.mark.parametrize(
    "impl", IMPLS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])


def reference_pareto(values):
    """Quadratic reference: drop a row iff some other row is componentwise
    <= and (strictly smaller somewhere or has a lower index)."""
    m = values.shape[0]
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if np.all(values[j] <= values[i]):
                if np.any(values[j] < values[i]) or j < i:
                    keep[i] = False
                    break
    return keep


@impl_param
class TestParetoKeep:
    def test_basic_dominance(self, impl):
        vals = np.array([[1.0, 2.0], [2.0, 3.0], [0.5, 5.0]])
        assert impl.pareto_keep(vals).tolist() == [True, False, True]

    def test_equal_rows_keep_first(self, impl):
        vals = np.array([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]])
        assert impl.pareto_keep(vals).tolist() == [True, False, False]

    def test_incomparable_all_kept(self, impl):
        vals = np.array([[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]])
        assert impl.pareto_keep(vals).all()

    def test_empty(self, impl):
        assert impl.pareto_keep(np.empty((0, 4))).shape == (0,)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_reference(self, impl, seed):
        rng = np.random.default_rng(seed)
        m, k = int(rng.integers(1, 60)), int(rng.integers(1, 6))
        # quantize to force ties and duplicates
        vals = np.ascontiguousarray(
            np.round(rng.random((m, k)) * 4) / 4)
        assert np.array_equal(impl.pareto_keep(vals), reference_pareto(vals))


def reference_pairing_cost(dist):
    """Enumerate every pairing (one singleton allowed when odd)."""
    m = dist.shape[0]

    def rec(items):
        if not items:
            return 0.0
        i0 = items[0]
        best = np.inf
        if len(items) % 2 == 1:
            best = rec(items[1:])
        for j in items[1:]:
            rest = [t for t in items[1:] if t != j]
            best = min(best, dist[i0, j] + rec(rest))
        return best

    return rec(list(range(m)))


@impl_param
class TestMinPairing:
    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7])
    def test_cost_matches_enumeration(self, impl, m, seed):
        rng = np.random.default_rng(100 * m + seed)
        pts = rng.random((m, 3))
        diff = pts[:, None] - pts[None, :]
        dist = np.ascontiguousarray(np.sqrt((diff**2).sum(-1)))
        partner = impl.min_pairing(dist)
        # valid pairing with at most one singleton
        singles = [i for i in range(m) if partner[i] == i]
        assert len(singles) == m % 2
        for i in range(m):
            assert partner[partner[i]] == i
        cost = sum(dist[i, partner[i]] for i in range(m)
                   if partner[i] > i)
        assert cost == pytest.approx(reference_pairing_cost(dist), abs=1e-12)

    def test_two_points(self, impl):
        dist = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert impl.min_pairing(dist).tolist() == [1, 0]

    def test_size_cap(self, impl):
        with pytest.raises(ValueError):
            impl.min_pairing(np.zeros((impl.PAIRING_MAX + 1,
                                       impl.PAIRING_MAX + 1)))


@pytest.mark.skipif(_labelops is None, reason="extension not built")
class TestBackendAgreement:
    @pytest.mark.parametrize("seed", range(5))
    def test_pareto_identical(self, seed):
        rng = np.random.default_rng(seed)
        vals = np.ascontiguousarray(
            np.round(rng.random((200, 8)) * 8) / 8)
        assert np.array_equal(_labelops.pareto_keep(vals),
                              _labelops_py.pareto_keep(vals))

    @pytest.mark.parametrize("m", [5, 8, 11])
    def test_pairing_identical(self, m):
        rng = np.random.default_rng(m)
        pts = rng.random((m, 4))
        diff = pts[:, None] - pts[None, :]
        dist = np.ascontiguousarray(np.sqrt((diff**2).sum(-1)))
        assert np.array_equal(_labelops.min_pairing(dist),
                              _labelops_py.min_pairing(dist))

    def test_solver_value_matches_under_forced_fallback(self):
        import os
        code = (
            "import scenagg as sa\n"
            "assert sa.KERNEL_BACKEND == 'python', sa.KERNEL_BACKEND\n"
            "inst = sa.gen_layered(4, 3, 6, seed=11)\n"
            "print(repr(sa.exact_minmax(inst).value))\n"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "SCENAGG_PURE_PYTHON": "1"},
            capture_output=True, text=True, check=True)
        import scenagg as sa
        inst = sa.gen_layered(4, 3, 6, seed=11)
        assert float(out.stdout.strip()) == sa.exact_minmax(inst).value
