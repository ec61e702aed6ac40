"""The compiled kernels and the NumPy fallbacks must agree exactly."""

import numpy as np
import pytest
import scipy.sparse as sp

import regioner._core as core
from regioner._core import pure

compiled = pytest.importorskip(
    "regioner._core._speedups", reason="compiled kernels not built"
)


def _jacobi_system(rng, n=80):
    from regioner.graph import Kernel, PointCloud, build_graph
    from regioner.resistance import RegionPair
    from regioner.voltage import VoltageProblem, _assemble, _check_interior_connected

    cloud = PointCloud(rng.random((n, 2)))
    graph = build_graph(cloud, Kernel.radial(0.35), "none")
    problem = VoltageProblem(graph, RegionPair([0, 1, 2], [n - 2, n - 1]))
    interior = _check_interior_connected(problem)
    w_cc, w_cs, deg = _assemble(problem, interior)
    inv = 1.0 / deg
    mat = sp.csr_matrix(
        (w_cc.data * np.repeat(inv, np.diff(w_cc.indptr)), w_cc.indices, w_cc.indptr),
        shape=w_cc.shape,
    )
    return (
        np.asarray(mat.indptr, np.int64),
        np.asarray(mat.indices, np.int64),
        mat.data,
        w_cs * inv,
        np.zeros(interior.size),
    )


class TestGreedyCoverParity:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_identical_indices(self, rng, dim):
        pts = rng.random((2500, dim))
        alpha = 0.08
        assert np.array_equal(
            pure.greedy_cover(pts, alpha), compiled.greedy_cover(pts, alpha)
        )

    def test_dispatcher_uses_some_backend(self, rng):
        pts = rng.random((500, 2))
        out = core.greedy_cover(pts, 0.1)
        assert np.array_equal(out, pure.greedy_cover(pts, 0.1))


class TestJacobiParity:
    def test_identical_trajectory(self, rng):
        args = _jacobi_system(rng)
        va, ia, ra, ha = pure.jacobi_iterate(*args, 1e-11, 50000, True)
        vb, ib, rb, hb = compiled.jacobi_iterate(*args, 1e-11, 50000, True)
        assert ia == ib
        assert ra == rb
        assert ha == hb
        assert np.array_equal(va, vb)

    def test_cap_behaviour_matches(self, rng):
        args = _jacobi_system(rng)
        va, ia, ra, _ = pure.jacobi_iterate(*args, 1e-15, 7, False)
        vb, ib, rb, _ = compiled.jacobi_iterate(*args, 1e-15, 7, False)
        assert ia == ib == 7
        assert ra == rb
        assert np.array_equal(va, vb)


class TestEnvironmentOverride:
    def test_pure_python_env_var(self):
        import os
        import subprocess
        import sys

        code = (
            "import regioner; print(regioner.backend_name())"
        )
        env = dict(os.environ, REGIONER_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "pure-python"
