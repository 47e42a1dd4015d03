import os
import subprocess
import sys

import numpy as np
import pytest

from shiftbf import _core
from shiftbf._core import _purecore


def _fastcore_or_skip():
    if "compiled" not in _core.available_backends():
        pytest.skip("compiled backend not built")
    from shiftbf._core import _fastcore
    return _fastcore


class TestParity:
    def test_running_max_lines(self, rng):
        fast = _fastcore_or_skip()
        for _ in range(40):
            m = int(rng.integers(1, 8))
            n = int(rng.integers(1, 120))
            radius = int(rng.integers(0, 25))
            a = rng.uniform(-50, 50, (m, n))
            np.testing.assert_array_equal(fast.running_max_lines(a, radius),
                                          _purecore.running_max_lines(a, radius))

    def test_window_sum_lines(self, rng):
        fast = _fastcore_or_skip()
        for _ in range(40):
            m = int(rng.integers(1, 8))
            n = int(rng.integers(1, 120))
            radius = int(rng.integers(0, 25))
            a = rng.uniform(-50, 50, (m, n))
            np.testing.assert_allclose(fast.window_sum_lines(a, radius),
                                       _purecore.window_sum_lines(a, radius),
                                       rtol=1e-12, atol=1e-9)

    def test_counted_engine(self, rng):
        fast = _fastcore_or_skip()
        for _ in range(20):
            n = int(rng.integers(1, 90))
            radius = int(rng.integers(0, 15))
            seq = rng.uniform(-50, 50, n)
            out_f, count_f = fast.max_filter_1d_counted(seq, radius)
            out_p, count_p = _purecore.max_filter_1d_counted(seq, radius)
            np.testing.assert_array_equal(out_f, out_p)
            assert count_f == count_p


class TestSelection:
    def test_switch_and_restore(self):
        original = _core.backend_name()
        for name in _core.available_backends():
            previous = _core.use_backend(name)
            assert _core.backend_name() == name
            _core.use_backend(previous)
        assert _core.backend_name() == original

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            _core.use_backend("fortran")

    def test_env_var_forces_python(self):
        code = "import shiftbf; print(shiftbf.backend_name())"
        env = dict(os.environ, SHIFTBF_BACKEND="python")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"

    def test_env_var_invalid_name_fails(self):
        code = "import shiftbf"
        env = dict(os.environ, SHIFTBF_BACKEND="gpu")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.returncode != 0
        assert "SHIFTBF_BACKEND" in out.stderr


class TestFilterParityAcrossBackends:
    def test_shiftable_bf_matches(self, rng):
        _fastcore_or_skip()
        from shiftbf.bilateral import FilterParams, shiftable_bf
        from shiftbf.spatial import Box
        img = rng.uniform(0, 255, (24, 24))
        params = FilterParams(sigma_s=2, sigma_r=25, epsilon=0.01, spatial=Box(2))
        outputs = {}
        for name in _core.available_backends():
            previous = _core.use_backend(name)
            try:
                outputs[name] = shiftable_bf(img, params).image
            finally:
                _core.use_backend(previous)
        np.testing.assert_allclose(outputs["compiled"], outputs["python"],
                                   rtol=1e-12, atol=1e-10)
