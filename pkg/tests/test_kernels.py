from hypothesis import given, settings
from hypothesis import strategies as st

from gitgauge import kernels
from gitgauge.geometry import lattice_box


def test_fallback_finds_first_in_shell_order():
    # only lam with lam[0] > 0 and lam[1] > lam[0] work; (1, 2) is in shell 2
    rows = [[1, 0], [-1, 1]]
    assert kernels.first_positive_py(rows, 1) is None
    assert kernels.first_positive_py(rows, 2) == (1, 2)


def test_no_positive_direction():
    assert kernels.first_positive([[1], [-1]], 5) is None


def test_visiting_order_matches_lattice_box():
    rows = [[1, 1]]
    first = next(lam for lam in lattice_box(2, 3) if lam[0] + lam[1] > 0)
    assert kernels.first_positive(rows, 3) == first


def test_pure_python_switch(monkeypatch):
    monkeypatch.setenv("GITGAUGE_PURE_PYTHON", "1")
    assert not kernels.use_extension()
    assert kernels.first_positive([[2, -1]], 2) == kernels.first_positive_py([[2, -1]], 2)


def test_large_entries_fall_back():
    big = 2**61
    assert not kernels._fits_int64([[big, 1]], 4)
    expected = next(lam for lam in lattice_box(2, 1) if big * lam[0] - big * lam[1] > 0)
    assert kernels.first_positive([[big, -big]], 1) == expected == (0, -1)


def test_extension_is_built():
    # the editable install compiles the kernel; the fallback covers other setups
    assert kernels.HAVE_EXTENSION


rows_strategy = st.integers(1, 3).flatmap(
    lambda r: st.lists(st.lists(st.integers(-5, 5), min_size=r, max_size=r), min_size=1, max_size=5)
)


@settings(max_examples=150, deadline=None)
@given(rows_strategy, st.integers(1, 4))
def test_extension_agrees_with_fallback(rows, radius):
    assert kernels.first_positive(rows, radius) == kernels.first_positive_py(rows, radius)
