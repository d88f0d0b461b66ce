import math

import pytest

from raysearch import (
    LEFT,
    RIGHT,
    DomainError,
    ErrorKind,
    ErrorModel,
    RangeError,
    StrategySpec,
    delta_max,
    is_monotone_under_error,
    optimal_alpha,
)


def test_nominal_examples():
    assert StrategySpec.doubling().nominal(3) == 8
    assert StrategySpec.mray(2).nominal(3) == 8
    s = StrategySpec.optimal_line(ErrorModel.percentual(1 / 3))
    assert s.nominal(2) == pytest.approx(16, rel=1e-15)


def test_parity_convention():
    s = StrategySpec.doubling()
    assert [s.direction(i) for i in (1, 2, 3, 4)] == [LEFT, RIGHT, LEFT, RIGHT]
    assert [s.mirror().direction(i) for i in (1, 2)] == [RIGHT, LEFT]


def test_tabulated_range_error():
    s = StrategySpec.tabulated([1, 2, 3])
    assert s.nominal(3) == 3
    with pytest.raises(RangeError):
        s.nominal(4)
    with pytest.raises(RangeError):
        s.nominal(0)


def test_overflow_is_reported():
    with pytest.raises(OverflowError, match="2.0\\^1100"):
        StrategySpec.doubling().nominal(1100)


@pytest.mark.parametrize("bad", [
    lambda: StrategySpec.geometric(1.0),
    lambda: StrategySpec.mray(1),
    lambda: StrategySpec.tabulated([]),
    lambda: StrategySpec.tabulated([1, -2]),
])
def test_invalid_specs(bad):
    with pytest.raises(DomainError):
        bad()


def test_parse(tmp_path):
    model = ErrorModel.percentual(0.2)
    assert StrategySpec.parse("doubling") == StrategySpec.doubling()
    assert StrategySpec.parse("geometric:3").alpha == 3
    assert StrategySpec.parse("mray:4").m == 4
    assert StrategySpec.parse("optimal", model).ratio == pytest.approx(3)
    p = tmp_path / "s.txt"
    p.write_text("1\n2.5\n7\n")
    assert StrategySpec.parse(f"file:{p}").values == (1, 2.5, 7)
    with pytest.raises(DomainError):
        StrategySpec.parse("optimal")
    with pytest.raises(DomainError):
        StrategySpec.parse("spiral")


def test_optimal_alpha():
    assert optimal_alpha(ErrorModel.percentual(0)) == 2
    assert optimal_alpha(ErrorModel.percentual(1 / 3)) == pytest.approx(4, rel=1e-15)
    assert optimal_alpha(ErrorModel.multiplicative(0.1)) == pytest.approx(2.42, rel=1e-15)


def test_monotone_under_error_examples():
    s = StrategySpec.mray(2)
    assert is_monotone_under_error(s, 2, ErrorModel.percentual(0.5), 50)
    assert not is_monotone_under_error(s, 2, ErrorModel.percentual(0.7), 50)


def test_monotone_at_zero_error_is_plain_monotonicity():
    s = StrategySpec.tabulated([1, 2, 3, 2.5, 4, 5])
    plain = all(s.nominal(k) > s.nominal(k - 2) for k in range(3, 7))
    assert is_monotone_under_error(s, 2, ErrorModel.percentual(0), 6) == plain
    s2 = StrategySpec.tabulated([1, 2, 3, 1.5, 4, 5])
    assert not is_monotone_under_error(s2, 2, ErrorModel.percentual(0), 6)


def test_monotone_threshold_matches_delta_max():
    for m in (2, 3, 5):
        s = StrategySpec.mray(m)
        dm = delta_max(m)
        assert is_monotone_under_error(s, m, ErrorModel.percentual(dm - 1e-6), 40)
        assert not is_monotone_under_error(s, m, ErrorModel.percentual(dm + 1e-6), 40)
        dmm = delta_max(m, ErrorKind.MULTIPLICATIVE)
        assert is_monotone_under_error(s, m, ErrorModel.multiplicative(dmm - 1e-6), 40)
        assert not is_monotone_under_error(s, m, ErrorModel.multiplicative(dmm + 1e-6), 40)


def test_delta_max_values():
    assert delta_max(2) == pytest.approx(0.6, rel=1e-15)
    assert delta_max(3) == pytest.approx(2.375 / 4.375, rel=1e-15)
    limit = (math.e - 1) / (math.e + 1)
    vals = [delta_max(m) for m in range(2, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > limit for v in vals)
    assert delta_max(10 ** 6) == pytest.approx(0.46212, abs=1e-5)
    assert delta_max(2, "multiplicative") == pytest.approx(1.0)


def test_optimal_alpha_grows_with_error():
    vals = [optimal_alpha(ErrorModel.percentual(d)) for d in (0.01, 0.5, 0.9, 0.999)]
    assert all(v > 2 for v in vals)
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 3000
