import pytest

from raysearch import DomainError, ErrorKind, ErrorModel, bounds, validate


def test_validate_percentual_boundary():
    validate(ErrorModel(ErrorKind.PERCENTUAL, 0.99))
    with pytest.raises(DomainError, match="delta < 1"):
        validate(ErrorModel(ErrorKind.PERCENTUAL, 1.0))


def test_multiplicative_has_no_upper_limit():
    validate(ErrorModel(ErrorKind.MULTIPLICATIVE, 3.0))


@pytest.mark.parametrize("kind", list(ErrorKind))
def test_negative_delta_rejected(kind):
    with pytest.raises(DomainError, match=">= 0"):
        validate(ErrorModel(kind, -0.1))


@pytest.mark.parametrize("model, f, expected", [
    (ErrorModel.percentual(0.25), 4, (3, 5)),
    (ErrorModel.percentual(0.0), 7, (7, 7)),
    (ErrorModel.multiplicative(1.0), 4, (2, 8)),
])
def test_bounds_examples(model, f, expected):
    b = bounds(model, f)
    assert (b.lo, b.hi) == expected


def test_bounds_rejects_nonpositive_nominal():
    with pytest.raises(DomainError):
        bounds(ErrorModel.percentual(0.1), 0.0)


def test_parse_round_trip():
    m = ErrorModel.parse("Multiplicative", "0.2")
    assert m.kind is ErrorKind.MULTIPLICATIVE and m.delta == 0.2
    assert m.to_fields() == {"model": "multiplicative", "delta": 0.2}
    with pytest.raises(DomainError):
        ErrorModel.parse("additive", 0.1)
