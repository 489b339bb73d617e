from collections.abc import Callable

import pytest

from framecheck_core.fixtures.generator import FixtureSpec, generate_gable
from framecheck_core.scene_model import Box3, Member, Scene, make_member
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.span_table import SpanTable, fixture_span_table


def member(
    name: str,
    lo: tuple[float, float, float],
    hi: tuple[float, float, float],
    section: tuple[float, float] | None = None,
) -> Member:
    return make_member(name, Box3(lo, hi), section=section)


@pytest.fixture
def make() -> Callable[..., Member]:
    """Shorthand for building members inside tests: `make(name, lo, hi)`."""
    return member


@pytest.fixture(scope="session")
def table() -> SpanTable:
    return fixture_span_table()


@pytest.fixture(scope="session")
def params() -> ValidationParams:
    return ValidationParams()


@pytest.fixture(scope="session")
def gable() -> Scene:
    return generate_gable(FixtureSpec(width=6.0, depth=4.0))


@pytest.fixture(scope="session")
def two_story_gable() -> Scene:
    return generate_gable(FixtureSpec(width=6.0, depth=4.0, stories=2))


@pytest.fixture(scope="session")
def beam_gable() -> Scene:
    return generate_gable(FixtureSpec(width=7.0, depth=5.0, center_beam=True))
