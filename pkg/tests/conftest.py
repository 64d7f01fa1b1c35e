import pytest

from afterimage.render import BlurSettings, Geometry


class ManualClock:
    """Deterministic time source for driving trial phases in tests."""

    def __init__(self, start: float = 1_000.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


@pytest.fixture
def clock() -> ManualClock:
    return ManualClock()


@pytest.fixture
def small_geometry() -> Geometry:
    # Small enough to keep rendering fast, big enough for a clean plateau.
    return Geometry(width=96, height=96, circle_radius=20)


@pytest.fixture
def fast_blur() -> BlurSettings:
    return BlurSettings(sigma=2.0)
