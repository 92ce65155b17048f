"""Point-set fixtures shipped with the package."""

from __future__ import annotations

from importlib import resources

SIZE26 = "size26_q11.txt"
TRIANGLE_ORDERS = (3, 4, 5, 7, 11)


def triangle_name(q: int) -> str:
    if q not in TRIANGLE_ORDERS:
        raise KeyError(f"no vertexless triangle fixture for q={q}")
    return f"triangle_q{q}.txt"


def fixture_names() -> list[str]:
    return [SIZE26] + [triangle_name(q) for q in TRIANGLE_ORDERS]


def fixture_text(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


def fixture_path(name: str):
    """A path-like to the fixture (valid while the package is installed)."""
    return resources.files(__name__).joinpath(name)
