import pytest

from roothk.root_data import RootSystemSpec, build_root_datum
from roothk.weyl import generate_group


@pytest.fixture(scope="session")
def groups():
    """Session-wide cache of exhaustively generated Weyl groups.

    The large enumerations (E7 in particular) are expensive; every test that
    needs an exhaustive group shares one copy.
    """
    cache = {}

    def get(family: str, rank: int):
        key = (family, rank)
        if key not in cache:
            datum = build_root_datum(RootSystemSpec(family, rank))
            cache[key] = generate_group(datum)
        return cache[key]

    return get
