import pytest

from tracegen import MonoidBundle, validate_independence


def make_bundle(letters, pairs):
    """Bundle from one-directional pairs (closure applied)."""
    return MonoidBundle(validate_independence(letters, pairs, symmetric_closure=True))


@pytest.fixture(scope="session")
def fig1():
    """Three letters, a and b commute, c blocks both."""
    return make_bundle(["a", "b", "c"], [("a", "b")])


@pytest.fixture(scope="session")
def free1():
    return make_bundle(["a"], [])


@pytest.fixture(scope="session")
def free2():
    return make_bundle(["a", "b"], [])


@pytest.fixture(scope="session")
def free3():
    return make_bundle(["a", "b", "c"], [])


@pytest.fixture(scope="session")
def path4():
    """Independence graph is the path a-b-c-d; dependence stays connected."""
    return make_bundle(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])


@pytest.fixture(scope="session")
def cycle5():
    """Independence graph is a 5-cycle; its complement is again a 5-cycle."""
    letters = ["a", "b", "c", "d", "e"]
    pairs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]
    return make_bundle(letters, pairs)


@pytest.fixture(scope="session")
def tri4():
    """A commuting triangle a,b,c plus a letter d depending on all of them."""
    return make_bundle(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "c")])


@pytest.fixture(scope="session")
def prod32():
    """Product of a free 3-letter and a free 2-letter monoid."""
    letters = ["a1", "a2", "a3", "b1", "b2"]
    pairs = [(a, b) for a in ("a1", "a2", "a3") for b in ("b1", "b2")]
    return make_bundle(letters, pairs)


@pytest.fixture(scope="session")
def prod22():
    letters = ["a1", "a2", "b1", "b2"]
    pairs = [(a, b) for a in ("a1", "a2") for b in ("b1", "b2")]
    return make_bundle(letters, pairs)


@pytest.fixture(scope="session")
def irreducible_five(fig1, free2, path4, cycle5, tri4):
    """The five irreducible monoids used by the chain-algebra criteria."""
    return [fig1, free2, path4, cycle5, tri4]


@pytest.fixture(scope="session")
def monoid_files(tmp_path_factory):
    """Monoid spec files for CLI runs: fig1 and the 3/2 product."""
    root = tmp_path_factory.mktemp("monoids")
    fig1_path = root / "fig1.json"
    fig1_path.write_text(
        '{"letters": ["a", "b", "c"], "independence": [["a", "b"], ["b", "a"]]}\n',
        encoding="utf-8",
    )
    prod_path = root / "prod32.json"
    prod_path.write_text(
        '{"letters": ["a1", "a2", "a3", "b1", "b2"],\n'
        ' "independence": [["a1", "b1"], ["a1", "b2"], ["a2", "b1"], ["a2", "b2"],\n'
        '                  ["a3", "b1"], ["a3", "b2"]],\n'
        ' "symmetric_closure": true}\n',
        encoding="utf-8",
    )
    return {"fig1": str(fig1_path), "prod32": str(prod_path)}
