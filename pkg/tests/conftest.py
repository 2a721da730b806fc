import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from isofusion.algebra import build_algebra
from isofusion.orbitals import PermGroup, orbital_configuration, semidirect_group
from isofusion.schemes import RelationMatrix, algebra_from_relations

# Action matrix of the order-96 group (C4 x C4) x| C6 used throughout:
# chosen as the lexicographically least invertible matrix mod 4 of
# multiplicative order 6 whose coset scheme on the 48 cosets of <z^3>
# has rank 30 and reproduces the documented fusion/eigenvalue structure.
G96_MATRIX = [[0, 3], [1, 1]]

AS28_PATH = os.path.join(os.path.dirname(__file__), "..", "data", "as28no176.txt")


def c5_matrix() -> RelationMatrix:
    return RelationMatrix(tuple(tuple((y - x) % 5 for y in range(5)) for x in range(5)))


@pytest.fixture(scope="session")
def c2():
    return build_algebra(
        {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1},
        {0},
        star=[0, 1],
        validate=True,
    )


@pytest.fixture(scope="session")
def c5():
    return algebra_from_relations(c5_matrix())


@pytest.fixture(scope="session")
def c5_rel():
    return c5_matrix()


@pytest.fixture(scope="session")
def m3_rel():
    return orbital_configuration(PermGroup(3, ()))


@pytest.fixture(scope="session")
def m3(m3_rel):
    return algebra_from_relations(m3_rel)


@pytest.fixture(scope="session")
def g96():
    return semidirect_group(4, 6, G96_MATRIX)


@pytest.fixture(scope="session")
def g96_named(g96):
    x = ((1, 0), 0)
    y = ((0, 1), 0)
    z = ((0, 0), 1)
    return g96, x, y, z


@pytest.fixture(scope="session")
def g96_coset(g96_named):
    from isofusion.orbitals import coset_permutation_action

    group, x, y, z = g96_named
    subgroup = sorted(group.generated_set([group.power(z, 3)]))
    rel = orbital_configuration(coset_permutation_action(group, subgroup))
    return group, subgroup, rel, algebra_from_relations(rel)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance-criterion test")
