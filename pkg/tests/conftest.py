import numpy as np
import pytest

from wcqpen import PenaltyFamily, PenaltySpec, ProblemData


def random_problem(rng, n=None, p=None, scale=1.0):
    n = n if n is not None else int(rng.integers(5, 41))
    p = p if p is not None else int(rng.integers(2, 21))
    X = scale * rng.standard_normal((n, p))
    y = scale * rng.standard_normal(n)
    return ProblemData(X=X, y=y)


def random_partition(rng, p, max_size=4):
    perm = rng.permutation(p)
    groups, i = [], 0
    while i < p:
        k = int(rng.integers(1, max_size + 1))
        groups.append(perm[i : i + k])
        i += k
    return groups


def random_group_problem(rng, n=None, p=None, max_size=4):
    n = n if n is not None else int(rng.integers(8, 41))
    p = p if p is not None else int(rng.integers(4, 21))
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    return ProblemData(X=X, y=y, groups=random_partition(rng, p, max_size))


def enet(lam1, lam2):
    return PenaltySpec(PenaltyFamily.ELASTIC_NET, lam1, lam2)


def grp(lam1, lam2):
    return PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, lam1, lam2)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
