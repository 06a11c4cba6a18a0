import itertools
import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from optchain.complex import Chain, build_complex, unit_weights  # noqa: E402
from optchain.gadgets import random_sat  # noqa: E402
from optchain.solver import OptimalChain, solve_obcp  # noqa: E402

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

SWEEP_SEED = 2024
SWEEP_SIZE = 50


def make(tops):
    """Complex on labels 0..V-1 so that vertex ids and labels coincide."""
    X = build_complex(tops)
    assert X.vertex_labels == tuple(range(X.vertex_count))
    return X


def chain(X, terms):
    return Chain.from_simplices(X, list(terms))


def sat_sweep(seed=SWEEP_SEED, count=SWEEP_SIZE):
    """Seeded 1-in-3 SAT instances with 2 <= n <= 5 and 0 <= m <= 5."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 5)
        m = rng.randint(0, 5)
        out.append(random_sat(rng, n, m))
    return out


def rp2_line(X):
    """A triangle loop that bounds over Q but not over Z in RP2."""
    w = unit_weights(X, 2)
    for a, b, c in itertools.combinations(range(X.vertex_count), 3):
        if all(e in X for e in ((a, b), (b, c), (a, c))) and (a, b, c) not in X:
            z = chain(X, [((a, b), 1), ((b, c), 1), ((a, c), -1)])
            relax = solve_obcp(X, w, z, mode="lp")
            if isinstance(relax, OptimalChain) and not relax.integral:
                return z
    raise AssertionError("no projective line found")


@pytest.fixture(scope="session")
def sweep():
    return sat_sweep()
