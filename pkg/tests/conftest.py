import random
import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcox.algebra import cartan_matrix
from qcox.coxeter import coxeter_matrix_bound, coxeter_matrix_graph
from qcox.polyring import PolyMatrix
from qcox.quiverdsl import BoundQuiver
from qcox.randquiver import random_acyclic_quiver, random_bound_quiver

SUITE2_SEED = 20260808      # relation-free acyclic suite
SUITE4_SEED = 912           # bound suite with relations
SUITE2_SIZE = 200
SUITE4_SIZE = 100


@dataclass
class Case:
    """One randomized instance with its expensive derived data computed once."""

    bq: BoundQuiver
    cartan: PolyMatrix
    inverse: PolyMatrix
    phi: PolyMatrix         # reflection-product Coxeter matrix


@pytest.fixture(scope="session")
def suite2():
    """Relation-free acyclic quivers, 3-7 vertices, multiplicity <= 2."""
    rng = random.Random(SUITE2_SEED)
    cases = []
    for _ in range(SUITE2_SIZE):
        quiver = random_acyclic_quiver(rng)
        bq = BoundQuiver(quiver)
        c = cartan_matrix(bq)
        cases.append(Case(bq, c, c.inverse_unimodular(), coxeter_matrix_graph(quiver)))
    return cases


@pytest.fixture(scope="session")
def suite4():
    """Acyclic bound quivers carrying homogeneous relations of degree 2-3."""
    rng = random.Random(SUITE4_SEED)
    cases = []
    while len(cases) < SUITE4_SIZE:
        bq = random_bound_quiver(rng)
        if not bq.relations:
            continue
        c = cartan_matrix(bq)
        phi = coxeter_matrix_bound(bq, method="reflections", cartan=c)
        cases.append(Case(bq, c, c.inverse_unimodular(), phi))
    return cases
