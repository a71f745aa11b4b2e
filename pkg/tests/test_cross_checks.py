"""Cross-module consistency: witnesses produced by one module are validated
against independent recomputation in another."""

import itertools
import random

from gbsep.css import AscendingHNN, css_decide, invariant_chain
from gbsep.exact import IntMatrix, Lattice
from gbsep.quotient import (
    NormalFormElement,
    k_subgroup,
    separate_cyclic,
    separate_in_A,
    twisted_power_sum,
)

from conftest import C1, C3, C5


def test_eigen_witnesses_predict_oracle_failure():
    # <lambda a> is never separable from a: the oracle must return None
    cases = [C1, IntMatrix([[2]]), IntMatrix([[3, 0], [1, 2]])]
    for phi in cases:
        h = AscendingHNN.of(phi)
        v = css_decide(h)
        assert not v.css
        w = v.eigen_witness
        assert w is not None
        chain = invariant_chain(h)
        g1 = tuple(w.lam * x for x in w.vector)
        assert separate_in_A(phi, chain, g1, w.vector, 30) is None


def test_nonseparable_witnesses_predict_oracle_failure():
    rng = random.Random(51)
    checked = 0
    for _ in range(30):
        n = rng.randint(2, 3)
        while True:
            phi = IntMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            if phi.det() != 0:
                break
        h = AscendingHNN.of(phi)
        v = css_decide(h)
        if v.css:
            continue
        checked += 1
        chain = invariant_chain(h)
        for w in v.nonseparable_witnesses[:1]:
            assert separate_in_A(phi, chain, w.subgroup_generator, w.vector, 25) is None
    assert checked > 5


def _brute_k_subgroup(phi, base: Lattice, box: int, power_cap: int = 12):
    """Independent oracle: eventual preimage membership by direct iteration."""
    n = phi.n
    members = []
    for v in itertools.product(range(-box, box + 1), repeat=n):
        w = v
        for _ in range(power_cap):
            if base.contains(w):
                members.append(v)
                break
            w = phi.apply(w)
    return members


def test_k_subgroup_against_brute_force():
    cases = [
        (C3, 2, 1, 0),
        (C3, 2, 2, 0),
        (C5, 2, 1, 0),
        (C5, 2, 1, 1),
        (C5, 5, 1, 1),
        (IntMatrix([[2, 1], [0, 3]]), 2, 1, 0),
        (IntMatrix([[2, 1], [0, 3]]), 3, 1, 0),
    ]
    for phi, p, m, i in cases:
        chain = invariant_chain(AscendingHNN.of(phi))
        if i >= chain.length:
            continue
        lat = k_subgroup(phi, chain, p, m, i)
        base = chain.lattice(i).add(Lattice.scaled(phi.n, p ** m))
        for v in _brute_k_subgroup(phi, base, 3):
            assert lat.contains(v), (phi.rows, p, m, i, v)
        # and conversely on the lattice basis
        for b in lat.basis:
            w = b
            for _ in range(64):
                if base.contains(w):
                    break
                w = phi.apply(w)
            else:
                raise AssertionError("basis vector never lands in the base lattice")


def test_hyperbolic_separation_frozen_case():
    # x1 = (1,0) t, x2 = t^2: exponents match (1 | 2), the twisted-sum
    # construction kicks in with the first odd scale missing the defect
    phi = C3
    x1 = NormalFormElement(0, (1, 0), 1)
    x2 = NormalFormElement(0, (0, 0), 2)
    assert twisted_power_sum(phi, (1, 0), 1, 2) == (2, 2)
    spec = separate_cyclic(phi, x1, x2, 50)
    assert spec is not None
    assert spec.lattice == Lattice.scaled(2, 3)
    assert spec.separates(x1, x2)


def test_chain_quotient_orders_consistent_with_factors():
    # the induced matrix on each chain step solves the step factor exactly
    rng = random.Random(52)
    for _ in range(40):
        n = rng.randint(2, 3)
        while True:
            phi = IntMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
            if phi.det() != 0:
                break
        chain = invariant_chain(AscendingHNN.of(phi))
        for step in chain.steps:
            z = step.factor.at_matrix(step.induced)
            assert z == IntMatrix.zeros(step.induced.n, step.induced.n)
