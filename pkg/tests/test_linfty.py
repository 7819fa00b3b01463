import itertools
import math

import numpy as np
import pytest

from coiso.errors import ArgumentError
from coiso.foliation import Connection, FoliatedForm, d_F1, x_3, x_h, y_alpha_family
from coiso.linfty import (
    FormalSolution,
    OperatorFamily,
    antisymmetric_koszul_sign,
    check_coherence,
    compose_operators,
    compositions,
    koszul_sign,
    obstruction_rhs,
    permutation_sign,
    unshuffles,
)
from coiso.sampling import random_closed_one_form, random_form


class Vec:
    """Minimal graded element for toy algebras."""

    def __init__(self, degree, data):
        self.degree = degree
        self.data = np.asarray(data, dtype=float)

    def __add__(self, other):
        return Vec(self.degree, self.data + other.data)

    def __mul__(self, s):
        return Vec(self.degree, self.data * s)

    def norm(self):
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0


def test_koszul_examples():
    assert koszul_sign((0, 1, 2), (1, 1, 1)) == 1
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((1, 0), (0, 1)) == 1


def test_antisymmetric_examples():
    assert antisymmetric_koszul_sign((0, 1), (3, 5)) == 1
    assert antisymmetric_koszul_sign((1, 0), (0, 0)) == -1
    assert antisymmetric_koszul_sign((1, 0), (1, 1)) == 1


def test_length_mismatch_raises():
    with pytest.raises(ArgumentError):
        koszul_sign((0, 1), (1,))
    with pytest.raises(ArgumentError):
        koszul_sign((0, 0), (1, 1))


def _compose(p, q):
    """(p o q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def _transpositions(perm):
    """Adjacent transpositions whose product is ``perm`` (bubble sort record)."""
    arr, swaps = list(perm), []
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j)
    return swaps


def test_koszul_matches_transposition_count(rng):
    for _ in range(200):
        k = int(rng.integers(1, 7))
        perm = tuple(int(i) for i in rng.permutation(k))
        degrees = [int(d) for d in rng.integers(-2, 3, k)]
        # replay the sorting swaps: each odd-odd interchange flips the sign
        arr, sign = [degrees[p] for p in perm], 1
        order = list(perm)
        for j in _transpositions(perm):
            if arr[j] % 2 and arr[j + 1] % 2:
                sign = -sign
            arr[j], arr[j + 1] = arr[j + 1], arr[j]
            order[j], order[j + 1] = order[j + 1], order[j]
        assert order == sorted(order)
        assert koszul_sign(perm, degrees) == sign
        assert antisymmetric_koszul_sign(perm, degrees) == permutation_sign(perm) * sign


def test_koszul_multiplicative(rng):
    for _ in range(100):
        k = int(rng.integers(2, 7))
        s = tuple(int(i) for i in rng.permutation(k))
        t = tuple(int(i) for i in rng.permutation(k))
        deg = [int(d) for d in rng.integers(0, 3, k)]
        # permuting by s then by t
        deg_s = [deg[i] for i in s]
        assert koszul_sign(_compose(s, t), deg) == koszul_sign(s, deg) * koszul_sign(t, deg_s)


@pytest.mark.parametrize("j,km1,count", [(2, 1, 3), (1, 0, 1), (2, 2, 6)])
def test_unshuffle_examples(j, km1, count):
    assert len(unshuffles(j, km1)) == count


def test_unshuffle_counts_and_shape():
    for n in range(1, 9):
        for j in range(1, n + 1):
            perms = unshuffles(j, n - j)
            assert len(perms) == math.comb(n, j)
            for p in perms:
                assert list(p[:j]) == sorted(p[:j]) and list(p[j:]) == sorted(p[j:])
    assert unshuffles(1, 0) == [(0,)]


def _bilinear(a, b):
    # a degree-0 operator of arity 2 on R^2-valued toy elements
    return Vec(a.degree + b.degree, [a.data[0] * b.data[1], a.data[1] * b.data[0] + a.data[0]])


def _brute_compose(mu, k, nu, j, nu_degree, args):
    total = None
    n = j + k - 1
    for perm in itertools.permutations(range(n)):
        if list(perm[:j]) != sorted(perm[:j]) or list(perm[j:]) != sorted(perm[j:]):
            continue
        degrees = [a.degree for a in args]
        sign = (-1) ** (nu_degree % 2) * antisymmetric_koszul_sign(perm, degrees)
        term = mu(nu(*(args[i] for i in perm[:j])), *(args[i] for i in perm[j:])) * sign
        total = term if total is None else total + term
    return total


def test_compose_matches_bruteforce(rng):
    d = lambda v: Vec(v.degree + 1, [v.data[1], -2 * v.data[0]])
    for _ in range(20):
        args = [Vec(int(rng.integers(0, 3)), rng.normal(size=2)) for _ in range(3)]
        for mu, k, nu, j, nd in [(d, 1, d, 1, 1), (_bilinear, 2, d, 1, 1), (_bilinear, 2, _bilinear, 2, 0)]:
            n = j + k - 1
            got = compose_operators(mu, k, nu, j, nd)(*args[:n])
            want = _brute_compose(mu, k, nu, j, nd, args[:n])
            assert np.allclose(got.data, want.data)


def test_compose_examples():
    d = lambda v: Vec(v.degree + 1, v.data * 2)
    v = Vec(1, [1.0, 3.0])
    assert np.allclose(compose_operators(d, 1, d, 1, 1)(v).data, -(d(d(v)).data))
    a, b = Vec(1, [1.0, 0.0]), Vec(1, [0.0, 1.0])
    calls = []

    def mu(x, y):
        calls.append(1)
        return Vec(x.degree + y.degree, x.data + y.data)

    compose_operators(mu, 2, d, 1, 1)(a, b)
    assert len(calls) == 2
    calls.clear()
    compose_operators(mu, 2, lambda x, y: x + y, 2, 0)(a, b, Vec(1, [1.0, 1.0]))
    assert len(calls) == 3
    with pytest.raises(ArgumentError):
        compose_operators(mu, 2, d, 1, 1)(a)


def test_compositions():
    assert sorted(compositions(4, 2, 3)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(3, 3, 2)) == [(1, 1, 1)]


def test_coherence_on_foliated_family(golden, rng):
    fam = y_alpha_family(golden, Connection.flat(golden))
    probes1 = [(random_form(rng, d),) for d in (0, 1, 2) for _ in range(3)]
    assert check_coherence(fam, 2, probes1) <= 1e-12
    probes2 = [(random_form(rng, a), random_form(rng, b)) for a in (0, 1, 2) for b in (0, 1, 2)]
    assert check_coherence(fam, 3, probes2) <= 1e-9


def test_corrupted_family_is_detected(golden, rng):
    good = y_alpha_family(golden, Connection.flat(golden))

    def bad_d(form):
        if form.degree == 1:
            return FoliatedForm.two_form(x_h(form.g, golden) + x_3(form.f))
        return good.get(1)(form)

    bad = OperatorFamily({1: bad_d, 2: good.get(2)}, good.zero)
    probes = [(random_form(rng, 0),) for _ in range(3)]
    assert check_coherence(bad, 2, probes) > 0.1


def test_probe_arity_checked(golden, rng):
    fam = y_alpha_family(golden, Connection.flat(golden))
    with pytest.raises(ArgumentError):
        check_coherence(fam, 3, [(random_form(rng, 0),)])


def test_weak_family_rejected():
    with pytest.raises(ArgumentError):
        OperatorFamily({0: lambda: None})


def test_obstruction_rhs_rows(golden, rng):
    conn = Connection.cutoff(golden)
    fam = y_alpha_family(golden, conn)
    g1 = random_closed_one_form(rng, golden, pairs=2)
    g2 = random_form(rng, 1, pairs=2)
    g3 = random_form(rng, 1, pairs=1)
    l2, l3, l4 = fam.get(2), fam.get(3), fam.get(4)
    rhs2 = obstruction_rhs(fam, [g1], 2)
    assert (rhs2 - l2(g1, g1) * 0.5).norm() <= 1e-12 * max(1, rhs2.norm())
    rhs3 = obstruction_rhs(fam, [g1, g2], 3)
    want3 = (l2(g1, g2) + l2(g2, g1)) * 0.5 + l3(g1, g1, g1) * (1 / 6)
    assert (rhs3 - want3).norm() <= 1e-10 * max(1, want3.norm())
    rhs4 = obstruction_rhs(fam, [g1, g2, g3], 4)
    want4 = (l2(g1, g3) + l2(g3, g1) + l2(g2, g2)) * 0.5
    want4 = want4 + (l3(g1, g1, g2) + l3(g1, g2, g1) + l3(g2, g1, g1)) * (1 / 6)
    want4 = want4 + l4(g1, g1, g1, g1) * (1 / 24)
    assert (rhs4 - want4).norm() <= 1e-10 * max(1, want4.norm())
    assert l4(g1, g1, g1, g1).norm() > 0


def test_obstruction_rhs_flat_order3(golden, rng):
    fam = y_alpha_family(golden, Connection.flat(golden))
    g1, g2 = random_form(rng, 1), random_form(rng, 1)
    got = obstruction_rhs(fam, [g1, g2], 3)
    want = (fam.get(2)(g1, g2) + fam.get(2)(g2, g1)) * 0.5
    assert (got - want).norm() <= 1e-12 * max(1, want.norm())


def test_obstruction_rhs_errors_and_zero(golden):
    fam = y_alpha_family(golden, Connection.flat(golden))
    zero = FoliatedForm.zero(1)
    assert obstruction_rhs(fam, [zero], 2).norm() == 0
    with pytest.raises(ArgumentError):
        obstruction_rhs(fam, [zero], 1)
    with pytest.raises(ArgumentError):
        obstruction_rhs(fam, [], 3)


def test_formal_solution_indexing():
    s = FormalSolution(["a", "b"])
    assert s.order == 2 and s[1] == "a" and s[2] == "b"
