import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import CATALOG_NAMES, PAIRS, catalog, kron_adjacency_set
from wreathschemes.errors import ResourceCapError
from wreathschemes.products import (
    class_one,
    direct_product,
    kernel_scheme,
    one_point,
    projection_morphism,
    wreath_factor,
    wreath_power,
    wreath_product,
    wreath_product_many,
)
from wreathschemes.scheme import Morphism, check_morphism, is_commutative, valencies, validate
from wreathschemes.spectral import primitive_idempotents_numeric

CAT = catalog()
names = st.sampled_from(CATALOG_NAMES)


def wreath_by_definition(x, y):
    nx, ny, rx = x.size, y.size, x.num_relations
    out = np.zeros((nx * ny, nx * ny), dtype=np.int64)
    for a in range(nx):
        for b in range(ny):
            for c in range(nx):
                for d in range(ny):
                    if a != c:
                        lab = x.relation[a, c]
                    elif b != d:
                        lab = rx - 1 + y.relation[b, d]
                    else:
                        lab = 0
                    out[a * ny + b, c * ny + d] = lab
    return out


def kernel_by_definition(n, v):
    words = [np.base_repr(w, v).zfill(n) for w in range(v ** n)]
    out = np.zeros((v ** n, v ** n), dtype=np.int64)
    for x, wx in enumerate(words):
        for y, wy in enumerate(words):
            diff = [i for i in range(n) if wx[i] != wy[i]]
            out[x, y] = diff[0] + 1 if diff else 0
    return out


@pytest.mark.parametrize("a,b", PAIRS)
def test_wreath_matches_definition(a, b):
    x, y = CAT[a], CAT[b]
    w = wreath_product(x, y)
    assert np.array_equal(w.relation, wreath_by_definition(x, y))
    assert w.num_relations == x.num_relations + y.num_relations - 1
    assert validate(w).ok


@pytest.mark.parametrize("a,b", PAIRS)
def test_wreath_adjacency_is_kronecker(a, b):
    x, y = CAT[a], CAT[b]
    w = wreath_product(x, y)
    got = {(w.relation == i).astype(np.int64).tobytes() for i in range(1, w.num_relations)}
    got.add(np.eye(w.size, dtype=np.int64).tobytes())
    assert got == kron_adjacency_set(x.relation, x.num_relations, y.relation, y.num_relations)


@pytest.mark.parametrize("a,b", PAIRS)
def test_direct_product(a, b):
    x, y = CAT[a], CAT[b]
    d = direct_product(x, y)
    assert validate(d).ok
    assert d.size == x.size * y.size
    assert d.num_relations == x.num_relations * y.num_relations
    kx, ky = valencies(x), valencies(y)
    assert valencies(d) == [i * j for i in kx for j in ky]
    for p in range(d.size):
        for q in range(d.size):
            i = x.relation[p // y.size, q // y.size]
            j = y.relation[p % y.size, q % y.size]
            assert d.relation[p, q] == i * y.num_relations + j


def test_direct_examples():
    h = class_one(2)
    d = direct_product(h, h)
    assert (d.size, d.num_relations, valencies(d)) == (4, 4, [1, 1, 1, 1])
    for s in CAT.values():
        assert direct_product(s, one_point()) == s
        assert wreath_product(s, one_point()) == s


@pytest.mark.parametrize("a,b", [(a, b) for a, b in PAIRS if a <= b])
def test_direct_product_idempotent_count(a, b):
    x, y = CAT[a], CAT[b]
    d = direct_product(x, y)
    assert len(primitive_idempotents_numeric(d)) == len(primitive_idempotents_numeric(x)) * len(
        primitive_idempotents_numeric(y))


def test_wreath_examples():
    h2, h3 = class_one(2), class_one(3)
    assert valencies(wreath_product(h2, h2)) == [1, 2, 1]
    w = wreath_product(h2, h3)
    assert w.size == 6 and valencies(w) == [1, 3, 2]


def test_wreath_power_examples():
    h = class_one(2)
    assert wreath_power(h, 1) == h
    assert wreath_power(h, 2) == wreath_product(h, h)
    p3 = wreath_power(h, 3)
    assert (p3.size, p3.num_relations, valencies(p3)) == (8, 4, [1, 4, 2, 1])


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("v", [2, 3])
def test_kernel_is_wreath_power(n, v):
    k = kernel_scheme(n, v)
    assert k == wreath_power(class_one(v), n)
    if v ** n <= 81:
        assert np.array_equal(k.relation, kernel_by_definition(n, v))


def test_kernel_examples():
    assert kernel_scheme(1, 4) == class_one(4)
    k = kernel_scheme(2, 2)
    assert k.relation[0b00, 0b01] == 2
    assert k.relation[0b00, 0b11] == 1


def test_projection_morphism():
    h = class_one(2)
    m = projection_morphism(h, h)
    assert m.sigma == (0, 1, 0)
    assert m.f == (0, 0, 1, 1)
    assert check_morphism(wreath_product(h, h), h, m)
    assert m.is_surjective(2) and set(m.sigma) == {0, 1}


@given(a=names, b=names)
def test_projection_morphism_valid(a, b):
    x, y = CAT[a], CAT[b]
    m = projection_morphism(x, y)
    assert check_morphism(wreath_product(x, y), x, m)
    assert m.is_surjective(x.size)


def test_projections_compose():
    h = class_one(2)
    p2, p3 = wreath_power(h, 2), wreath_power(h, 3)
    step32 = projection_morphism(p2, h)
    step21 = projection_morphism(h, h)
    composed = step21.compose(step32)
    direct = Morphism([x // 4 for x in range(8)], [0, 1, 0, 0])
    assert composed == direct
    assert check_morphism(p3, h, composed)


@given(a=names, b=names, c=names)
def test_associativity(a, b, c):
    x, y, z = CAT[a], CAT[b], CAT[c]
    assert wreath_product(wreath_product(x, y), z) == wreath_product(x, wreath_product(y, z))
    assert wreath_product_many([x, y, z]) == wreath_product(wreath_product(x, y), z)


@pytest.mark.parametrize("a,b", PAIRS)
def test_commutativity_transfer(a, b):
    x, y = CAT[a], CAT[b]
    assert is_commutative(wreath_product(x, y)) == (is_commutative(x) and is_commutative(y))


@given(a=names, b=names)
def test_valency_structure(a, b):
    x, y = CAT[a], CAT[b]
    k = valencies(wreath_product(x, y))
    kx, ky = valencies(x), valencies(y)
    rx = x.num_relations
    assert k[1:rx] == [v * y.size for v in kx[1:]]
    assert k[rx:] == ky[1:]


@given(st.lists(names, min_size=1, max_size=4))
def test_relation_count_of_iterated_product(seq):
    factors = [CAT[a] for a in seq]
    w = wreath_product_many(factors)
    assert w.num_relations == sum(f.num_relations - 1 for f in factors) + 1
    assert w.size == int(np.prod([f.size for f in factors]))


@pytest.mark.parametrize("a,b", PAIRS)
def test_wreath_factor_recovers_product(a, b):
    w = wreath_product(CAT[a], CAT[b])
    split = wreath_factor(w)
    assert split is not None
    assert wreath_product(*split) == w


@pytest.mark.parametrize("name", ["H12", "H13", "Z3", "Z4", "Z4c"])
def test_wreath_factor_rejects_non_products(name):
    assert wreath_factor(CAT[name]) is None


def test_resource_cap():
    with pytest.raises(ResourceCapError):
        kernel_scheme(13, 2)
    with pytest.raises(ResourceCapError):
        wreath_product(class_one(100), class_one(100))
    assert kernel_scheme(13, 2, cap=10_000).size == 8192
