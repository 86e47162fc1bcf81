import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import CATALOG_NAMES, brute_axioms, catalog
from wreathschemes.cayley import symmetric_group, thin_scheme
from wreathschemes.errors import SchemaError, StructureError
from wreathschemes.products import class_one, direct_product, kernel_scheme, wreath_product
from wreathschemes.scheme import (
    Morphism,
    Scheme,
    check_morphism,
    intersection_numbers,
    is_commutative,
    is_symmetric,
    parse,
    serialize,
    transpose_map,
    valencies,
    validate,
)

CAT = catalog()


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_validates(name):
    assert validate(CAT[name]).ok


@pytest.mark.parametrize("matrix,ok", [
    ([[0, 1], [1, 0]], True),
    ([[0, 1, 2], [2, 0, 1], [1, 2, 0]], True),
    ([[0, 1, 2], [1, 0, 1], [2, 1, 0]], False),
    # a tournament on 3 points: transposes pair up but valencies differ by row
    ([[0, 1, 1], [2, 0, 1], [2, 2, 0]], False),
])
def test_small_matrices(matrix, ok):
    report = validate(matrix)
    assert report.ok == ok
    if not ok:
        assert "(2)" in report.axioms


def test_kernel_validates():
    assert validate(kernel_scheme(2, 2).relation).ok


def test_collects_all_violations():
    report = validate(Scheme([[1, 1], [1, 0]], num_relations=3))
    assert {"(1)", "surjectivity"} <= set(report.axioms)
    assert len(report.violations) > 1


def test_structural_errors_are_distinct():
    with pytest.raises(StructureError):
        validate([[0, 1, 2], [1, 0]])
    with pytest.raises(StructureError):
        Scheme([[0, 1], [1, 0]], num_relations=1)
    with pytest.raises(StructureError):
        Scheme([[0, -1], [1, 0]])


@given(name=st.sampled_from(CATALOG_NAMES), data=st.data())
def test_single_cell_mutations_match_brute_force(name, data):
    R = CAT[name].relation.copy()
    n, r = R.shape[0], CAT[name].num_relations
    x = data.draw(st.integers(0, n - 1))
    y = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, r - 1).filter(lambda v: v != R[x, y]))
    R[x, y] = v
    report = validate(Scheme(R, r))
    assert not report.ok
    assert set(report.axioms) == brute_axioms(R, r)


@given(name=st.sampled_from(CATALOG_NAMES), seed=st.integers(0, 2**32 - 1))
def test_relabeling_points_keeps_validity(name, seed):
    s = CAT[name]
    perm = np.random.default_rng(seed).permutation(s.size)
    t = s.relabel_points(perm)
    assert validate(t).ok
    assert valencies(t) == valencies(s)
    assert np.array_equal(intersection_numbers(t).p, intersection_numbers(s).p)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_intersection_tensor_identities(name):
    s = CAT[name]
    p = intersection_numbers(s).p
    r = s.num_relations
    k = valencies(s)
    assert np.array_equal(p[0], np.eye(r, dtype=p.dtype))
    assert np.array_equal(p[:, 0, :], np.eye(r, dtype=p.dtype))
    assert np.array_equal(p.sum(axis=1), np.tile(np.array(k)[:, None], (1, r)))
    assert k[0] == 1 and sum(k) == s.size


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_intersection_numbers_brute(name):
    s = CAT[name]
    R, n = s.relation, s.size
    p = intersection_numbers(s).p
    for x in range(n):
        for z in range(n):
            for i in range(s.num_relations):
                for j in range(s.num_relations):
                    count = sum(1 for y in range(n) if R[x, y] == i and R[y, z] == j)
                    assert p[i, j, R[x, z]] == count


def test_intersection_examples():
    p = intersection_numbers(class_one(2)).p
    assert p[1, 1, 0] == 1 and p[1, 1, 1] == 0
    assert intersection_numbers(class_one(3)).p[1, 1, 1] == 1
    pz = intersection_numbers(CAT["Z3"]).p
    assert pz[1, 1, 2] == 1 and pz[1, 1, 0] == 0


@pytest.mark.parametrize("s,expected", [
    (class_one(5), [1, 4]),
    (kernel_scheme(2, 2), [1, 2, 1]),
    (direct_product(class_one(2), class_one(2)), [1, 1, 1, 1]),
])
def test_valencies(s, expected):
    assert valencies(s) == expected


def test_commutative_and_symmetric():
    assert is_commutative(class_one(4)) and is_symmetric(class_one(4))
    assert is_commutative(CAT["Z3"]) and not is_symmetric(CAT["Z3"])
    assert transpose_map(CAT["Z3"]) == [0, 2, 1]
    assert not is_commutative(thin_scheme(symmetric_group(3)))


def test_morphism_examples():
    h = class_one(2)
    assert check_morphism(h, h, Morphism([0, 1], [0, 1]))
    assert check_morphism(h, h, Morphism([1, 0], [0, 1]))
    assert not check_morphism(h, h, Morphism([1, 0], [0, 0]))
    w = wreath_product(h, h)
    assert check_morphism(w, h, Morphism([0, 0, 1, 1], [0, 1, 0]))
    with pytest.raises(ValueError):
        check_morphism(h, h, Morphism([0, 1, 1], [0, 1]))


@given(name=st.sampled_from(CATALOG_NAMES), data=st.data())
def test_surjective_point_map_gives_surjective_sigma(name, data):
    # quotient maps onto one-point and class-one targets, plus projections
    s = CAT[name]
    target = CAT["H12"]
    w = wreath_product(target, s)
    f = [p // s.size for p in range(w.size)]
    sigma = [0, 1] + [0] * (s.num_relations - 1)
    m = Morphism(f, sigma)
    assert check_morphism(w, target, m)
    assert m.is_surjective(target.size)
    assert set(m.sigma) == set(range(target.num_relations))


def test_serialize_canonical():
    assert serialize(class_one(2)) == '{"size":2,"num_relations":2,"relation":[[0,1],[1,0]]}'


@given(name=st.sampled_from(CATALOG_NAMES + ["k32"]))
def test_round_trip(name):
    s = kernel_scheme(3, 2) if name == "k32" else CAT[name]
    assert parse(serialize(s)) == s
    labelled = s.with_labels([f"R{i}" for i in range(s.num_relations)])
    assert parse(serialize(labelled)) == labelled


@pytest.mark.parametrize("doc,field", [
    ({"size": 2, "num_relations": 2, "relation": [[0, 2], [1, 0]]}, "relation"),
    ({"size": 2, "num_relations": 2}, "relation"),
    ({"size": 2, "num_relations": 2, "relation": [[0, 1], [1, 0]], "extra": 1}, "extra"),
    ({"size": 3, "num_relations": 2, "relation": [[0, 1], [1, 0]]}, "relation"),
    ({"size": 2, "num_relations": 2, "relation": [[0, 1], [1, 0]], "labels": ["a"]}, "labels"),
])
def test_schema_errors(doc, field):
    with pytest.raises(SchemaError) as exc:
        parse(json.dumps(doc))
    assert exc.value.field is not None and exc.value.field.startswith(field)


def test_schema_error_line():
    with pytest.raises(SchemaError) as exc:
        parse('{\n"size": 2,\n"num_relations": 2,\n"relation": [[0,1],[1,0]\n}')
    assert exc.value.line is not None


def test_strict_identity():
    doc = {"size": 2, "num_relations": 2, "relation": [[1, 0], [0, 1]]}
    with pytest.raises(SchemaError):
        parse(doc)
    s = parse(doc, strict_identity=False)
    assert not validate(s).ok
