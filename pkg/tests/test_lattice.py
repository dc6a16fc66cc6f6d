import itertools

import pytest

from dworkseries.lattice import (ConeData, GateFailure, PointConfiguration, cone_facets,
                                 dot, dwork_family, enumerate_M, hexagon,
                                 interior_lattice_points, lift_and_span, rank,
                                 relation_lattice_basis, unique_interior_gate)

SEGMENT2 = PointConfiguration(((1,), (0,), (2,)))
UNIT = PointConfiguration(((0,), (0,), (1,)))


def test_span_dimensions():
    assert lift_and_span(dwork_family(2)).dim == 2
    assert lift_and_span(hexagon()).dim == 3
    assert lift_and_span(PointConfiguration(((0,), (0,)))).dim == 1


def test_lifts_generate_lattice():
    for cfg in (dwork_family(2), dwork_family(3), hexagon()):
        span = lift_and_span(cfg)
        assert all(span.in_lattice(v) for v in cfg.lifts)
        assert span.dim == rank(cfg.lifts)


def test_dwork_sublattice_is_proper():
    span = lift_and_span(dwork_family(3))
    # a_1 - a_2 = 3 (e_1 - e_2), so e_1 - e_2 is in the span but not in ZA
    assert span.in_span((0, 1, -1, 0))
    assert not span.in_lattice((0, 1, -1, 0))
    assert span.in_lattice((0, 3, -3, 0))


def test_facets():
    f = cone_facets(dwork_family(2))
    assert len(f.cone_normals) == 2
    for h in f.cone_normals:
        tight = [v for v in dwork_family(2).lifts if dot(h, v) == 0]
        assert tight in ([(1, 2, 0)], [(1, 0, 2)])
    f = cone_facets(SEGMENT2)
    tights = sorted(tuple(v for v in SEGMENT2.lifts if dot(h, v) == 0) for h in f.cone_normals)
    assert tights == [((1, 0),), ((1, 2),)]
    assert len(cone_facets(PointConfiguration(((0,), (0,)))).cone_normals) == 0


def test_facet_irredundant_hexagon():
    cfg = hexagon()
    f = cone_facets(cfg)
    assert len(f.cone_normals) == 6
    assert list(f.cone_normals) == sorted(f.cone_normals)
    for h in f.cone_normals:
        assert all(dot(h, v) >= 0 for v in cfg.lifts)
        assert rank([v for v in cfg.lifts if dot(h, v) == 0]) == 2


def test_gate():
    assert unique_interior_gate(dwork_family(2)) == (1, 1)
    assert unique_interior_gate(dwork_family(3)) == (1, 1, 1)
    assert unique_interior_gate(hexagon()) == (0, 0)
    with pytest.raises(GateFailure) as exc:
        unique_interior_gate(UNIT)
    assert exc.value.interior_points == []


def test_gate_reports_extra_points():
    big = PointConfiguration(((1,), (0,), (3,)))
    with pytest.raises(GateFailure) as exc:
        unique_interior_gate(big)
    assert exc.value.interior_points == [(1,), (2,)]


def test_enumerate_M_examples():
    cfg = dwork_family(2)
    assert [c.mu for c in enumerate_M(cfg, weight_bound=1, interior_only=True)] == [(1, 1, 1)]
    got = [c.mu for c in enumerate_M(cfg, weight_bound=2, interior_only=True)]
    assert got == [(1, 1, 1), (2, 1, 3), (2, 2, 2), (2, 3, 1)]
    zero = enumerate_M(hexagon(), weight_bound=0)
    assert [c.mu for c in zero] == [(0, 0, 0)] and not zero[0].interior


def test_enumerate_M_order_and_strictness():
    for cfg in (dwork_family(2), hexagon()):
        f = cone_facets(cfg)
        pts = enumerate_M(cfg, weight_bound=3)
        assert [(c.weight, c.mu) for c in pts] == sorted((c.weight, c.mu) for c in pts)
        for c in pts:
            pair = [dot(h, c.mu) for h in f.cone_normals]
            assert all(x >= 0 for x in pair)
            assert c.interior == all(x >= 1 for x in pair)


def _brute_M(cfg, bound):
    # nonnegative integer combinations of the lifts; M is saturated here, so compare
    # against the cone + lattice description only where both are defined
    out = set()
    for nu in itertools.product(range(bound + 1), repeat=cfg.N + 1):
        if sum(nu) <= bound:
            out.add(tuple(sum(k * a[i] for k, a in zip(nu, cfg.lifts)) for i in range(cfg.n + 1)))
    return out


@pytest.mark.parametrize("cfg", [dwork_family(2), hexagon()], ids=["dwork2", "hexagon"])
def test_M_closed_and_absorbing(cfg):
    bound = 4
    pts = enumerate_M(cfg, weight_bound=bound)
    allp = {c.mu for c in pts}
    inter = {c.mu for c in pts if c.interior}
    assert _brute_M(cfg, bound) <= allp
    for a in allp:
        for b in allp:
            if a[0] + b[0] <= bound:
                s = tuple(x + y for x, y in zip(a, b))
                assert s in allp
                if b in inter:
                    assert s in inter


def test_relation_lattice():
    assert relation_lattice_basis(dwork_family(2)) == [(-2, 1, 1)]
    assert relation_lattice_basis(dwork_family(3)) == [(-3, 1, 1, 1)]
    indep = PointConfiguration(((0, 0), (1, 0), (0, 1)))
    assert relation_lattice_basis(indep) == []
    basis = relation_lattice_basis(hexagon())
    assert len(basis) == 4
    for l in basis:
        assert sum(l) == 0
        for i in range(3):
            assert sum(k * a[i] for k, a in zip(l, hexagon().lifts)) == 0
    assert rank(basis) == 4


def test_configuration_validation():
    with pytest.raises(ValueError):
        PointConfiguration(((0, 0), (1, 0), (1, 0)))
    with pytest.raises(ValueError):
        PointConfiguration(((0, 0), (1,)))
    with pytest.raises(ValueError):
        PointConfiguration(((0,),))


def test_cone_data_classify():
    cd = ConeData(dwork_family(2))
    assert cd.in_M_interior((1, 1, 1))
    assert cd.in_M((1, 2, 0)) and not cd.in_M_interior((1, 2, 0))
    assert not cd.in_M((1, 1, 0))
    assert cd.classify((0, 0, 0)).interior is False


def test_interior_points_relative():
    # a segment inside Z^2: relative interior, not topological
    assert interior_lattice_points(dwork_family(2)) == [(1, 1)]
    assert interior_lattice_points(SEGMENT2) == [(1,)]
