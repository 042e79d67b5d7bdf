from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from coulomb_hs.liedata import (
    ChamberViolationError,
    Conventions,
    DEFAULT_CONVENTIONS,
    HALF_PAIR_WEIGHT,
    MixedFamilyEdgeError,
    casimir_degrees,
    dominant_charges,
    dressing_degrees,
    matter_weight_values,
    positive_root_count,
    positive_root_values,
    residual_stabilizer,
    validate_charge,
    weyl_orbit,
)
from coulomb_hs.quiver import Family, GaugeGroup, SO, U, USp


SMALL_GROUPS = [U(1), U(2), U(3), USp(2), USp(4), USp(6),
                SO(2), SO(3), SO(4), SO(5), SO(6), SO(7)]


# ---------------------------------------------------------------------------
# explicit root lists: the independent oracle used for Weyl checks


def explicit_positive_roots(g):
    """Positive roots as coefficient vectors on the charge entries."""
    r = g.rank
    roots = []

    def vec(**kv):
        v = [0] * r
        for i, c in kv.items():
            v[int(i)] += c
        return tuple(v)

    for i in range(r):
        for j in range(i + 1, r):
            e = [0] * r
            e[i], e[j] = 1, -1
            roots.append(tuple(e))
            if g.family is not Family.UNITARY:
                e = [0] * r
                e[i], e[j] = 1, 1
                roots.append(tuple(e))
    if g.family is Family.SYMPLECTIC:
        for i in range(r):
            e = [0] * r
            e[i] = 2
            roots.append(tuple(e))
    elif g.family is Family.ORTHOGONAL and g.n % 2:
        for i in range(r):
            e = [0] * r
            e[i] = 1
            roots.append(tuple(e))
    return roots


def eval_root_sum(roots, m):
    return sum(abs(sum(c * x for c, x in zip(root, m))) for root in roots)


# ---------------------------------------------------------------------------
# chambers


def test_validate_charge():
    validate_charge(U(3), (2, 0, -1))
    with pytest.raises(ChamberViolationError):
        validate_charge(U(3), (0, 1, 0))
    validate_charge(USp(4), (3, 0))
    with pytest.raises(ChamberViolationError):
        validate_charge(USp(4), (1, -1))
    validate_charge(SO(6), (2, 1, -1))
    with pytest.raises(ChamberViolationError):
        validate_charge(SO(6), (2, 1, -2))
    validate_charge(SO(2), (-5,))
    with pytest.raises(ChamberViolationError):
        validate_charge(SO(2), (-5,), Conventions(so2_as_o2=True))
    with pytest.raises(ChamberViolationError):
        validate_charge(U(2), (1,))


# ---------------------------------------------------------------------------
# roots


def test_positive_root_values_examples():
    assert positive_root_values(U(2), (1, 0)) == [1]
    assert positive_root_values(USp(2), (1,)) == [2]
    assert sorted(positive_root_values(SO(4), (1, 1))) == [0, 2]
    assert positive_root_values(SO(2), (7,)) == []
    assert positive_root_values(U(1), (3,)) == []


def test_positive_root_counts():
    for g in SMALL_GROUPS:
        m = tuple(range(3 * g.rank, 0, -3))  # generic dominant charge
        assert len(positive_root_values(g, m)) == positive_root_count(g)
        r = g.rank
        if g.family is Family.UNITARY:
            assert positive_root_count(g) == r * (r - 1) // 2
        elif g.family is Family.SYMPLECTIC or g.n % 2:
            assert positive_root_count(g) == r * r
        else:
            assert positive_root_count(g) == r * (r - 1)


def test_weyl_invariance_brute_force():
    charges = {
        1: [(0,), (1,), (3,)],
        2: [(0, 0), (1, 0), (2, 1), (2, -1), (3, 3)],
        3: [(0, 0, 0), (1, 0, 0), (2, 1, 1), (3, 2, -1), (2, 2, 2)],
    }
    for g in SMALL_GROUPS:
        roots = explicit_positive_roots(g)
        for m in charges[g.rank]:
            try:
                validate_charge(g, m)
            except ChamberViolationError:
                continue
            reference = sum(positive_root_values(g, m))
            orbit = weyl_orbit(g, m)
            assert all(eval_root_sum(roots, w) == reference for w in orbit)


# ---------------------------------------------------------------------------
# matter weights


def aggregate(pairs):
    out = {}
    for v, w in pairs:
        out[v] = out.get(v, Fraction(0)) + w
    return {v: w for v, w in out.items() if w}


def test_matter_weight_unitary_examples():
    # U(1) with d flavors, m = 1: value 1 with total weight d
    for d in (1, 2, 4):
        pairs = matter_weight_values(U(1), (1,), U(d), (0,) * d)
        assert aggregate(pairs) == {1: Fraction(d)}
    pairs = matter_weight_values(U(2), (1, 0), U(1), (0,))
    assert sorted(v for v, _ in pairs) == [0, 1]


def test_matter_weight_ortho_examples():
    pairs = matter_weight_values(SO(2), (1,), USp(2), (0,), HALF_PAIR_WEIGHT)
    assert pairs == [(1, Fraction(1, 2)), (1, Fraction(1, 2))]
    pairs = matter_weight_values(SO(2), (1,), USp(2), (0,))
    assert aggregate(pairs) == {1: Fraction(2)}
    with pytest.raises(MixedFamilyEdgeError):
        matter_weight_values(U(2), (0, 0), SO(3), (0,))


def full_weight_set_sum(so_group, so, sp_group, sp):
    """Oracle: |b(m)| summed over every weight of vector x fundamental."""
    so_weights = []
    for i in range(so_group.rank):
        so_weights.extend([(i, 1), (i, -1)])
    if so_group.n % 2:
        so_weights.append(None)  # zero weight of the odd vector
    total = 0
    for sw in so_weights:
        for j in range(sp_group.rank):
            for sgn in (1, -1):
                val = sgn * sp[j] + (0 if sw is None else sw[1] * so[sw[0]])
                total += abs(val)
    return total


def test_matter_weight_against_full_enumeration():
    cases = [
        (SO(2), (1,), USp(2), (0,)),
        (SO(2), (2,), USp(4), (1, 0)),
        (SO(4), (1, 1), USp(2), (1,)),
        (SO(4), (2, -1), USp(4), (2, 1)),
        (SO(5), (2, 1), USp(2), (3,)),
        (SO(3), (1,), USp(4), (2, 0)),
        (SO(6), (2, 1, -1), USp(2), (1,)),
    ]
    for so_g, so, sp_g, sp in cases:
        full = full_weight_set_sum(so_g, so, sp_g, sp)
        got = sum(v * w for v, w in matter_weight_values(so_g, so, sp_g, sp))
        assert got == Fraction(full, 2)  # default weight: half the doubled set
        got_half = sum(v * w for v, w in
                       matter_weight_values(so_g, so, sp_g, sp, HALF_PAIR_WEIGHT))
        assert got_half == Fraction(full, 4)
        # orientation symmetry
        flipped = sum(v * w for v, w in matter_weight_values(sp_g, sp, so_g, so))
        assert flipped == got


def test_matter_weight_weyl_invariance():
    so_g, sp_g = SO(4), USp(4)
    so, sp = (2, 1), (1, 1)
    base = sum(v * w for v, w in matter_weight_values(so_g, so, sp_g, sp))
    for wso in weyl_orbit(so_g, so):
        for wsp in weyl_orbit(sp_g, sp):
            total = Fraction(0)
            for x in wso:
                for y in wsp:
                    total += abs(x + y) + abs(x - y)
            assert total == base


# ---------------------------------------------------------------------------
# stabilizers and Casimir degrees


def test_residual_stabilizer_examples():
    assert residual_stabilizer(U(3), (2, 2, 0)) == [U(2), U(1)]
    assert sorted(map(repr, residual_stabilizer(USp(4), (1, 0)))) == \
        ["U(1)", "USp(2)"]
    for g in SMALL_GROUPS:
        assert residual_stabilizer(g, (0,) * g.rank) == [g]


def test_residual_stabilizer_rank_preserved():
    for g in SMALL_GROUPS:
        for m in dominant_charges(g, 2):
            pieces = residual_stabilizer(g, m)
            assert sum(p.rank for p in pieces) == g.rank
            degrees = []
            for p in pieces:
                degrees.extend(casimir_degrees(p))
            assert len(degrees) == g.rank


def test_residual_stabilizer_so_even_signs():
    assert residual_stabilizer(SO(4), (1, -1)) == [U(2)]
    assert residual_stabilizer(SO(4), (1, 1)) == [U(2)]
    assert sorted(map(repr, residual_stabilizer(SO(6), (1, 0, 0)))) == \
        ["SO(4)", "U(1)"]


def test_casimir_degrees_examples():
    assert casimir_degrees(U(3)) == (1, 2, 3)
    assert casimir_degrees(SO(4)) == (2, 2)
    assert casimir_degrees(SO(2)) == (1,)
    assert casimir_degrees(SO(3)) == (2,)
    assert casimir_degrees(USp(2)) == (2,)
    assert casimir_degrees(USp(6)) == (2, 4, 6)
    assert casimir_degrees(SO(6)) == (2, 3, 4)
    assert casimir_degrees(SO(7)) == (2, 4, 6)


def count_partitions_with_parts_at_most(total, k):
    if total == 0:
        return 1
    if k == 0:
        return 0
    return count_partitions_with_parts_at_most(total, k - 1) + \
        count_partitions_with_parts_at_most(total - k, k) if total >= k else \
        count_partitions_with_parts_at_most(total, k - 1)


def test_casimir_degrees_unitary_against_partition_count():
    # The invariant ring of u(N) is freely generated in degrees 1..N, so its
    # Hilbert series counts partitions with parts of size at most N.
    for N in (1, 2, 3, 4):
        degrees = casimir_degrees(U(N))
        for order in range(0, 7):
            coeff = [0] * (order + 1)
            coeff[0] = 1
            for d in degrees:
                for e in range(d, order + 1):
                    coeff[e] += coeff[e - d]
            assert coeff[order] == count_partitions_with_parts_at_most(order, N)


def test_casimir_degree_identities():
    # sum(d_i) = #positive roots + rank and prod(d_i) = |Weyl group|,
    # with the Weyl order measured as the orbit size of a regular charge.
    for g in SMALL_GROUPS:
        degrees = casimir_degrees(g)
        assert sum(degrees) == positive_root_count(g) + g.rank
        generic = tuple(range(3 * g.rank, 0, -3))
        prod = 1
        for d in degrees:
            prod *= d
        assert prod == len(weyl_orbit(g, generic))


def test_dressing_degrees_o2_flag():
    o2 = Conventions(so2_as_o2=True)
    assert dressing_degrees(SO(2), (0,), o2) == [2]
    assert dressing_degrees(SO(2), (3,), o2) == [1]
    assert dressing_degrees(SO(2), (0,)) == [1]
    assert dressing_degrees(USp(4), (1, 0)) in ([2, 1], [1, 2])


# ---------------------------------------------------------------------------
# dominant charge enumeration


def test_dominant_charges_examples():
    assert sorted(dominant_charges(U(1), 1)) == [(-1,), (0,), (1,)]
    assert dominant_charges(U(2), 1) == \
        [(1, 1), (1, 0), (1, -1), (0, 0), (0, -1), (-1, -1)]
    assert sorted(dominant_charges(USp(2), 2)) == [(0,), (1,), (2,)]


def test_dominant_charges_so_even():
    got = dominant_charges(SO(4), 1)
    assert set(got) == {(0, 0), (1, 0), (1, 1), (1, -1)}
    assert len(set(got)) == len(got)


def test_dominant_charges_nesting_and_uniqueness():
    for g in SMALL_GROUPS:
        for b in (0, 1, 2):
            a = dominant_charges(g, b)
            c = dominant_charges(g, b + 1)
            assert set(a) <= set(c)
            assert len(set(a)) == len(a)
            for m in a:
                validate_charge(g, m)


def test_dominant_charges_cover_weyl_orbits():
    # every integer tuple in the box is Weyl-equivalent to a unique
    # enumerated representative
    from itertools import product as iproduct

    for g in (U(2), USp(2), SO(3), SO(4), SO(2)):
        reps = dominant_charges(g, 1)
        covered = set()
        for m in reps:
            orbit = weyl_orbit(g, m)
            assert not (covered & orbit)
            covered |= orbit
        assert covered == set(iproduct((-1, 0, 1), repeat=g.rank))
