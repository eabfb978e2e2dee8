import numpy as np
import pytest

from spreadrank import algebra, equivalence, gf
from spreadrank.errors import NotInvertible


def random_invertible(rng, q, n):
    while True:
        M = rng.integers(0, q, (n, n)).astype(np.uint8)
        if gf.mat_det(M, q) != 0:
            return M


def random_space_with_identity(rng, q, n, extra):
    mats = [np.eye(n, dtype=np.uint8)]
    mats += [rng.integers(0, q, (n, n)).astype(np.uint8) for _ in range(extra)]
    return algebra.MatSpace.from_matrices(q, n, mats)


def random_isotopism(rng, q, n):
    return equivalence.Isotopism(
        random_invertible(rng, q, n), random_invertible(rng, q, n), q
    )


# ---------------------------------------------------------------------------
# Action
# ---------------------------------------------------------------------------


def test_act_identity():
    space = algebra.field_construct(2, 4).space
    ident = np.eye(4, dtype=np.uint8)
    assert equivalence.act(equivalence.Isotopism(ident, ident, 2), space) == space


def test_act_preserves_nonsingularity_and_inverts():
    rng = np.random.default_rng(0)
    space = algebra.field_construct(2, 4).space
    for _ in range(10):
        g = random_isotopism(rng, 2, 4)
        moved = equivalence.act(g, space)
        assert algebra.is_nonsingular(moved)
        assert equivalence.act(g.inverse(), moved) == space


def test_isotopism_rejects_singular():
    with pytest.raises(NotInvertible):
        equivalence.Isotopism(
            np.zeros((2, 2), dtype=np.uint8), np.eye(2, dtype=np.uint8), 2
        )


# ---------------------------------------------------------------------------
# Equivalence testing
# ---------------------------------------------------------------------------


def test_are_equivalent_round_trip():
    rng = np.random.default_rng(1)
    for q in (2, 3):
        for trial in range(5):
            space = random_space_with_identity(rng, q, 4, 3)
            g = random_isotopism(rng, q, 4)
            moved = equivalence.act(g, space)
            witness = equivalence.are_equivalent(space, moved)
            assert witness is not None
            assert equivalence.act(witness, space) == moved


def test_atlas_spread_sets_inequivalent():
    from spreadrank import atlas

    f16 = atlas.atlas_get("F16").space()
    s1 = atlas.atlas_get("S1").space()
    s2 = atlas.atlas_get("S2").space()
    assert equivalence.are_equivalent(f16, s1) is None
    assert equivalence.are_equivalent(f16, s2) is None
    assert equivalence.are_equivalent(s1, s2) is None


def test_f81_vs_gtf81_inequivalent():
    from spreadrank import atlas

    f81 = atlas.atlas_get("F81").space()
    gtf = atlas.atlas_get("GTF81").space()
    assert equivalence.are_equivalent(f81, gtf) is None


def test_fingerprint_invariance():
    rng = np.random.default_rng(2)
    trials = 0
    for _ in range(200):
        q = int(rng.choice([2, 3]))
        space = random_space_with_identity(rng, q, 4, int(rng.integers(2, 4)))
        g = random_isotopism(rng, q, 4)
        moved = equivalence.act(g, space)
        fp1 = equivalence.space_data(space).fingerprint
        fp2 = equivalence.space_data(moved).fingerprint
        assert fp1 == fp2
        trials += 1
    assert trials == 200


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def test_equivalence_classes_merges_and_separates():
    rng = np.random.default_rng(3)
    s = random_space_with_identity(rng, 2, 4, 2)
    g = random_isotopism(rng, 2, 4)
    other = random_space_with_identity(rng, 2, 4, 3)
    while equivalence.are_equivalent(s, other) is not None:
        other = random_space_with_identity(rng, 2, 4, 3)
    reps = equivalence.equivalence_classes([s, equivalence.act(g, s), other])
    assert len(reps) == 2


def test_equivalence_classes_deterministic_under_permutation():
    rng = np.random.default_rng(4)
    spaces = []
    for _ in range(6):
        s = random_space_with_identity(rng, 2, 4, 2)
        g = random_isotopism(rng, 2, 4)
        spaces += [s, equivalence.act(g, s)]
    reps1 = equivalence.equivalence_classes(spaces)
    shuffled = list(spaces)
    rng.shuffle(shuffled)
    reps2 = equivalence.equivalence_classes(shuffled)
    assert [r.key for r in reps1] == [r.key for r in reps2]


def test_equivalence_classes_worker_invariance():
    rng = np.random.default_rng(5)
    spaces = []
    for _ in range(5):
        s = random_space_with_identity(rng, 2, 4, 2)
        g = random_isotopism(rng, 2, 4)
        spaces += [s, equivalence.act(g, s)]
    reps1 = equivalence.equivalence_classes(spaces, workers=1)
    reps2 = equivalence.equivalence_classes(spaces, workers=2)
    assert [r.key for r in reps1] == [r.key for r in reps2]


def test_equivalence_classes_under_subgroup():
    # orbits under an explicit subgroup, not the full group
    f4 = algebra.field_construct(2, 2, (1, 1, 1))
    aut = equivalence.automorphism_group(f4.space)
    pts = [m for m in algebra.rank_one_elements(2, 2)]
    spaces = [f4.space.extend(p) for p in pts]
    reps = equivalence.equivalence_classes(spaces, group=aut)
    # all rank-one extensions of the F4 spread set are equivalent under Aut
    assert len(reps) == 1


# ---------------------------------------------------------------------------
# Stabilizers
# ---------------------------------------------------------------------------


def test_automorphism_group_f4_order_18():
    f4 = algebra.field_construct(2, 2, (1, 1, 1))
    aut = equivalence.automorphism_group(f4.space)
    assert aut.order == 18
    # brute-force agreement over all 36 pairs in GL2(2)^2
    brute = equivalence._brute_force_stabilizer(f4.space)
    assert brute.order == 18
    keys = {a.tobytes() + b.tobytes() for a, b in zip(aut.A, aut.B)}
    keys_b = {a.tobytes() + b.tobytes() for a, b in zip(brute.A, brute.B)}
    assert keys == keys_b


def test_automorphism_group_elements_fix_space():
    f4 = algebra.field_construct(2, 2, (1, 1, 1))
    aut = equivalence.automorphism_group(f4.space)
    for iso in aut.isotopisms():
        assert equivalence.act(iso, f4.space) == f4.space


def test_automorphism_group_f8_order():
    f8 = algebra.field_construct(2, 3)
    aut = equivalence.automorphism_group(f8.space)
    # n (q^n - 1)^2 = 3 * 49^2 / 7^0 ... the field group is {(a x^{2^i}, b x^{2^{3-i}})}
    assert aut.order == 3 * 49
    orbits = equivalence.rank_one_orbits(aut, 2, 3)
    assert [size for _, size in orbits] == [49]


def test_automorphism_group_f16_order_900():
    f16 = algebra.field_construct(2, 4)
    aut = equivalence.automorphism_group(f16.space)
    assert aut.order == 900
    assert aut.order % (2**4 - 1) ** 2 == 0 or aut.order >= (2**4 - 1) ** 2


def test_rank_one_orbits_transitive_for_field():
    f16 = algebra.field_construct(2, 4)
    aut = equivalence.automorphism_group(f16.space)
    orbits = equivalence.rank_one_orbits(aut, 2, 4)
    assert [size for _, size in orbits] == [225]


def test_rank_one_orbits_trivial_group():
    trivial = equivalence.StabilizerGroup.trivial(2, 2)
    orbits = equivalence.rank_one_orbits(trivial, 2, 2)
    assert len(orbits) == 9
    assert all(size == 1 for _, size in orbits)


def test_stabilizer_of_space_subgroup():
    f16 = algebra.field_construct(2, 4)
    aut = equivalence.automorphism_group(f16.space)
    pts = algebra.rank_one_elements(2, 4)
    sub = f16.space.extend(pts[0])
    stab = aut.stabilizer_of_space(sub)
    assert 1 <= stab.order < aut.order
    assert aut.order % stab.order == 0
    for iso in stab.isotopisms():
        assert equivalence.act(iso, sub) == sub
        assert equivalence.act(iso, f16.space) == f16.space


def test_order_divides_gl_squared():
    f4 = algebra.field_construct(2, 2, (1, 1, 1))
    aut = equivalence.automorphism_group(f4.space)
    gl2 = 6
    assert (gl2 * gl2) % aut.order == 0
