import itertools
import random

import pytest

from gerbecoh.coh import (CrossedPair0, apply_gerbe_coboundary, cohomologous1,
                          gerbe_pair_from_increasing, h0_crossed, h1_classify,
                          h1_gerbe_classify, identity_gerbe_coboundary,
                          make_cochain1, make_gerbe_pair,
                          normalized_gerbe_coboundary, verify_cocycle1,
                          verify_crossed_pair0, verify_gerbe_pair,
                          GerbeCoboundary)
from gerbecoh.cover import make_nerve, standard_nerve
from gerbecoh.errors import CapacityError, StructuralError
from gerbecoh.grp import (automorphisms, cyclic, direct_product,
                          inner_conjugation, symmetric)
from gerbecoh.xmod import inner_crossed_module
from oracles import conjugacy_class_count, homology_order

POINT = standard_nerve("simplex", 1)


def test_verify_cocycle1_examples():
    c3 = standard_nerve("circle", 3)
    z3 = cyclic(3)
    assert verify_cocycle1(make_cochain1(c3, z3, {t: 0 for t in c3.itup(2)}))
    # any values on the three (increasing) pairs: no triple face, vacuous
    for vals in itertools.product(range(3), repeat=3):
        c = make_cochain1(c3, z3, dict(zip(c3.itup(2), vals)))
        assert verify_cocycle1(c)
    sx3 = standard_nerve("simplex", 3)
    bad = make_cochain1(sx3, z3, {(0, 1): 1, (1, 2): 1, (0, 2): 1})
    assert not verify_cocycle1(bad)  # g_02 != g_01 g_12
    good = make_cochain1(sx3, z3, {(0, 1): 1, (1, 2): 1, (0, 2): 2})
    assert verify_cocycle1(good)


def test_make_cochain1_errors():
    c3 = standard_nerve("circle", 3)
    with pytest.raises(StructuralError):
        make_cochain1(c3, cyclic(2), {(0, 1): 0})
    with pytest.raises(StructuralError):
        make_cochain1(c3, cyclic(2), {t: 0 for t in c3.itup(2)} | {(0, 1): 7})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_h1_circle_abelian_matches_snf(n):
    c3 = standard_nerve("circle", 3)
    reps = h1_classify(c3, cyclic(n))
    assert len(reps) == n == homology_order(c3, 1, n)


def test_h1_circle_s3_is_conjugacy_classes():
    c3 = standard_nerve("circle", 3)
    s3 = symmetric(3)
    assert len(h1_classify(c3, s3)) == conjugacy_class_count(s3) == 3


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("g", [cyclic(2), cyclic(3), symmetric(3)])
def test_h1_simplex_trivial(m, g):
    assert len(h1_classify(standard_nerve("simplex", m), g)) == 1


def test_h1_worker_independence():
    c3 = standard_nerve("circle", 3)
    s3 = symmetric(3)
    base = [c.values for c in h1_classify(c3, s3, workers=1)]
    for w in (2, 8):
        assert [c.values for c in h1_classify(c3, s3, workers=w)] == base


def test_h1_relabeling_invariance():
    z4 = cyclic(4)
    a = make_nerve(3, [(0, 1), (1, 2), (0, 2)])
    b = make_nerve(3, [(2, 1), (1, 0), (2, 0)])  # same circle, relabeled
    assert len(h1_classify(a, z4)) == len(h1_classify(b, z4))


def test_h1_budget():
    with pytest.raises(CapacityError):
        h1_classify(standard_nerve("circle", 3), symmetric(3), budget=10)


def test_h1_classes_are_cocycles_and_distinct():
    c4 = standard_nerve("circle", 4)
    reps = h1_classify(c4, cyclic(3))
    for c in reps:
        assert verify_cocycle1(c)
    for c1, c2 in itertools.combinations(reps, 2):
        assert not cohomologous1(c1, c2)


def test_h0_crossed_point_examples():
    g, reps = h0_crossed(POINT, inner_crossed_module(cyclic(3)))
    assert g.order == 2
    g2, _ = h0_crossed(POINT, inner_crossed_module(symmetric(3)))
    assert g2.order == 1


def test_h0_identity_class_is_unit():
    group, reps = h0_crossed(POINT, inner_crossed_module(cyclic(3)))
    assert reps[0].g_values == () or all(v == 0 for v in reps[0].g_values)
    assert all(v == 0 for v in reps[0].pi_values)


def test_h0_quotient_law_matches_direct_formula():
    """Dual route: recompute the class group by hand on the circle nerve."""
    nerve = standard_nerve("circle", 3)
    cm = inner_crossed_module(cyclic(3))
    group, reps = h0_crossed(nerve, cm)
    from gerbecoh.grp import verify_group
    assert verify_group(group)
    g, pi, d = cm.g, cm.pi, cm.delta.map
    pairs = nerve.otuples(2)
    pos = {t: i for i, t in enumerate(pairs)}
    inc = nerve.itup(2)

    def full(assign):
        vals = [0] * len(pairs)
        for t, v in zip(inc, assign):
            vals[pos[t]] = v
            vals[pos[(t[1], t[0])]] = g.inv[v]
        return tuple(vals)

    cocycles = []
    for assign in itertools.product(g.elements(), repeat=len(inc)):
        vals = full(assign)
        for pis in itertools.product(pi.elements(), repeat=3):
            if all(pis[i] == pi.mul[d[vals[pos[(i, j)]]]][pis[j]]
                   for (i, j) in pairs):
                cocycles.append((vals, pis))
    # orbit partition under the coboundary action, recomputed directly
    def orbit_of(state):
        seen = {state}
        stack = [state]
        while stack:
            vals, pis = stack.pop()
            for cvec in itertools.product(g.elements(), repeat=3):
                nv = tuple(g.mul[g.mul[cvec[i]][vals[pos[(i, j)]]]][g.inv[cvec[j]]]
                           for (i, j) in pairs)
                np_ = tuple(pi.mul[d[cvec[i]]][pis[i]] for i in range(3))
                if (nv, np_) not in seen:
                    seen.add((nv, np_))
                    stack.append((nv, np_))
        return seen

    rep_states = [(r.g_values, r.pi_values) for r in reps]
    orbits = [orbit_of(s) for s in rep_states]
    assert sum(len(o) for o in orbits) == len(cocycles)

    def class_of(state):
        for i, o in enumerate(orbits):
            if state in o:
                return i
        raise AssertionError

    for a in range(group.order):
        for b in range(group.order):
            va, pa = rep_states[a]
            vb, pb = rep_states[b]
            prod_vals = tuple(g.mul[va[t]][cm.action(pa[pairs[t][0]], vb[t])]
                              for t in range(len(pairs)))
            prod_pis = tuple(pi.mul[pa[i]][pb[i]] for i in range(3))
            assert class_of((prod_vals, prod_pis)) == group.mul[a][b]


def test_verify_crossed_pair0():
    nerve = standard_nerve("circle", 3)
    cm = inner_crossed_module(cyclic(3))
    group, reps = h0_crossed(nerve, cm)
    for r in reps:
        assert verify_crossed_pair0(r)
    bad = CrossedPair0(nerve, cm, reps[0].g_values,
                       tuple((v + 1) % 2 for v in reps[0].pi_values))
    # flipping pi values on the point-connected circle breaks the law iff
    # the twist is inconsistent; recheck explicitly
    assert isinstance(verify_crossed_pair0(bad), bool)


# ---------------------------------------------------------------------------
# Gerbe cocycle pairs

def trivial_pair(nerve, group, aut=None):
    return gerbe_pair_from_increasing(
        nerve, group, {t: 0 for t in nerve.itup(2)},
        {t: 0 for t in nerve.itup(3)}, aut)


def test_verify_gerbe_pair_trivial():
    s2 = standard_nerve("sphere2")
    assert verify_gerbe_pair(trivial_pair(s2, symmetric(3)))


def test_gerbe_pair_abelian_identity_sector_matches_d2():
    """With abelian G and lam = id the pair condition is exactly d2 g = 0."""
    sx4 = standard_nerve("simplex", 4)
    z2 = cyclic(2)
    aut = automorphisms(z2)
    inc3 = sx4.itup(3)
    quads = sx4.itup(4)
    for vals in itertools.product(range(2), repeat=len(inc3)):
        g_inc = dict(zip(inc3, vals))
        pair = gerbe_pair_from_increasing(sx4, z2,
                                          {t: 0 for t in sx4.itup(2)}, g_inc, aut)
        expected = all(
            (g_inc[q[1:]] + g_inc[q[:2] + q[3:]]) % 2 ==
            (g_inc[q[:3]] + g_inc[q[:1] + q[2:]]) % 2
            for q in quads)
        assert verify_gerbe_pair(pair) == expected


def test_gerbe_pair_mutation_detected():
    s2 = standard_nerve("sphere2")
    z3 = cyclic(3)
    aut = automorphisms(z3)
    reps = h1_gerbe_classify(s2, z3, lambda_id_sector=True)
    pair = reps[1]
    lam_assign = {t: pair.lam_at(*t) for t in s2.otuples(2)}
    g_assign = {t: pair.g_at(*t) for t in s2.otuples(3)}
    t0 = s2.otuples(3)[0]
    g_assign[t0] = (g_assign[t0] + 1) % 3
    mutated = make_gerbe_pair(s2, z3, lam_assign, g_assign, aut)
    assert not verify_gerbe_pair(mutated)


def test_apply_gerbe_coboundary_identity():
    s2 = standard_nerve("sphere2")
    pair = trivial_pair(s2, symmetric(3))
    out = apply_gerbe_coboundary(pair, identity_gerbe_coboundary(s2))
    assert out.lam == pair.lam and out.g == pair.g


def test_coboundary_theta_only_on_trivial_pair():
    """On the trivial pair a theta-only coboundary gives lam' = i_theta."""
    sx3 = standard_nerve("simplex", 3)
    s3 = symmetric(3)
    pair = trivial_pair(sx3, s3)
    inner = inner_conjugation(s3).map
    theta_inc = {t: 3 for t in sx3.itup(2)}
    cb = normalized_gerbe_coboundary(pair, (0, 0, 0), theta_inc)
    out = apply_gerbe_coboundary(pair, cb)
    assert verify_gerbe_pair(out)
    for t in sx3.itup(2):
        assert out.lam_at(*t) == inner[3]


def test_coboundary_preserves_validity_randomized():
    random.seed(7)
    s2 = standard_nerve("sphere2")
    s3 = symmetric(3)
    pair = trivial_pair(s2, s3)
    aut_order = pair.aut.group.order
    for _ in range(200):
        r = tuple(random.randrange(aut_order) for _ in range(s2.index_count))
        theta = {t: random.randrange(6) for t in s2.itup(2)}
        cb = normalized_gerbe_coboundary(pair, r, theta)
        pair = apply_gerbe_coboundary(pair, cb)
        assert verify_gerbe_pair(pair)


def test_coboundary_composition_law():
    """Acting twice equals acting once by (r' r, theta' . r'(theta))."""
    nerve = standard_nerve("simplex", 3)
    for group in (cyclic(2), cyclic(3), cyclic(4)):
        aut = automorphisms(group)
        pair0 = trivial_pair(nerve, group, aut)
        pos2 = nerve.tuple_index(2)
        combos = list(itertools.product(range(aut.group.order),
                                        repeat=nerve.index_count))
        thetas = list(itertools.product(group.elements(), repeat=len(pos2)))
        if group.order > 2:
            random.seed(1)
            samples = [(random.choice(combos), random.choice(thetas),
                        random.choice(combos), random.choice(thetas))
                       for _ in range(60)]
        else:
            samples = [(r1, t1, r2, t2) for r1 in combos for t1 in thetas
                       for r2 in combos for t2 in thetas]
        amul = aut.group.mul
        for r1, t1, r2, t2 in samples:
            cb1 = GerbeCoboundary(r1, t1)
            cb2 = GerbeCoboundary(r2, t2)
            once = apply_gerbe_coboundary(apply_gerbe_coboundary(pair0, cb1), cb2)
            comp_r = tuple(amul[r2[i]][r1[i]] for i in range(nerve.index_count))
            comp_t = tuple(group.mul[t2[k]][aut.apply(r2[nerve.otuples(2)[k][0]], t1[k])]
                           for k in range(len(t1)))
            direct = apply_gerbe_coboundary(pair0, GerbeCoboundary(comp_r, comp_t))
            assert once.lam == direct.lam and once.g == direct.g


@pytest.mark.parametrize("n", [2, 3])
def test_gerbe_classify_sphere2_matches_h2(n):
    s2 = standard_nerve("sphere2")
    reps = h1_gerbe_classify(s2, cyclic(n), lambda_id_sector=True)
    assert len(reps) == n == homology_order(s2, 2, n)
    for p in reps:
        assert verify_gerbe_pair(p)


@pytest.mark.parametrize("g", [cyclic(2), cyclic(3), cyclic(4),
                               direct_product(cyclic(2), cyclic(2))])
def test_gerbe_classify_simplex_trivial(g):
    assert len(h1_gerbe_classify(standard_nerve("simplex", 3), g)) == 1


def test_gerbe_classify_contains_trivial_class():
    s2 = standard_nerve("sphere2")
    reps = h1_gerbe_classify(s2, cyclic(3), lambda_id_sector=True)
    assert reps[0].key() == trivial_pair(s2, cyclic(3)).key()


def test_gerbe_classify_generators_match_full_quotient():
    """Tiny instance: generator BFS agrees with brute-force full quotient."""
    nerve = standard_nerve("circle", 3)
    group = cyclic(2)
    aut = automorphisms(group)
    reps = h1_gerbe_classify(nerve, group)
    inc2, inc3 = nerve.itup(2), nerve.itup(3)
    keys = set()
    for gv in itertools.product(group.elements(), repeat=len(inc3) or 1):
        for lv in itertools.product(range(aut.group.order), repeat=len(inc2)):
            pair = gerbe_pair_from_increasing(nerve, group, dict(zip(inc2, lv)),
                                              dict(zip(inc3, gv)), aut)
            if verify_gerbe_pair(pair):
                keys.add(pair.key())
    # brute-force orbit partition over all normalized coboundaries
    def neighbors(key):
        pair = gerbe_pair_from_increasing(nerve, group, dict(zip(inc2, key[0])),
                                          dict(zip(inc3, key[1])), aut)
        out = []
        for r in itertools.product(range(aut.group.order), repeat=3):
            for th in itertools.product(group.elements(), repeat=len(inc2)):
                cb = normalized_gerbe_coboundary(pair, r, dict(zip(inc2, th)))
                out.append(apply_gerbe_coboundary(pair, cb).key())
        return out

    seen = set()
    classes = 0
    for key in sorted(keys):
        if key in seen:
            continue
        classes += 1
        stack = [key]
        seen.add(key)
        while stack:
            cur = stack.pop()
            for nxt in neighbors(cur):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    assert classes == len(reps)


def test_gerbe_budget():
    with pytest.raises(CapacityError):
        h1_gerbe_classify(standard_nerve("sphere2"), symmetric(3), budget=100)
