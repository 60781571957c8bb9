"""Derived tensor product of f.g. abelian groups and Biext groups.

A (+)^L B is computed projectively: pick a free presentation
0 -> Z^m -> Z^n -> A -> 0 and tensor with B, giving the 2-term complex
[B^m -> B^n] whose H^0 is A (x) B and whose H^-1 is Tor_1(A, B).

Biext(A, B; C) is the groupoid of butterflies  A (+)^L B -> C[1]; such a
butterfly is exactly an extension of K^0 by C plus a lift of the
differential through the extension.  pi1 is Hom(A (x) B, C).  pi0 is
computed from a cocycle model: pairs (c, v) with c an Ext-cocycle for the
extension and v the lift data, subject to v*R1 + c*D' = 0, modulo the
simultaneous coboundaries (g*R0, -g*D).  This resolves the two-step
filtration
    0 -> coker(Hom(K^0,C) -> Hom(K^-1,C)) -> pi0
      -> ker(Ext^1(K^0,C) -> Ext^1(K^-1,C)) -> 0
explicitly, and is validated against exhaustive butterfly enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import IntMatrix, hstack, vstack, kron, solve_matrix
from .fgab import (
    FgAbGroup, FgAbMap, kernel, cokernel, hom_group, power_group,
    free_presentation, ext1_realize, hom_solve_all,
)
from .twocomplex import TwoTermComplex, homology, shift1
from .butterfly import Butterfly, two_morphism_find, validate


@dataclass(frozen=True)
class DerivedTensor:
    a: FgAbGroup
    b: FgAbGroup
    complex: TwoTermComplex   # [B^m -> B^n], degrees [-1, 0]
    tensor: FgAbGroup         # the direct presentation of A (x) B
    h0_iso: FgAbMap           # tensor -> H^0(complex); an isomorphism

    @property
    def tor1(self) -> FgAbGroup:
        return homology(self.complex).hm1


def tensor_product(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """Z^(na*nb) modulo relations of both factors, copy-major in a's gens."""
    rel = hstack(kron(a.relations, IntMatrix.identity(b.ngens)),
                 kron(IntMatrix.identity(a.ngens), b.relations))
    return FgAbGroup(a.ngens * b.ngens, rel)


def derived_tensor(a: FgAbGroup, b: FgAbGroup) -> DerivedTensor:
    r = free_presentation(a)
    n, m = a.ngens, r.cols
    km1 = power_group(b, m)
    k0 = power_group(b, n)
    d = FgAbMap(km1, k0, kron(r, IntMatrix.identity(b.ngens)))
    cx = TwoTermComplex(km1, k0, d)
    t = tensor_product(a, b)
    h = homology(cx)
    iso = FgAbMap(t, h.h0, h.proj.matrix)
    return DerivedTensor(a, b, cx, t, iso)


@dataclass(frozen=True)
class BiextGroups:
    pi1: FgAbGroup
    pi0: FgAbGroup
    filtration_sub: FgAbGroup   # coker(Hom(K^0,C) -> Hom(K^-1,C))
    filtration_quot: FgAbGroup  # ker(Ext^1(K^0,C) -> Ext^1(K^-1,C))


def biext_groups(a: FgAbGroup, b: FgAbGroup, c: FgAbGroup) -> BiextGroups:
    k = derived_tensor(a, b).complex
    pi1 = hom_group(homology(k).h0, c)

    k0, k1 = k.deg_0, k.deg_m1
    r0 = free_presentation(k0)
    r1 = free_presentation(k1)
    n0, m0 = k0.ngens, r0.cols
    n1, m1 = k1.ngens, r1.cols
    nc = c.ngens
    dmat = k.d.matrix
    dprime = solve_matrix(r0, dmat * r1)  # D*R1 = R0*D' exactly
    assert dprime is not None

    ambient = power_group(c, m0 + n1)  # (c, v) blocks, copy-major
    constraint = FgAbMap(ambient, power_group(c, m1),
                         hstack(kron(dprime.transpose(), IntMatrix.identity(nc)),
                                kron(r1.transpose(), IntMatrix.identity(nc))))
    pk = kernel(constraint)
    cobound = FgAbMap(power_group(c, n0), ambient,
                      vstack(kron(r0.transpose(), IntMatrix.identity(nc)),
                             -kron(dmat.transpose(), IntMatrix.identity(nc))))
    u = pk.factor(cobound)
    pi0 = cokernel(u).group

    # filtration pieces, for cross-checks
    pre0 = FgAbMap(power_group(c, n0), power_group(c, m0),
                   kron(r0.transpose(), IntMatrix.identity(nc)))
    pre1 = FgAbMap(power_group(c, n1), power_group(c, m1),
                   kron(r1.transpose(), IntMatrix.identity(nc)))
    hom0, hom1 = kernel(pre0), kernel(pre1)
    dual_d = FgAbMap(power_group(c, n0), power_group(c, n1),
                     kron(dmat.transpose(), IntMatrix.identity(nc)))
    hom_d = hom1.factor(dual_d * hom0.incl)
    filtration_sub = cokernel(hom_d).group
    ext0, ext1 = cokernel(pre0), cokernel(pre1)
    ext_d = ext0.induce(ext1.proj * FgAbMap(power_group(c, m0), power_group(c, m1),
                                            kron(dprime.transpose(), IntMatrix.identity(nc))))
    filtration_quot = kernel(ext_d).group

    return BiextGroups(pi1, pi0, filtration_sub, filtration_quot)


def biext_enumerate(a: FgAbGroup, b: FgAbGroup, c: FgAbGroup,
                    lift_bound: int = 1, max_classes: int = 64) -> list:
    """Pairwise non-2-isomorphic butterflies  A (+)^L B -> C[1], by bounded
    exhaustive construction: realize every Ext class of the diagonal
    extension, search all bounded lifts of the differential, and dedupe with
    the 2-morphism solver.  Ground truth for biext_groups on small inputs."""
    from .oracle import realize  # enumerate Ext classes through their realization
    k = derived_tensor(a, b).complex
    c1 = shift1(c)
    ext = ext1_realize(k.deg_0, c)
    re = realize(ext.group, 512)
    classes = [list(el) for el in re.egroup.elements()]
    reps = []
    for el in classes[:max_classes]:
        vec = re.rep_of(el)
        ycar, i, q = ext.realize([vec[t, 0] for t in range(vec.rows)])
        lifted = hom_solve_all(k.deg_m1, ycar, [("post", q, k.d)])
        if lifted is None:
            continue
        base, kmats = lifted
        coeff_ranges = [range(-lift_bound, lift_bound + 1)] * len(kmats)
        import itertools
        for coeffs in itertools.product(*coeff_ranges):
            jm = base.matrix
            for cf, km in zip(coeffs, kmats):
                jm = jm + cf * km
            j = FgAbMap(k.deg_m1, ycar, jm)
            bf = Butterfly(k, c1, ycar, i, j, FgAbMap.zero(ycar, c1.deg_0), q)
            assert not validate(bf)
            if not any(two_morphism_find(bf, other) is not None for other in reps):
                reps.append(bf)
    return reps
