"""
The action of the mod-p Steenrod algebra on P_n in the Milnor basis St^{S,R}.

The action on a product is computed by the Cartan formula

    St^{S,R}(z t) = sum (-1)^((deg z + l(S1)) l(S2)) (S : S1, S2) St^{S1,R1}(z) St^{S2,R2}(t)

over all S1 u S2 = S (disjoint) and R1 + R2 = R, where (S : S1, S2) is the sign of the shuffle that sorts S1 followed
by S2 back into S. A monomial is split into atoms, each x_k on its own and each y_ell^b on its own, and the atoms are
handled by the closed atom formula. This brute-force evaluation is the reference every closed formula is checked
against.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, NamedTuple, Sequence, Tuple

from algebra.errors import ExponentOverflow, InvalidIndex
from algebra.gfp import PrimeField
from algebra.superpoly import EXPONENT_LIMIT, SuperMonomial, SuperPoly, sum_polys


@dataclass(frozen=True)
class MilnorIndex:
    """
    The pair (S, R) naming St^{S,R}, dual to tau_S xi^R. S is strictly increasing; trailing zeros of R are trimmed,
    so St^{(0),(0)} and St^{(0),()} are the same index.
    """
    S: Tuple[int, ...] = ()
    R: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        S = tuple(self.S)
        R = list(self.R)
        if any(s < 0 for s in S) or any(a >= b for a, b in zip(S, S[1:])):
            raise InvalidIndex(f'S must be a strictly increasing tuple of nonnegative integers, got {S}')
        if any(r < 0 for r in R):
            raise InvalidIndex(f'R must contain nonnegative integers, got {tuple(R)}')
        while R and R[-1] == 0:
            R.pop()
        object.__setattr__(self, 'S', S)
        object.__setattr__(self, 'R', tuple(R))

    @classmethod
    def bockstein(cls) -> 'MilnorIndex':
        return cls((0,), ())

    @classmethod
    def power(cls, i: int) -> 'MilnorIndex':
        return cls((), (i,))

    @property
    def length(self) -> int:
        return len(self.S)

    @property
    def r_total(self) -> int:
        return sum(self.R)

    def degree(self, p: int) -> int:
        return sum(2 * p ** s - 1 for s in self.S) + sum(2 * (p ** i - 1) * r for i, r in enumerate(self.R, start=1))

    def __str__(self) -> str:
        def fmt(values: Tuple[int, ...]) -> str:
            return '(' + ','.join(str(v) for v in values) + ')'

        return f'St^{{{fmt(self.S)},{fmt(self.R)}}}'


class CartanSplitting(NamedTuple):
    left: MilnorIndex
    right: MilnorIndex
    shuffle_sign: int


class Atom(NamedTuple):
    """The factor x_k^eps y_ell^b of a monomial"""
    eps: int
    k: int
    b: int
    ell: int

    @property
    def degree(self) -> int:
        return self.eps + 2 * self.b


@lru_cache(maxsize=4096)
def cartan_splittings(idx: MilnorIndex) -> Tuple[CartanSplitting, ...]:
    """
    Enumerates the ordered splittings S1 u S2 = S, R1 + R2 = R of an index, in a fixed order

    :param idx: The index to split

    :return: One CartanSplitting per pair, 2^l(S) * prod(r_i + 1) in total
    """
    splittings: List[CartanSplitting] = []
    for mask in itertools.product((True, False), repeat=idx.length):
        S1 = tuple(s for s, chosen in zip(idx.S, mask) if chosen)
        S2 = tuple(s for s, chosen in zip(idx.S, mask) if not chosen)
        inversions = sum(1 for a in S1 for b in S2 if a > b)
        sign = -1 if inversions % 2 else 1
        for R1 in itertools.product(*(range(r + 1) for r in idx.R)):
            R2 = tuple(r - r1 for r, r1 in zip(idx.R, R1))
            splittings.append(CartanSplitting(MilnorIndex(S1, R1), MilnorIndex(S2, R2), sign))

    return tuple(splittings)


def atom_action(idx: MilnorIndex, eps: int, k: int, b: int, ell: int, field: PrimeField, nvars: int = 2) -> SuperPoly:
    """
    St^{S,R}(x_k^eps y_ell^b) in closed form: with S empty it is C(b; R) x_k^eps y_ell^(b + |R|), with S = (s) it is
    eps C(b; R) y_k^(p^s) y_ell^(b + |R|), and it vanishes once S has two or more entries.

    :param idx:     The operation
    :param eps:     0 or 1, whether x_k is present
    :param k:       Index of the exterior variable
    :param b:       Exponent of y_ell
    :param ell:     Index of the polynomial variable
    :param field:   The coefficient field
    :param nvars:   Number of variables of the ambient algebra
    """
    if idx.length >= 2 or (idx.length == 1 and not eps):
        return SuperPoly.zero(field, nvars)

    coeff = field.multinom(b, idx.R)
    if coeff == 0:
        return SuperPoly.zero(field, nvars)

    exps = [0] * nvars
    exps[ell - 1] += b + field.abs_R(idx.R)
    if idx.length == 0:
        return SuperPoly.monomial(field, nvars, ext=(k,) if eps else (), exps=_checked(exps), coeff=coeff)

    exps[k - 1] += field.p ** idx.S[0]
    return SuperPoly.monomial(field, nvars, exps=_checked(exps), coeff=coeff)


def _checked(exps: List[int]) -> List[int]:
    if any(e > EXPONENT_LIMIT for e in exps):
        raise ExponentOverflow(f'Exponent overflow in atom action: {exps}')
    return exps


def monomial_atoms(monomial: SuperMonomial) -> Tuple[Atom, ...]:
    """The atoms of a monomial in canonical order: exterior factors by index, then powers of y by index"""
    atoms = [Atom(1, k, 0, k) for k in monomial.ext]
    atoms.extend(Atom(0, ell, b, ell) for ell, b in enumerate(monomial.exps, start=1) if b)
    return tuple(atoms)


def is_unstable_zero(idx: MilnorIndex, degree: int) -> bool:
    """St^{S,R} kills every element of degree below l(S) + 2 (r_1 + ... + r_m)"""
    return degree < idx.length + 2 * idx.r_total


class _CartanEvaluator:
    """
    Evaluates St^{S,R} on products of atoms, memoizing results per (index, atom suffix) for one st_apply call
    """

    def __init__(self, field: PrimeField, nvars: int):
        self.field = field
        self.nvars = nvars
        self.memo: Dict[Tuple[MilnorIndex, Tuple[Atom, ...]], SuperPoly] = {}

    def apply(self, idx: MilnorIndex, atoms: Tuple[Atom, ...]) -> SuperPoly:
        key = (idx, atoms)
        if key in self.memo:
            return self.memo[key]

        if is_unstable_zero(idx, sum(atom.degree for atom in atoms)):
            result = SuperPoly.zero(self.field, self.nvars)
        elif not atoms:
            result = SuperPoly.one(self.field, self.nvars) if idx == MilnorIndex() else SuperPoly.zero(
                self.field, self.nvars)
        elif len(atoms) == 1:
            atom = atoms[0]
            result = atom_action(idx, atom.eps, atom.k, atom.b, atom.ell, self.field, self.nvars)
        else:
            result = self._split(idx, atoms[0], atoms[1:])

        self.memo[key] = result
        return result

    def _split(self, idx: MilnorIndex, head: Atom, tail: Tuple[Atom, ...]) -> SuperPoly:
        terms: Dict[SuperMonomial, int] = {}
        for split in cartan_splittings(idx):
            left = self.apply(split.left, (head,))
            if left.is_zero():
                continue
            right = self.apply(split.right, tail)
            if right.is_zero():
                continue
            sign = split.shuffle_sign * (-1 if (head.degree + split.left.length) * split.right.length % 2 else 1)
            for monomial, coeff in (left * right).terms.items():
                terms[monomial] = terms.get(monomial, 0) + sign * coeff

        return SuperPoly(self.field, self.nvars, terms)


def st_apply(idx: MilnorIndex, f: SuperPoly) -> SuperPoly:
    """
    Applies St^{S,R} to a polynomial, term by term, through the Cartan formula on its atoms

    :param idx: The operation
    :param f:   Any element of P_n, not necessarily homogeneous

    :return: St^{S,R}(f)
    """
    evaluator = _CartanEvaluator(f.field, f.nvars)
    terms: Dict[SuperMonomial, int] = {}
    for monomial, coeff in f.terms.items():
        if is_unstable_zero(idx, monomial.degree):
            continue
        for image, image_coeff in evaluator.apply(idx, monomial_atoms(monomial)).terms.items():
            terms[image] = terms.get(image, 0) + coeff * image_coeff

    logging.debug(f'{idx} on {len(f)} terms used {len(evaluator.memo)} memoized atom products')
    return SuperPoly(f.field, f.nvars, terms)


def bockstein(f: SuperPoly) -> SuperPoly:
    return st_apply(MilnorIndex.bockstein(), f)


def power_op(i: int, f: SuperPoly) -> SuperPoly:
    """The reduced power P^i = St^{(),(i)}"""
    return st_apply(MilnorIndex.power(i), f)


def cartan_product(idx: MilnorIndex, z: SuperPoly, t: SuperPoly) -> SuperPoly:
    """
    The right-hand side of the Cartan formula for St^{S,R}(z t), built from st_apply on z and t separately.
    z may be inhomogeneous; it is split into homogeneous pieces first.
    """
    terms = []
    for (_, degree_z), piece in z.homogeneous_pieces().items():
        for split in cartan_splittings(idx):
            sign = split.shuffle_sign * (-1 if (degree_z + split.left.length) * split.right.length % 2 else 1)
            terms.append((st_apply(split.left, piece) * st_apply(split.right, t)).scale(sign))

    return sum_polys(z.field, z.nvars, terms)


def index_range(max_length: int, max_r_total: int, max_s: int, max_components: int = 2) -> Sequence[MilnorIndex]:
    """
    All indices with l(S) <= max_length, entries of S at most max_s, at most max_components entries in R and
    r_1 + ... + r_m <= max_r_total, in a fixed order
    """
    indices = []
    for length in range(max_length + 1):
        for S in itertools.combinations(range(max_s + 1), length):
            for R in itertools.product(range(max_r_total + 1), repeat=max_components):
                if sum(R) <= max_r_total:
                    indices.append(MilnorIndex(S, R))

    return sorted(set(indices), key=lambda index: (index.length, index.S, index.R))
