"""
Normal Forms - Dual braid lifts, SIF elements and block decompositions
Factorizations read off Pop_T trajectories
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from group_engine import Element, GroupContext, enumerate_group
from nc_lattice import NCLattice, iter_bits
from pop_dynamics import GroupScan, PopOperator, Terminal, forward_orbit
from utils.errors import PeriodicOrbitError


@dataclass
class Factorization:
    """Noncrossing factors, leftmost first in the product"""
    element: Element
    indices: List[int]
    factors: List[Element]

    def __len__(self):
        return len(self.factors)

    def product(self, ctx: GroupContext) -> Element:
        return ctx.product(self.factors)

    def is_monotone(self, lattice: NCLattice) -> bool:
        """Each factor lies below the next one in absolute order"""
        for a, b in zip(self.indices, self.indices[1:]):
            bits = lattice.refset_of[a]
            if lattice.refset_of[b] & bits != bits:
                return False
        return True

    def format(self, ctx: GroupContext) -> str:
        if not self.factors:
            return "e"
        return "·".join(ctx.format(f) for f in self.factors)

    def to_dict(self, ctx: GroupContext) -> Dict:
        return {
            "element": ctx.format(self.element),
            "factors": [ctx.format(f) for f in self.factors],
            "indices": list(self.indices),
        }


def dual_braid_lift(ctx: GroupContext, lattice: NCLattice, w: Element, operator: Optional[PopOperator] = None) -> Factorization:
    """
    w = pi_T(w_k) ... pi_T(w_2) pi_T(w_1) along the trajectory w_1 = w, ..., w_k, e

    Raises:
        PeriodicOrbitError: the trajectory of w never reaches e
    """
    orbit = forward_orbit(ctx, lattice, w, operator)
    if orbit.terminal is not Terminal.REACHES_IDENTITY:
        raise PeriodicOrbitError(
            f"{ctx.format(w)} lies on a Pop_T cycle of length {orbit.cycle_length}; it has no dual braid lift"
        )
    factors = orbit.projections[:-1][::-1]
    indices = [lattice.index_of(f) for f in factors]
    return Factorization(w, indices, factors)


def is_sif(ctx: GroupContext, lattice: NCLattice, w: Element) -> bool:
    """pi_T(w) = c"""
    lattice.check_context(ctx)
    return lattice.join_bits(ctx.reflections_below(w)) == lattice.coxeter_index


def sif_count(ctx: GroupContext, lattice: NCLattice, budget: Optional[int] = None, scan: Optional[GroupScan] = None) -> int:
    """Number of elements whose noncrossing projection is c"""
    if scan is not None:
        return int((scan.projection_index == lattice.coxeter_index).sum())
    return sum(1 for w in enumerate_group(ctx, budget=budget) if is_sif(ctx, lattice, w))


def projection_histogram(scan: GroupScan) -> Dict[int, int]:
    """Lattice index -> number of elements projecting onto it"""
    histogram: Dict[int, int] = {}
    for i in scan.projection_index.tolist():
        histogram[i] = histogram.get(i, 0) + 1
    return histogram


@dataclass
class BlockDecomposition:
    """Factors of w over the irreducible components of W_{pi_T(w)}"""
    element: Element
    projection_index: int
    blocks: List[int] = field(default_factory=list)
    block_coxeter: List[Element] = field(default_factory=list)
    factors: List[Element] = field(default_factory=list)
    sif_flags: List[bool] = field(default_factory=list)

    @property
    def all_sif(self) -> bool:
        return all(self.sif_flags)

    def to_dict(self, ctx: GroupContext) -> Dict:
        return {
            "element": ctx.format(self.element),
            "blocks": [
                {
                    "reflections": [ctx.format(ctx.reflections[t]) for t in iter_bits(bits)],
                    "coxeter_element": ctx.format(cox),
                    "factor": ctx.format(factor),
                    "sif": flag,
                }
                for bits, cox, factor, flag in zip(self.blocks, self.block_coxeter, self.factors, self.sif_flags)
            ],
        }


def reflection_word(ctx: GroupContext, w: Element) -> List[int]:
    """Reduced word in reflections: w = t_1 t_2 ... t_k with each t_i taken lowest-first"""
    word = []
    x = w
    while x != ctx.identity:
        bits = ctx.reflections_below(x)
        t = (bits & -bits).bit_length() - 1
        word.append(t)
        x = ctx.multiply(ctx.reflections[t], x)
    return word


def commutation_components(ctx: GroupContext, bits: int) -> List[int]:
    """Connected components of the non-commutation graph on a reflection set"""
    members = list(iter_bits(bits))
    reflections = ctx.reflections
    components: List[int] = []
    unvisited = set(members)
    for start in members:
        if start not in unvisited:
            continue
        unvisited.discard(start)
        component = 1 << start
        stack = [start]
        while stack:
            t = stack.pop()
            for u in list(unvisited):
                if ctx.multiply(reflections[t], reflections[u]) != ctx.multiply(reflections[u], reflections[t]):
                    unvisited.discard(u)
                    component |= 1 << u
                    stack.append(u)
        components.append(component)
    return components


def _split_by_component(ctx: GroupContext, word: List[int], components: List[int]) -> List[Element]:
    factors = []
    for bits in components:
        factors.append(ctx.product([ctx.reflections[t] for t in word if bits >> t & 1]))
    return factors


def block_decompose(ctx: GroupContext, lattice: NCLattice, w: Element) -> BlockDecomposition:
    """
    Split w into commuting factors, one per irreducible component of the
    noncrossing parabolic below pi_T(w); each block's Coxeter element is the
    matching component of pi_T(w).
    """
    lattice.check_context(ctx)
    p = lattice.join_bits(ctx.reflections_below(w))
    components = commutation_components(ctx, lattice.refset_of[p])
    factors = _split_by_component(ctx, reflection_word(ctx, w), components)
    block_coxeter = _split_by_component(ctx, reflection_word(ctx, lattice.element(p)), components)
    flags = [
        lattice.join_bits(ctx.reflections_below(f)) == lattice.index_of(cox)
        for f, cox in zip(factors, block_coxeter)
    ]
    return BlockDecomposition(w, p, components, block_coxeter, factors, flags)
