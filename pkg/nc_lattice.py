"""
Noncrossing Partition Lattice - The interval [e, c] in absolute order
Join, meet, Kreweras complement and the noncrossing projection
"""

from typing import Iterable, List, Optional, Sequence

from group_engine import Element, GroupContext
from utils.cache import ProjectionCache
from utils.errors import BudgetExceededError, ContextMismatchError, NotNoncrossingError


def iter_bits(bits: int):
    """Indices of the set bits, lowest first"""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class NCLattice:
    """NC(W, c) with per-element ranks and reflection bitsets, ordered by rank"""

    def __init__(
        self,
        ctx: GroupContext,
        elements: Sequence[Element],
        ranks: Sequence[int],
        refsets: Sequence[int],
        cache_size: Optional[int] = None,
    ):
        self.ctx = ctx
        self.elements: List[Element] = list(elements)
        self.rank_of: List[int] = list(ranks)
        self.refset_of: List[int] = list(refsets)
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.refset_index = {bits: i for i, bits in enumerate(self.refset_of)}
        if ctx.identity not in self.index or ctx.c not in self.index:
            raise NotNoncrossingError(f"Lattice for {ctx.label} is missing e or c")
        self.identity_index = self.index[ctx.identity]
        self.coxeter_index = self.index[ctx.c]
        self._inverses = [ctx.invert(w) for w in self.elements]
        self.join_cache = ProjectionCache(cache_size)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, w: Element) -> bool:
        return w in self.index

    def element(self, i: int) -> Element:
        return self.elements[i]

    def inverse(self, i: int) -> Element:
        return self._inverses[i]

    def index_of(self, w: Element) -> int:
        try:
            return self.index[w]
        except KeyError:
            raise NotNoncrossingError(f"{self.ctx.format(w)} is not in NC({self.ctx.label}, c)")

    def atoms(self) -> List[int]:
        return [i for i, r in enumerate(self.rank_of) if r == 1]

    def check_context(self, ctx: GroupContext):
        if ctx.label != self.ctx.label or ctx.c != self.ctx.c or ctx.convention is not self.ctx.convention:
            raise ContextMismatchError(f"Lattice was built for {self.ctx.label} with another Coxeter element")

    def scan(self, bits: int) -> int:
        """First element in rank order whose refset contains bits"""
        for i, refset in enumerate(self.refset_of):
            if refset & bits == bits:
                return i
        # c lies above every reflection
        return self.coxeter_index

    def join_bits(self, bits: int) -> int:
        """Index of the join of the reflections in bits"""
        exact = self.refset_index.get(bits)
        if exact is not None:
            return exact
        cached = self.join_cache.get(bits)
        if cached is not None:
            return cached
        index = self.scan(bits)
        self.join_cache.set(bits, index)
        return index


def build_nc(
    ctx: GroupContext,
    store=None,
    debug: bool = False,
    budget: Optional[int] = None,
    cache_size: Optional[int] = None,
) -> NCLattice:
    """
    Build NC(W, c) breadth-first from e

    A lattice element x is extended by every reflection t <=_T x^-1 c,
    which is exactly the set of t with xt <=_T c and l_T(xt) = l_T(x) + 1.

    Args:
        ctx: Group context
        store: Optional LatticeStore for reuse across runs
        debug: Verify the lattice axioms after building
        budget: Largest allowed lattice size
        cache_size: Bound for the join memo

    Returns:
        NCLattice
    """
    if budget is not None and ctx.catalan_number > budget:
        raise BudgetExceededError(f"NC({ctx.label}) has {ctx.catalan_number} elements, above the budget {budget}")

    if store is not None:
        cached = store.load(ctx)
        if cached is not None:
            elements, ranks, refsets = cached
            lattice = NCLattice(ctx, elements, ranks, refsets, cache_size)
            if debug:
                _raise_on_problems(verify_lattice(lattice))
            return lattice

    reflections = ctx.reflections
    elements = [ctx.identity]
    ranks = [0]
    seen = {ctx.identity}
    frontier = [ctx.identity]
    rank = 0
    while frontier:
        rank += 1
        next_frontier = []
        for x in frontier:
            remainder = ctx.multiply(ctx.invert(x), ctx.c)
            for t in iter_bits(ctx.reflections_below(remainder)):
                y = ctx.multiply(x, reflections[t])
                if y not in seen:
                    seen.add(y)
                    next_frontier.append(y)
        elements.extend(next_frontier)
        ranks.extend([rank] * len(next_frontier))
        frontier = next_frontier

    refsets = [ctx.reflections_below(w) for w in elements]
    lattice = NCLattice(ctx, elements, ranks, refsets, cache_size)
    if debug:
        _raise_on_problems(verify_lattice(lattice))
    if store is not None:
        store.save(ctx, lattice)
    return lattice


def _raise_on_problems(problems: List[str]):
    if problems:
        raise NotNoncrossingError("Lattice check failed: " + "; ".join(problems[:5]))


def verify_lattice(lattice: NCLattice, exhaustive_limit: int = 400) -> List[str]:
    """
    Check the NC lattice axioms

    Returns:
        List of problem descriptions (empty when everything holds)
    """
    ctx = lattice.ctx
    problems = []
    if len(lattice) != ctx.catalan_number:
        problems.append(f"size {len(lattice)} != Catalan number {ctx.catalan_number}")
    missing = [k for k, t in enumerate(ctx.reflections) if t not in lattice]
    if missing:
        problems.append(f"{len(missing)} reflections missing from the lattice")
    if len(lattice.refset_index) != len(lattice):
        problems.append("reflection sets do not determine lattice elements")
    for i, w in enumerate(lattice.elements):
        if lattice.rank_of[i] != ctx.reflection_length(w):
            problems.append(f"rank mismatch at index {i}")
        if lattice.scan(lattice.refset_of[i]) != i:
            problems.append(f"element {i} is not the join of its atoms")
    if len(lattice) <= exhaustive_limit:
        for i, u in enumerate(lattice.elements):
            for j, v in enumerate(lattice.elements):
                by_bits = lattice.refset_of[i] & lattice.refset_of[j] == lattice.refset_of[i]
                if by_bits != ctx.leq_abs(u, v):
                    problems.append(f"order mismatch between {i} and {j}")
    return problems


def nc_join(lattice: NCLattice, indices: Iterable[int]) -> int:
    """Join of lattice elements given by index; the empty join is e"""
    bits = 0
    for i in indices:
        bits |= lattice.refset_of[i]
    return lattice.join_bits(bits)


def nc_meet(lattice: NCLattice, indices: Iterable[int]) -> int:
    """Meet of lattice elements: the join of their common reflections"""
    indices = list(indices)
    if not indices:
        return lattice.coxeter_index
    bits = lattice.refset_of[indices[0]]
    for i in indices[1:]:
        bits &= lattice.refset_of[i]
    return lattice.join_bits(bits)


def kreweras(lattice: NCLattice, i: int) -> int:
    """Kreweras complement K(w) = c w^-1"""
    ctx = lattice.ctx
    return lattice.index_of(ctx.multiply(ctx.c, lattice.inverse(i)))


def noncrossing_projection(ctx: GroupContext, lattice: NCLattice, w: Element) -> int:
    """pi_T(w): index of the join of all reflections below w"""
    lattice.check_context(ctx)
    return lattice.join_bits(ctx.reflections_below(w))
