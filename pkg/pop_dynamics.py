"""
Pop Dynamics - The pop-tsack torsing operator and its orbits
Trajectories, whole-group depth tables, preimages and periodic orbits
"""

import multiprocessing as mp
import random
import sys
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from combinatorial_models import closure_projection, supports_closure
from group_engine import CoxeterSpec, Element, GroupContext, build_group, enumerate_group
from nc_lattice import NCLattice, build_nc
from utils.errors import BudgetExceededError

# depth markers
PERIODIC = -1
EVENTUALLY_PERIODIC = -2
UNRESOLVED = -3


class Terminal(Enum):
    """How a forward orbit ends"""
    REACHES_IDENTITY = "reaches_identity"
    PERIODIC_NONIDENTITY = "periodic_nonidentity"


@dataclass
class OrbitRecord:
    """A trajectory up to its first repeated element"""
    start: Element
    trajectory: List[Element]
    projections: List[Element]
    transient_length: int
    cycle_length: int
    terminal: Terminal

    @property
    def size(self) -> int:
        return len(self.trajectory)

    @property
    def cycle(self) -> List[Element]:
        return self.trajectory[self.transient_length:]


@dataclass
class DepthTable:
    """Number of elements needing exactly i iterations to reach e, plus the periodic part"""
    label: str
    counts: List[int]
    periodic_count: int = 0
    eventually_periodic_count: int = 0
    periodic_cycle_lengths: List[int] = field(default_factory=list)
    group_order: int = 0

    @property
    def periodic_orbits(self) -> int:
        return len(self.periodic_cycle_lengths)

    @property
    def total(self) -> int:
        return sum(self.counts) + self.periodic_count + self.eventually_periodic_count

    def row(self) -> Tuple[int, ...]:
        return tuple(self.counts)

    def to_dict(self) -> Dict:
        return {
            "group": self.label,
            "group_order": self.group_order,
            "counts": list(self.counts),
            "periodic_count": self.periodic_count,
            "eventually_periodic_count": self.eventually_periodic_count,
            "periodic_orbits": self.periodic_orbits,
            "periodic_cycle_lengths": list(self.periodic_cycle_lengths),
        }


class PopOperator:
    """Pop_T(w) = w pi_T(w)^-1 for a fixed context and lattice"""

    MODES = ("lattice", "closure")

    def __init__(self, ctx: GroupContext, lattice: NCLattice, mode: str = "lattice"):
        lattice.check_context(ctx)
        if mode == "auto":
            mode = "lattice"
        if mode not in self.MODES:
            raise ValueError(f"Unsupported format: projection mode {mode}")
        if mode == "closure" and not supports_closure(ctx):
            raise ValueError(f"Closure projections need a typed A/B/D context with its standard Coxeter element, got {ctx.label}")
        self.ctx = ctx
        self.lattice = lattice
        self.mode = mode

    def projection_index(self, w: Element) -> int:
        if self.mode == "closure":
            return self.lattice.index_of(closure_projection(self.ctx, w))
        return self.lattice.join_bits(self.ctx.reflections_below(w))

    def projection(self, w: Element) -> Element:
        return self.lattice.element(self.projection_index(w))

    def step(self, w: Element) -> Tuple[Element, int]:
        """(Pop_T(w), lattice index of pi_T(w))"""
        i = self.projection_index(w)
        return self.ctx.multiply(w, self.lattice.inverse(i)), i

    def __call__(self, w: Element) -> Element:
        return self.step(w)[0]


def pop_t(ctx: GroupContext, lattice: NCLattice, w: Element) -> Element:
    return PopOperator(ctx, lattice)(w)


def forward_orbit(ctx: GroupContext, lattice: NCLattice, w: Element, operator: Optional[PopOperator] = None) -> OrbitRecord:
    """
    Iterate Pop_T from w until an element repeats

    Returns:
        OrbitRecord with the distinct elements visited and the pi_T of each
    """
    op = operator or PopOperator(ctx, lattice)
    seen: Dict[Element, int] = {}
    trajectory: List[Element] = []
    projections: List[Element] = []
    x = w
    while x not in seen:
        seen[x] = len(trajectory)
        trajectory.append(x)
        nxt, i = op.step(x)
        projections.append(lattice.element(i))
        x = nxt
    start_of_cycle = seen[x]
    cycle_length = len(trajectory) - start_of_cycle
    if x == ctx.identity:
        return OrbitRecord(w, trajectory, projections, len(trajectory) - 1, 1, Terminal.REACHES_IDENTITY)
    return OrbitRecord(w, trajectory, projections, start_of_cycle, cycle_length, Terminal.PERIODIC_NONIDENTITY)


# --- whole-group scans -------------------------------------------------------

@dataclass
class GroupScan:
    """Pop_T tabulated over an enumerated group"""
    ctx: GroupContext
    lattice: NCLattice
    elements: List[Element]
    index: Dict[Element, int]
    pop_index: np.ndarray
    projection_index: np.ndarray
    depths: Optional[np.ndarray] = None
    cycle_lengths: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def preimage_counts(self) -> np.ndarray:
        return np.bincount(self.pop_index, minlength=len(self.elements))

    def preimages_of(self, w: Element) -> List[Element]:
        target = self.index[w]
        return [self.elements[i] for i in np.flatnonzero(self.pop_index == target)]


_worker_state: Dict = {}


def _worker_init(cox_type, rank_or_m, convention, c_word, backend, mode):
    ctx = build_group(cox_type, rank_or_m, convention, CoxeterSpec.from_word(c_word), backend=backend)
    lattice = build_nc(ctx)
    _worker_state["op"] = PopOperator(ctx, lattice, mode)


def _worker_chunk(chunk: List[Element]) -> List[Tuple[Element, int]]:
    op = _worker_state["op"]
    return [op.step(w) for w in chunk]


def _chunks(items: Sequence, count: int) -> List[Sequence]:
    size = max(1, -(-len(items) // count))
    return [items[k:k + size] for k in range(0, len(items), size)]


def pop_map(
    op: PopOperator,
    elements: Sequence[Element],
    jobs: int = 1,
) -> List[Tuple[Element, int]]:
    """
    (Pop_T(w), pi_T index) for every element, in input order

    Args:
        op: Operator to apply
        elements: Elements to map
        jobs: Worker processes; chunks are merged in order so the result does not depend on it
    """
    if jobs <= 1 or len(elements) < 2000:
        return [op.step(w) for w in elements]
    ctx = op.ctx
    backend = "generic" if ctx.backend.kind == "root" else "auto"
    init_args = (ctx.cox_type, ctx.m or ctx.rank, ctx.convention, ctx.c_word, backend, op.mode)
    print(f"[INFO] Mapping Pop_T over {len(elements)} elements of {ctx.label} with {jobs} workers", file=sys.stderr)
    pool = mp.Pool(jobs, initializer=_worker_init, initargs=init_args)
    try:
        results = pool.map(_worker_chunk, _chunks(list(elements), jobs * 4))
    finally:
        pool.close()
        pool.join()
    merged: List[Tuple[Element, int]] = []
    for part in results:
        merged.extend(part)
    return merged


def resolve_depths(pop_index: np.ndarray, identity_index: int) -> Tuple[np.ndarray, List[int]]:
    """
    Depth of every element under a self-map given as an index array

    Follows each chain iteratively; chains closing on themselves away from
    the identity are marked PERIODIC, and elements feeding into them
    EVENTUALLY_PERIODIC.

    Returns:
        (depths, cycle lengths of the periodic orbits in discovery order)
    """
    size = len(pop_index)
    depths = np.full(size, UNRESOLVED, dtype=np.int64)
    depths[identity_index] = 0
    cycle_lengths: List[int] = []
    on_path = np.full(size, -1, dtype=np.int64)

    for start in range(size):
        if depths[start] != UNRESOLVED:
            continue
        path = []
        x = start
        while depths[x] == UNRESOLVED and on_path[x] < 0:
            on_path[x] = len(path)
            path.append(x)
            x = int(pop_index[x])
        if depths[x] == UNRESOLVED:
            # closed a new cycle at path[on_path[x]:]
            first = int(on_path[x])
            cycle_lengths.append(len(path) - first)
            for y in path[first:]:
                depths[y] = PERIODIC
            for y in path[:first]:
                depths[y] = EVENTUALLY_PERIODIC
        elif depths[x] >= 0:
            base = int(depths[x])
            for offset, y in enumerate(reversed(path), start=1):
                depths[y] = base + offset
        else:
            for y in path:
                depths[y] = EVENTUALLY_PERIODIC
        for y in path:
            on_path[y] = -1
    return depths, cycle_lengths


def scan_group(
    ctx: GroupContext,
    lattice: NCLattice,
    budget: Optional[int] = None,
    jobs: int = 1,
    allow_large: bool = False,
    mode: str = "lattice",
) -> GroupScan:
    """Enumerate the group, tabulate Pop_T and resolve depths"""
    op = PopOperator(ctx, lattice, mode)
    elements = list(enumerate_group(ctx, budget=budget, allow_large=allow_large))
    index = {w: i for i, w in enumerate(elements)}
    results = pop_map(op, elements, jobs)
    pop_index = np.fromiter((index[p] for p, _ in results), dtype=np.int64, count=len(elements))
    projection_index = np.fromiter((i for _, i in results), dtype=np.int64, count=len(elements))
    depths, cycles = resolve_depths(pop_index, index[ctx.identity])
    return GroupScan(ctx, lattice, elements, index, pop_index, projection_index, depths, cycles)


def table_from_scan(scan: GroupScan) -> DepthTable:
    depths = scan.depths
    finite = depths[depths >= 0]
    counts = np.bincount(finite).tolist() if finite.size else []
    return DepthTable(
        label=scan.ctx.label,
        counts=[int(x) for x in counts],
        periodic_count=int(np.count_nonzero(depths == PERIODIC)),
        eventually_periodic_count=int(np.count_nonzero(depths == EVENTUALLY_PERIODIC)),
        periodic_cycle_lengths=sorted(scan.cycle_lengths),
        group_order=len(scan.elements),
    )


def depth_table(
    ctx: GroupContext,
    lattice: NCLattice,
    budget: Optional[int] = None,
    jobs: int = 1,
    allow_large: bool = False,
    mode: str = "lattice",
) -> DepthTable:
    """
    Depth table of Pop_T over the whole group

    Raises:
        BudgetExceededError: group order above the budget
    """
    return table_from_scan(scan_group(ctx, lattice, budget, jobs, allow_large, mode))


def preimages(ctx: GroupContext, lattice: NCLattice, w: Element, domain: Iterable[Element]) -> List[Element]:
    """Every x in domain with Pop_T(x) = w"""
    op = PopOperator(ctx, lattice)
    return [x for x in domain if op(x) == w]


# --- conjugation orbits ------------------------------------------------------

def _reduce_conjugate(ctx: GroupContext, x: Element, level_limit: int) -> Tuple[Element, Element]:
    """
    Conjugate x by simple reflections down to minimal length in its class

    Returns:
        (y, g) with y = g x g^-1 of minimal length
    """
    gens = ctx.simple_generators
    g = ctx.identity
    length = ctx.coxeter_length(x)
    while True:
        lowered = False
        # breadth-first over same-length conjugates until a shorter one appears
        frontier = [(x, g)]
        seen = {x}
        k = 0
        while k < len(frontier) and not lowered:
            y, h = frontier[k]
            k += 1
            for s in gens:
                z = ctx.multiply(ctx.multiply(s, y), s)
                if z in seen:
                    continue
                z_length = ctx.coxeter_length(z)
                if z_length < length:
                    x, g, length = z, ctx.multiply(s, h), z_length
                    lowered = True
                    break
                if z_length == length:
                    seen.add(z)
                    frontier.append((z, ctx.multiply(s, h)))
            if len(seen) > level_limit:
                raise BudgetExceededError(f"Cyclic-shift class in {ctx.label} exceeds {level_limit} elements")
        if not lowered:
            return x, g


def _find_conjugator(ctx: GroupContext, target: Element, level_limit: int = 200000) -> Optional[Element]:
    """Some w with w c w^-1 = target, found without enumerating the group"""
    y, g = _reduce_conjugate(ctx, target, level_limit)
    if ctx.coxeter_length(y) != len(ctx.simple_generators):
        return None
    # y = g target g^-1 is a Coxeter element; move it to c by length-preserving conjugation
    frontier = [(y, g)]
    seen = {y}
    k = 0
    while k < len(frontier):
        z, h = frontier[k]
        k += 1
        if z == ctx.c:
            # c = h target h^-1, so target = h^-1 c h
            return ctx.invert(h)
        for s in ctx.simple_generators:
            u = ctx.multiply(ctx.multiply(s, z), s)
            if u not in seen and ctx.coxeter_length(u) == ctx.coxeter_length(z):
                seen.add(u)
                frontier.append((u, ctx.multiply(s, h)))
        if len(seen) > level_limit:
            raise BudgetExceededError(f"Coxeter class search in {ctx.label} exceeds {level_limit} elements")
    return None


def conjugation_orbit_set(
    ctx: GroupContext,
    k: int,
    budget: Optional[int] = None,
    search: str = "auto",
) -> List[Element]:
    """
    O_k = {w : w^-1 c w = c^k}

    One solution w0 is found by scanning the group when it is enumerable,
    otherwise by length-reducing conjugation; the set is <c> w0.

    Args:
        ctx: Group context
        k: Exponent coprime to h
        budget: Largest group order to scan
        search: "scan", "conjugate" or "auto"

    Returns:
        The elements of O_k (empty when c is not conjugate to c^k)
    """
    h = ctx.coxeter_number
    if gcd(k, h) != 1:
        raise ValueError(f"k={k} is not coprime to h={h}")
    target = ctx.power(ctx.c, k % h)
    if search == "auto":
        enumerable = not ctx.large and (budget is None or ctx.group_order <= budget)
        search = "scan" if enumerable else "conjugate"
    w0 = None
    if search == "scan":
        for w in enumerate_group(ctx, budget=budget):
            if ctx.conjugate(ctx.c, ctx.invert(w)) == target:
                w0 = w
                break
    else:
        g = _find_conjugator(ctx, target)
        w0 = None if g is None else ctx.invert(g)
    if w0 is None:
        return []
    result = []
    z = ctx.identity
    for _ in range(h):
        result.append(ctx.multiply(z, w0))
        z = ctx.multiply(z, ctx.c)
    return result


def is_single_cycle(op: PopOperator, elements: Sequence[Element]) -> bool:
    """Whether the elements form exactly one Pop_T cycle"""
    if not elements:
        return False
    members = set(elements)
    x = elements[0]
    visited = []
    for _ in range(len(elements)):
        visited.append(x)
        x = op(x)
        if x not in members:
            return False
    return x == elements[0] and len(set(visited)) == len(members)


# --- property checks ---------------------------------------------------------

@dataclass
class EquivarianceReport:
    """Coxeter-element independence and conjugation equivariance"""
    label: str
    first_table: DepthTable
    second_table: DepthTable
    conjugation_checked: int = 0
    conjugation_failures: List[Element] = field(default_factory=list)

    @property
    def tables_equal(self) -> bool:
        a, b = self.first_table, self.second_table
        return a.row() == b.row() and a.periodic_count == b.periodic_count

    @property
    def passed(self) -> bool:
        return self.tables_equal and not self.conjugation_failures

    def to_dict(self) -> Dict:
        return {
            "group": self.label,
            "tables_equal": self.tables_equal,
            "first": self.first_table.to_dict(),
            "second": self.second_table.to_dict(),
            "conjugation_checked": self.conjugation_checked,
            "conjugation_failures": len(self.conjugation_failures),
        }


def verify_equivariance(
    ctx: GroupContext,
    c1: CoxeterSpec,
    c2: CoxeterSpec,
    budget: Optional[int] = None,
    sample: Optional[int] = None,
    seed: int = 0,
    store=None,
) -> EquivarianceReport:
    """
    Depth tables for two Coxeter elements, plus Pop(w, c)^c = Pop(w^c, c)

    Args:
        ctx: Group context (its Coxeter element is replaced by c1 and c2)
        c1, c2: The two Coxeter elements
        budget: Largest group order to scan
        sample: Check conjugation on this many seeded random elements instead of all
        seed: Sampling seed
        store: Optional LatticeStore
    """
    ctx1 = ctx.with_coxeter(c1)
    ctx2 = ctx.with_coxeter(c2)
    lattice1 = build_nc(ctx1, store=store)
    lattice2 = build_nc(ctx2, store=store)
    scan1 = scan_group(ctx1, lattice1, budget)
    table2 = depth_table(ctx2, lattice2, budget)
    report = EquivarianceReport(ctx.label, table_from_scan(scan1), table2)

    op = PopOperator(ctx1, lattice1)
    elements = scan1.elements
    if sample is not None and sample < len(elements):
        elements = random.Random(seed).sample(elements, sample)
    c = ctx1.c
    for w in elements:
        p = scan1.elements[scan1.pop_index[scan1.index[w]]]
        if ctx1.conjugate(p, c) != op(ctx1.conjugate(w, c)):
            report.conjugation_failures.append(w)
        report.conjugation_checked += 1
    return report


@dataclass
class InverseCoxeterReport:
    """Orbit of c^-1 and the preimages of its powers"""
    label: str
    orbit_size: int
    expected_size: int
    orbit_is_powers: bool
    preimage_problems: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.orbit_size == self.expected_size and self.orbit_is_powers and not self.preimage_problems


def inverse_coxeter_report(
    ctx: GroupContext,
    lattice: NCLattice,
    scan: Optional[GroupScan] = None,
) -> InverseCoxeterReport:
    """
    The forward orbit of c^-1 is c^-1, c^-2, ..., e; c^-1 has no preimage and
    c^-i has exactly the preimage c^-(i-1). Preimages are checked only when a
    scan of the whole group is supplied.
    """
    h = ctx.coxeter_number
    c_inv = ctx.invert(ctx.c)
    orbit = forward_orbit(ctx, lattice, c_inv)
    powers = [ctx.power(c_inv, i) for i in range(1, h)] + [ctx.identity]
    report = InverseCoxeterReport(ctx.label, orbit.size, h, orbit.trajectory == powers)
    if scan is None:
        return report
    counts = scan.preimage_counts()
    if counts[scan.index[c_inv]] != 0:
        report.preimage_problems.append(f"c^-1 has {counts[scan.index[c_inv]]} preimages")
    for i in range(2, h):
        found = scan.preimages_of(powers[i - 1])
        if found != [powers[i - 2]]:
            report.preimage_problems.append(f"c^-{i} has preimages {len(found)}")
    return report


def monotonicity_failures(op: PopOperator, elements: Iterable[Element], limit: int = 20) -> List[Element]:
    """Elements with pi_T(Pop_T(x)) not below pi_T(x)"""
    lattice = op.lattice
    failures = []
    for x in elements:
        p, i = op.step(x)
        j = op.projection_index(p)
        if lattice.refset_of[j] & lattice.refset_of[i] != lattice.refset_of[j]:
            failures.append(x)
            if len(failures) >= limit:
                break
    return failures


def sif_preimage_failures(scan: GroupScan, limit: int = 20) -> List[Element]:
    """Elements w with pi_T(w) = c that have a Pop_T preimage other than wc"""
    ctx, lattice = scan.ctx, scan.lattice
    failures = []
    for i, w in enumerate(scan.elements):
        if scan.projection_index[i] != lattice.coxeter_index:
            continue
        allowed = ctx.multiply(w, ctx.c)
        for x in scan.preimages_of(w):
            if x != allowed:
                failures.append(w)
                break
        if len(failures) >= limit:
            break
    return failures


def max_orbit_size(scan: GroupScan) -> int:
    """Largest forward orbit (distinct elements) among elements reaching e"""
    finite = scan.depths[scan.depths >= 0]
    return int(finite.max()) + 1 if finite.size else 0


def dihedral_expected_table(m: int) -> List[int]:
    """Closed form for I2(m) with h = m: c^-i needs h - i steps"""
    return [1, m + 1] + [1] * (m - 2)

