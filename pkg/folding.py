"""
Folding - Unfolding homomorphisms between Coxeter groups
Diagram foldings, the Coxeter-plane dihedral group and Pop_T equivariance checks
"""

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from group_engine import (
    CoxeterSpec,
    CoxeterType,
    Element,
    GroupContext,
    ProductConvention,
    bipartition,
    build_group,
    enumerate_group,
)
from nc_lattice import NCLattice, build_nc, kreweras, nc_join, nc_meet
from pop_dynamics import PopOperator, conjugation_orbit_set, forward_orbit, is_single_cycle
from utils.element_parser import parse_element
from utils.errors import FoldingError

# Periodic E8 element as a product of six reflections (root coefficient strings)
E8_PERIODIC_REFLECTIONS = ("2", "123456", "3", "1234^25678", "123^24^25^2678", "134567")
# H4 word (1-based) that unfolds onto it
H4_PERIODIC_WORD = (3, 4, 3, 2, 1, 2, 1, 3, 2, 1, 4, 3, 2, 1, 2, 3, 4)


def _fibers_a_to_b(n: int) -> List[Tuple[int, ...]]:
    # B_n inside A_{2n-1}: mirror pairs around the middle node
    fibers = [(j, 2 * n - 2 - j) for j in range(n - 1)]
    fibers.append((n - 1,))
    return fibers


def _fibers_d_to_b(n: int) -> List[Tuple[int, ...]]:
    # B_n inside D_{n+1}: the two fork nodes fold together
    return [(j,) for j in range(n - 1)] + [(n - 1, n)]


@dataclass(frozen=True)
class _Recipe:
    source_type: CoxeterType
    target_type: CoxeterType
    target_rank: Callable[[int], int]
    fibers: Callable[[int], List[Tuple[int, ...]]]
    fixed_rank: Optional[int] = None


FOLDINGS: Dict[str, _Recipe] = {
    "A->B": _Recipe(CoxeterType.B, CoxeterType.A, lambda n: 2 * n - 1, _fibers_a_to_b),
    "D->B": _Recipe(CoxeterType.B, CoxeterType.D, lambda n: n + 1, _fibers_d_to_b),
    "E6->F4": _Recipe(CoxeterType.F, CoxeterType.E, lambda n: 6,
                      lambda n: [(1,), (3,), (2, 4), (0, 5)], fixed_rank=4),
    "E8->H4": _Recipe(CoxeterType.H, CoxeterType.E, lambda n: 8,
                      lambda n: [(1, 4), (3, 5), (2, 6), (0, 7)], fixed_rank=4),
}


@dataclass
class FoldingMap:
    """unfold: W' -> W sending each simple reflection of W' to the product of its fiber"""
    name: str
    source: GroupContext
    target: GroupContext
    fibers: List[Tuple[int, ...]]
    generator_images: List[Element]
    _lattices: Dict[str, NCLattice] = field(default_factory=dict, repr=False)

    def unfold(self, w: Element) -> Element:
        images = self.generator_images
        return self.target.product([images[i] for i in self.source.word_of(w)])

    def source_lattice(self, store=None) -> NCLattice:
        if "source" not in self._lattices:
            self._lattices["source"] = build_nc(self.source, store=store)
        return self._lattices["source"]

    def target_lattice(self, store=None) -> NCLattice:
        if "target" not in self._lattices:
            self._lattices["target"] = build_nc(self.target, store=store)
        return self._lattices["target"]

    def describe(self) -> Dict:
        return {
            "folding": self.name,
            "source": self.source.label,
            "target": self.target.label,
            "fibers": [[i + 1 for i in fiber] for fiber in self.fibers],
            "coxeter_number": self.source.coxeter_number,
        }


def _target_word(fibers: Sequence[Tuple[int, ...]], source_word: Sequence[int]) -> Tuple[int, ...]:
    return tuple(i for j in source_word for i in fibers[j])


def _check_relations(name: str, source: GroupContext, target: GroupContext,
                     fibers: Sequence[Tuple[int, ...]], images: Sequence[Element]):
    """unfold respects every Coxeter relation of W' and fibers commute"""
    gens = target.simple_generators
    covered = sorted(i for fiber in fibers for i in fiber)
    if covered != list(range(len(gens))):
        raise FoldingError(f"{name}: fibers do not partition the simple reflections of {target.label}")
    for fiber in fibers:
        for a in fiber:
            for b in fiber:
                if a < b and target.multiply(gens[a], gens[b]) != target.multiply(gens[b], gens[a]):
                    raise FoldingError(f"{name}: s{a + 1} and s{b + 1} share a fiber but do not commute")
    matrix = source.coxeter_matrix()
    for i in range(len(images)):
        if target.order_of(images[i]) != 2:
            raise FoldingError(f"{name}: image of s{i + 1} is not an involution")
        for j in range(i + 1, len(images)):
            order = target.order_of(target.multiply(images[i], images[j]))
            if order != matrix[i][j]:
                raise FoldingError(f"{name}: images of s{i + 1}, s{j + 1} have product of order {order}, "
                                   f"expected {matrix[i][j]}")


def _assemble(name: str, source: GroupContext, target: GroupContext, fibers: Sequence[Tuple[int, ...]]) -> FoldingMap:
    gens = target.simple_generators
    images = [target.product([gens[i] for i in fiber]) for fiber in fibers]
    _check_relations(name, source, target, fibers, images)
    if source.coxeter_number != target.coxeter_number:
        raise FoldingError(f"{name}: Coxeter numbers {source.coxeter_number} and {target.coxeter_number} differ")
    fmap = FoldingMap(name, source, target, [tuple(f) for f in fibers], images)
    if fmap.unfold(source.c) != target.c:
        raise FoldingError(f"{name}: unfold(c') is not the Coxeter element of {target.label}")
    return fmap


def build_folding(
    pair: str,
    rank: Optional[int] = None,
    convention: ProductConvention = ProductConvention.LEFT_TO_RIGHT,
    coxeter: CoxeterSpec = CoxeterSpec(),
    backend: str = "auto",
) -> FoldingMap:
    """
    Build one of the diagram foldings

    Args:
        pair: "A->B", "D->B", "E6->F4" or "E8->H4"
        rank: Rank of the folded group W' (B_n for the classical pairs)
        convention: Product convention shared by both groups
        coxeter: Coxeter element c' of W'; W gets c = unfold(c')
        backend: Passed to build_group for both groups

    Raises:
        FoldingError: unknown pair, incompatible rank or a failed relation check
    """
    key = pair.strip().upper().replace(" ", "")
    recipe = FOLDINGS.get(key)
    if recipe is None:
        raise FoldingError(f"Unsupported folding: {pair} (expected one of {', '.join(FOLDINGS)})")
    if recipe.fixed_rank is not None:
        if rank not in (None, recipe.fixed_rank):
            raise FoldingError(f"{key} folds onto rank {recipe.fixed_rank}, got rank {rank}")
        rank = recipe.fixed_rank
    elif rank is None or rank < 2:
        raise FoldingError(f"{key} needs the rank n >= 2 of B_n, got {rank}")

    source = build_group(recipe.source_type, rank, convention, coxeter, backend)
    fibers = recipe.fibers(rank)
    word = _target_word(fibers, source.c_word)
    target = build_group(recipe.target_type, recipe.target_rank(rank), convention,
                         CoxeterSpec.from_word(word), backend)
    return _assemble(f"{target.label}->{source.label}", source, target, fibers)


def coxeter_plane_dihedral(ctx: GroupContext) -> FoldingMap:
    """
    The dihedral group <c+, c-> of order 2h inside W

    Raises:
        FoldingError: ctx does not use its bipartite Coxeter element c = c+ c-
    """
    plus, minus = bipartition(ctx)
    if ctx.c != ctx.word_element(plus + minus):
        raise FoldingError(f"{ctx.label}: the Coxeter plane needs the bipartite Coxeter element c = c+ c-")
    h = ctx.coxeter_number
    source = build_group(CoxeterType.I2, h, ctx.convention, CoxeterSpec.from_word((0, 1)))
    return _assemble(f"{ctx.label}->I2({h})", source, ctx, [tuple(plus), tuple(minus)])


# --- verification ------------------------------------------------------------

@dataclass
class FoldingReport:
    """unfold(Pop'^k(w')) = Pop^k(unfold(w')) along every tested trajectory"""
    name: str
    checked: int = 0
    entries: List[Dict] = field(default_factory=list)
    failures: int = 0
    projection_failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and not self.projection_failures

    def to_dict(self, with_entries: bool = True) -> Dict:
        result = {
            "folding": self.name,
            "checked": self.checked,
            "steps": len(self.entries),
            "failures": self.failures,
            "projection_failures": list(self.projection_failures),
            "passed": self.passed,
        }
        if with_entries:
            result["entries"] = list(self.entries)
        return result


def verify_unfold_equivariance(
    fmap: FoldingMap,
    elements: Optional[Iterable[Element]] = None,
    budget: Optional[int] = None,
    store=None,
) -> FoldingReport:
    """
    Compare both trajectories step by step, and pi_T against the unfolded pi_T'

    Args:
        fmap: Folding to test
        elements: Elements of W' to start from (all of W' when None)
        budget: Largest order of W' to enumerate
        store: Optional LatticeStore
    """
    source_lattice = fmap.source_lattice(store)
    target_lattice = fmap.target_lattice(store)
    source_op = PopOperator(fmap.source, source_lattice)
    target_op = PopOperator(fmap.target, target_lattice)
    if elements is None:
        elements = enumerate_group(fmap.source, budget=budget)

    report = FoldingReport(fmap.name)
    for w in elements:
        label = fmap.source.format(w)
        x, y = w, fmap.unfold(w)
        seen = set()
        k = 0
        while x not in seen:
            seen.add(x)
            ok = fmap.unfold(x) == y
            report.entries.append({"w'": label, "k": k, "pass": ok})
            if not ok:
                report.failures += 1
            x_next, i = source_op.step(x)
            y_next, j = target_op.step(y)
            if fmap.unfold(source_lattice.element(i)) != target_lattice.element(j):
                report.projection_failures.append(f"{label} at k={k}")
            x, y = x_next, y_next
            k += 1
        report.checked += 1
    return report


def sublattice_failures(fmap: FoldingMap, store=None, limit: int = 20) -> List[str]:
    """
    unfold embeds NC(W', c') in NC(W, c) as a sublattice commuting with Kreweras

    Returns:
        Problem descriptions (empty when every pair checks out)
    """
    source_lattice = fmap.source_lattice(store)
    target_lattice = fmap.target_lattice(store)
    fmt = fmap.source.format
    problems: List[str] = []
    image = []
    for i in range(len(source_lattice)):
        u = fmap.unfold(source_lattice.element(i))
        if u not in target_lattice:
            problems.append(f"unfold({fmt(source_lattice.element(i))}) is not noncrossing")
            return problems
        image.append(target_lattice.index_of(u))

    for i in range(len(source_lattice)):
        if image[kreweras(source_lattice, i)] != kreweras(target_lattice, image[i]):
            problems.append(f"Kreweras complement of {fmt(source_lattice.element(i))}")
        for j in range(i + 1, len(source_lattice)):
            pair = (image[i], image[j])
            if image[nc_join(source_lattice, (i, j))] != nc_join(target_lattice, pair):
                problems.append(f"join of {fmt(source_lattice.element(i))}, {fmt(source_lattice.element(j))}")
            if image[nc_meet(source_lattice, (i, j))] != nc_meet(target_lattice, pair):
                problems.append(f"meet of {fmt(source_lattice.element(i))}, {fmt(source_lattice.element(j))}")
        if len(problems) >= limit:
            break
    return problems[:limit]


def unfold_image_size(fmap: FoldingMap, budget: Optional[int] = None) -> int:
    return len({fmap.unfold(w) for w in enumerate_group(fmap.source, budget=budget)})


def is_injective(fmap: FoldingMap, budget: Optional[int] = None) -> bool:
    return unfold_image_size(fmap, budget) == fmap.source.group_order


@dataclass
class PeriodicLift:
    """O_k of W' pushed through unfold"""
    k: int
    source_size: int
    source_is_cycle: bool
    lifted_is_cycle: bool
    matches_target: Optional[bool] = None
    lifted: List[Element] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.source_is_cycle and self.lifted_is_cycle and self.matches_target is not False

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "size": self.source_size,
            "source_is_cycle": self.source_is_cycle,
            "lifted_is_cycle": self.lifted_is_cycle,
            "matches_target": self.matches_target,
        }


def periodic_lift_report(
    fmap: FoldingMap,
    ks: Sequence[int],
    budget: Optional[int] = None,
    store=None,
    compare_target: bool = True,
) -> List[PeriodicLift]:
    """
    Lift the periodic sets O_k of W' into W

    unfold(c') = c, so unfold maps O_k(W') into O_k(W); with compare_target
    the lifted set is compared against O_k(W) computed directly.
    """
    source_op = PopOperator(fmap.source, fmap.source_lattice(store))
    target_op = PopOperator(fmap.target, fmap.target_lattice(store))
    results = []
    for k in ks:
        orbit = conjugation_orbit_set(fmap.source, k, budget)
        lifted = [fmap.unfold(w) for w in orbit]
        matches = None
        if compare_target:
            direct = conjugation_orbit_set(fmap.target, k, budget)
            matches = set(direct) == set(lifted)
        results.append(PeriodicLift(
            k=k,
            source_size=len(orbit),
            source_is_cycle=is_single_cycle(source_op, orbit),
            lifted_is_cycle=is_single_cycle(target_op, lifted),
            matches_target=matches,
            lifted=lifted,
        ))
    return results


def _orbit_summary(ctx: GroupContext, lattice: NCLattice, w: Element) -> Dict:
    orbit = forward_orbit(ctx, lattice, w)
    return {
        "element": ctx.format(w),
        "size": orbit.size,
        "transient": orbit.transient_length,
        "cycle_length": orbit.cycle_length,
        "terminal": orbit.terminal.value,
    }


def h4_coxeter_candidates(convention: ProductConvention = ProductConvention.LEFT_TO_RIGHT) -> List[CoxeterSpec]:
    """One word per distinct Coxeter element of H4"""
    h4 = build_group(CoxeterType.H, 4, convention)
    seen = {}
    for word in permutations(range(4)):
        seen.setdefault(h4.word_element(word), CoxeterSpec.from_word(word))
    return list(seen.values())


def _is_full_cycle(orbit: Dict, h: int) -> bool:
    return orbit["terminal"] == "periodic_nonidentity" and orbit["transient"] == 0 and orbit["cycle_length"] == h


def e8_stretch_report(
    candidates: Optional[Sequence[CoxeterSpec]] = None,
    convention: ProductConvention = ProductConvention.LEFT_TO_RIGHT,
    store=None,
) -> List[Dict]:
    """
    Check that the explicit E8 element is the unfolding of the H4 word and lies on a Pop_T cycle of size 30

    Every candidate Coxeter element c' of H4 is tried with c = unfold(c') in E8.
    The H4 word is read both ways since reversing it inverts the element.
    unfold commutes with Pop_T, so the E8 trajectory is only computed for
    candidates where the matching H4 element already lies on a cycle of
    length h. A candidate passes when that E8 trajectory is a cycle of length
    h = 30 with no transient. The E8 group is never enumerated.

    Returns:
        One dict per candidate; any(entry["passed"]) is the overall verdict
    """
    if candidates is None:
        candidates = h4_coxeter_candidates(convention)
    results = []
    for spec in candidates:
        fmap = build_folding("E8->H4", convention=convention, coxeter=spec)
        e8, h4 = fmap.target, fmap.source
        explicit = parse_element(e8, "r:" + " ".join(E8_PERIODIC_REFLECTIONS))
        word = h4.word_element([i - 1 for i in H4_PERIODIC_WORD])
        readings = {"word": word, "reversed": h4.invert(word)}
        matched = next((name for name, x in readings.items() if fmap.unfold(x) == explicit), None)
        entry = {
            "h4_coxeter_word": [i + 1 for i in h4.c_word],
            "e8_coxeter_word": [i + 1 for i in e8.c_word],
            "h4_reading": matched,
            "h4_orbit": None,
            "explicit_orbit": None,
            "passed": False,
        }
        if matched is not None:
            entry["h4_orbit"] = _orbit_summary(h4, fmap.source_lattice(store), readings[matched])
            if _is_full_cycle(entry["h4_orbit"], h4.coxeter_number):
                orbit = _orbit_summary(e8, fmap.target_lattice(store), explicit)
                entry["explicit_orbit"] = orbit
                entry["passed"] = _is_full_cycle(orbit, e8.coxeter_number)
        results.append(entry)
    return results
