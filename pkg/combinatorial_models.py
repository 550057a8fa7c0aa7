"""
Combinatorial Models - Cycle partitions, noncrossing closures and antiexceedances
Fast type A/B/D machinery for the standard Coxeter elements
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Sequence, Set, Tuple

from group_engine import CoxeterSpec, CoxeterType, Element, GroupContext, ProductConvention

Block = Tuple[int, ...]


@dataclass
class CyclePartition:
    """Cycles (as ordered blocks) partitioning [n] or +-[n], 1-based labels"""
    kind: str
    n: int
    blocks: List[Block]
    zero_block: bool = False

    def ground_set(self) -> List[int]:
        if self.kind == "A":
            return list(range(1, self.n + 1))
        return [-i for i in range(1, self.n + 1)] + list(range(1, self.n + 1))

    def block_of(self) -> Dict[int, int]:
        return {x: k for k, block in enumerate(self.blocks) for x in block}

    def normalized(self) -> List[frozenset]:
        """Set partition view: cycle order dropped, balanced cycles merged into one zero block"""
        zero = set()
        blocks = []
        for block in self.blocks:
            if len(block) > 1 and -block[0] in block:
                zero.update(block)
            else:
                blocks.append(frozenset(block))
        if zero:
            blocks.append(frozenset(zero))
        return sorted(blocks, key=lambda b: sorted(b))

    def is_negation_closed(self) -> bool:
        blocks = {frozenset(b) for b in self.blocks}
        return all(frozenset(-x for x in b) in blocks for b in blocks)


@dataclass
class AexcStat:
    """Antiexceedance positions and the non-singleton cycle count"""
    aexc_set: Set[int] = field(default_factory=set)
    cyc_gt1: int = 0

    @property
    def aexc(self) -> int:
        return len(self.aexc_set)


def _model_kind(ctx: GroupContext) -> str:
    if ctx.backend.kind == "perm":
        return "A"
    if ctx.backend.kind == "signed":
        return ctx.cox_type.value
    raise ValueError(f"Unsupported format: {ctx.label} has no cycle model")


def supports_closure(ctx: GroupContext) -> bool:
    """True when ctx has a typed backend and its standard Coxeter element"""
    if ctx.backend.kind not in ("perm", "signed"):
        return False
    return ctx.c == ctx.with_coxeter(CoxeterSpec()).c


# --- conversions -----------------------------------------------------------

def partition_of(ctx: GroupContext, w: Element) -> CyclePartition:
    """Cycle partition of a typed element"""
    kind = _model_kind(ctx)
    if kind == "A":
        blocks = [tuple(x + 1 for x in cycle) for cycle in ctx.backend.cycles(w)]
        return CyclePartition("A", len(w), blocks)
    cycles = ctx.backend.cycles(w)
    zero = any(ctx.backend.is_balanced(cycle) for cycle in cycles)
    return CyclePartition(kind, len(w), [tuple(cycle) for cycle in cycles], zero)


def element_from_cycles(ctx: GroupContext, blocks: Iterable[Block]) -> Element:
    """The element whose cycles are the given blocks, each read x -> next entry"""
    kind = _model_kind(ctx)
    n = ctx.backend.element_width()
    image: Dict[int, int] = {}
    for block in blocks:
        for k, x in enumerate(block):
            image[x] = block[(k + 1) % len(block)]
    if kind == "A":
        return tuple(image.get(i, i) - 1 for i in range(1, n + 1))
    return tuple(image.get(i, i) for i in range(1, n + 1))


def element_from_partition(ctx: GroupContext, partition: CyclePartition) -> Element:
    return element_from_cycles(ctx, partition.blocks)


# --- circle geometry -------------------------------------------------------

def circle_position(kind: str, n: int, x: int) -> int:
    """Position of a label on the circle read clockwise from the first point"""
    if kind == "A":
        return x - 1
    if kind == "B":
        return abs(x) - 1 if x < 0 else n + x - 1
    # type D: +-[n-1] on the circle, +-n at the center
    if abs(x) == n:
        raise ValueError(f"{x} sits at the center of the type D diagram")
    return abs(x) - 1 if x < 0 else n - 1 + x - 1


def circle_size(kind: str, n: int) -> int:
    return {"A": n, "B": 2 * n, "D": 2 * n - 2}[kind]


def _arc_of(sorted_positions: List[int], p: int) -> int:
    return bisect_left(sorted_positions, p) % len(sorted_positions)


def blocks_cross(a: Sequence[int], b: Sequence[int]) -> bool:
    """Two sets of circle positions interleave"""
    if len(a) < 2 or len(b) < 2:
        return False
    a = sorted(a)
    return len({_arc_of(a, p) for p in b}) > 1


def _largest_gap_start(positions: Sequence[int], size: int) -> Tuple[int, int]:
    """(point following the largest clockwise gap, length of that gap)"""
    ordered = sorted(positions)
    best_start, best_gap = ordered[0], 0
    for k, p in enumerate(ordered):
        q = ordered[(k + 1) % len(ordered)]
        gap = (q - p) % size or size
        if gap > best_gap:
            best_start, best_gap = q, gap
    return best_start, best_gap


def _inside_minimal_arc(arc: Sequence[int], p: int, size: int) -> bool:
    """p lies strictly inside the short arc spanned by a block in an open semicircle"""
    start, gap = _largest_gap_start(arc, size)
    span = size - gap
    offset = (p - start) % size
    return 0 < offset < span and p not in arc


class _UnionFind:
    def __init__(self, labels: Iterable[int]):
        self.parent = {x: x for x in labels}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True

    def groups(self) -> Dict[int, List[int]]:
        result: Dict[int, List[int]] = {}
        for x in self.parent:
            result.setdefault(self.find(x), []).append(x)
        return result


def _seed(partition: CyclePartition) -> _UnionFind:
    uf = _UnionFind(partition.ground_set())
    for block in partition.blocks:
        for x in block[1:]:
            uf.union(block[0], x)
    return uf


def _ordered_block(block: Iterable[int], position: Callable[[int], int]) -> Block:
    return tuple(sorted(block, key=position))


def _close_circle(uf: _UnionFind, position: Callable[[int], int], symmetric: bool):
    """Merge crossing blocks until no two blocks cross"""
    changed = True
    while changed:
        changed = False
        groups = list(uf.groups().values())
        positions = [[position(x) for x in g] for g in groups]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if blocks_cross(positions[i], positions[j]):
                    uf.union(groups[i][0], groups[j][0])
                    if symmetric:
                        uf.union(-groups[i][0], -groups[j][0])
                    changed = True
                    break
            if changed:
                break


# --- closures --------------------------------------------------------------

def nc_closure_A(partition: CyclePartition) -> CyclePartition:
    """Finest noncrossing partition of [n] coarser than the input"""
    n = partition.n
    uf = _seed(partition)
    position = lambda x: circle_position("A", n, x)  # noqa: E731
    _close_circle(uf, position, symmetric=False)
    blocks = [_ordered_block(g, position) for g in uf.groups().values()]
    return CyclePartition("A", n, sorted(blocks, key=lambda b: b[0]))


def nc_closure_B(partition: CyclePartition) -> CyclePartition:
    """Centrally symmetric noncrossing closure on the 2n-point circle"""
    if not partition.is_negation_closed():
        raise ValueError("Type B closure needs a negation-closed partition")
    n = partition.n
    uf = _seed(partition)
    position = lambda x: circle_position("B", n, x)  # noqa: E731
    _close_circle(uf, position, symmetric=True)
    blocks = [_ordered_block(g, position) for g in uf.groups().values()]
    zero = any(-b[0] in b for b in blocks)
    return CyclePartition("B", n, sorted(blocks, key=lambda b: position(b[0])), zero)


def _d_block_order(block: Sequence[int], n: int) -> Block:
    """Cycle order of a type D block: circle points clockwise, center labels last"""
    size = circle_size("D", n)
    circle = [x for x in block if abs(x) != n]
    center = [x for x in block if abs(x) == n]
    if not circle:
        return tuple(center)
    position = {x: circle_position("D", n, x) for x in circle}
    if len(center) == 2:
        # zero block: balanced cycle on the circle; +-n form their own cycle
        return tuple(sorted(circle, key=position.get))
    if center:
        start, _ = _largest_gap_start(list(position.values()), size)
        ordered = sorted(circle, key=lambda x: (position[x] - start) % size)
        return tuple(ordered) + tuple(center)
    return tuple(sorted(circle, key=position.get))


def nc_closure_D(partition: CyclePartition) -> CyclePartition:
    """
    Type D noncrossing closure with +-n at the center of a (2n-2)-point circle

    Blocks meeting their negation are merged with +-n into the zero block.
    A block containing a center label conflicts with a circle-only block when
    one of its circle points lies strictly inside that block's short arc.

    Raises:
        ValueError: not negation-closed, or an odd number of balanced cycles
    """
    if not partition.is_negation_closed():
        raise ValueError("Type D closure needs a negation-closed partition")
    n = partition.n
    balanced = [b for b in partition.blocks if -b[0] in b]
    if len(balanced) % 2:
        raise ValueError("Type D partitions have an even number of balanced blocks")

    size = circle_size("D", n)
    uf = _seed(partition)

    def circle_points(group):
        return [circle_position("D", n, x) for x in group if abs(x) != n]

    changed = True
    while changed:
        changed = False
        groups = list(uf.groups().values())
        for g in groups:
            members = set(g)
            if any(-x in members for x in g) and not (n in members and -n in members):
                uf.union(g[0], n)
                uf.union(g[0], -n)
                changed = True
                break
            has_center = n in members or -n in members
            if has_center and not (n in members and -n in members):
                points = circle_points(g)
                if points and _largest_gap_start(points, size)[1] <= size // 2:
                    uf.union(g[0], -g[0])
                    changed = True
                    break
        if changed:
            continue
        positions = [circle_points(g) for g in groups]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if blocks_cross(positions[i], positions[j]) or _center_conflict(groups[i], groups[j], positions[i], positions[j], n, size):
                    uf.union(groups[i][0], groups[j][0])
                    uf.union(-groups[i][0], -groups[j][0])
                    changed = True
                    break
            if changed:
                break

    blocks = []
    zero = False
    for g in uf.groups().values():
        ordered = _d_block_order(g, n)
        if n in g and -n in g:
            zero = True
            circle = tuple(x for x in ordered if abs(x) != n)
            if circle:
                blocks.append(circle)
            blocks.append((n, -n))
        else:
            blocks.append(ordered)
    blocks.sort(key=lambda b: (abs(b[0]) == n, b[0] > 0, abs(b[0])))
    return CyclePartition("D", n, blocks, zero)


def _center_conflict(a: List[int], b: List[int], pa: List[int], pb: List[int], n: int, size: int) -> bool:
    a_center = n in a or -n in a
    b_center = n in b or -n in b
    if a_center == b_center:
        return False
    center_points, arc = (pa, pb) if a_center else (pb, pa)
    if len(arc) < 2 or _largest_gap_start(arc, size)[1] <= size // 2:
        return False
    return any(_inside_minimal_arc(arc, p, size) for p in center_points)


def nc_closure(partition: CyclePartition) -> CyclePartition:
    return _CLOSURES[partition.kind](partition)


def closure_projection(ctx: GroupContext, w: Element) -> Element:
    """pi_T(w) through the noncrossing set-partition model"""
    return element_from_partition(ctx, nc_closure(partition_of(ctx, w)))


# --- reflection tests ------------------------------------------------------

def reflections_below_D(ctx: GroupContext, w: Element, i: int, j: int) -> bool:
    """
    Whether (i j)(-i -j) lies below w in absolute order

    True when i and j share a cycle of w, or lie in two balanced cycles.
    """
    if i == j or i == -j:
        raise ValueError(f"Need i not in {{j, -j}}, got i={i}, j={j}")
    if ctx.cox_type is not CoxeterType.D or ctx.backend.kind != "signed":
        raise ValueError(f"Unsupported format: {ctx.label} is not a typed D_n context")
    cycle_of, balanced = ctx.backend.cycle_data(w)
    ci, cj = cycle_of[i], cycle_of[j]
    return ci == cj or (ci in balanced and cj in balanced)


def count_balanced(ctx: GroupContext, w: Element) -> int:
    _, balanced = ctx.backend.cycle_data(w)
    return len(balanced)


# --- antiexceedances -------------------------------------------------------

def antiexceedances(ctx: GroupContext, w: Element, domain: str = "signed") -> AexcStat:
    """
    Antiexceedances of a typed element

    Type A: i in [n] with i < w^-1(i). Type B/D: i with i before w^-1(i) in
    the order -1 < -2 < ... < -n < 1 < ... < n, over +-[n] ("signed") or
    over [n] ("positive").
    """
    kind = _model_kind(ctx)
    inverse = ctx.invert(w)
    if kind == "A":
        positions = {i + 1 for i in range(len(w)) if i < inverse[i]}
        cyc = sum(1 for cycle in ctx.backend.cycles(w) if len(cycle) > 1)
        return AexcStat(positions, cyc)
    n = len(w)
    points = [-i for i in range(1, n + 1)] + list(range(1, n + 1)) if domain == "signed" else list(range(1, n + 1))
    order = lambda x: circle_position("B", n, x)  # noqa: E731
    positions = {x for x in points if order(x) < order(ctx.backend.apply(inverse, x))}
    cyc = sum(1 for cycle in ctx.backend.cycles(w) if len(cycle) > 1)
    return AexcStat(positions, cyc)


@dataclass
class AexcLawReport:
    """Outcome of one antiexceedance identity over a set of elements"""
    name: str
    checked: int = 0
    failures: List[Element] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


def check_aexc_laws(
    ctx: GroupContext,
    elements: Iterable[Element],
    pop: Callable[[Element], Element],
    projection: Callable[[Element], Element],
    domain: str = "signed",
    failure_limit: int = 20,
) -> Dict[str, AexcLawReport]:
    """
    Test the antiexceedance identities on every element given

    Reports:
        count_by_projection: aexc(Pop w) = aexc(w) - cyc>1(pi_T(w))
        count_by_element:    aexc(Pop w) = aexc(w) - cyc>1(w)
        subset:              Aexc(Pop w) is contained in Aexc(w), only reported
                             when subset_law_applies(ctx)
    """
    names = ["count_by_projection", "count_by_element"]
    if subset_law_applies(ctx):
        names.append("subset")
    reports = {name: AexcLawReport(name) for name in names}
    for w in elements:
        before = antiexceedances(ctx, w, domain)
        after = antiexceedances(ctx, pop(w), domain)
        proj = antiexceedances(ctx, projection(w), domain)
        outcomes = {
            "count_by_projection": after.aexc == before.aexc - proj.cyc_gt1,
            "count_by_element": after.aexc == before.aexc - before.cyc_gt1,
            "subset": after.aexc_set <= before.aexc_set,
        }
        for name, report in reports.items():
            report.checked += 1
            if not outcomes[name] and len(report.failures) < failure_limit:
                report.failures.append(w)
    return reports


def subset_law_applies(ctx: GroupContext) -> bool:
    """The position-set inclusion is stated for products read right to left"""
    return ctx.convention is ProductConvention.RIGHT_TO_LEFT


# --- rendering -------------------------------------------------------------

def _label(x: int) -> str:
    return f"-{abs(x)}" if x < 0 else str(x)


def render_partition(partition: CyclePartition) -> str:
    """Text dump of a circular partition: circle order, then blocks clockwise"""
    kind, n = partition.kind, partition.n
    if kind == "D":
        circle = sorted((x for x in partition.ground_set() if abs(x) != n), key=lambda x: circle_position("D", n, x))
        center = f"center: {_label(-n)} {_label(n)}"
    else:
        circle = sorted(partition.ground_set(), key=lambda x: circle_position(kind, n, x))
        center = None
    lines = [f"{kind}{n} circle: " + " ".join(_label(x) for x in circle)]
    if center:
        lines.append(center)
    for block in partition.blocks:
        tag = " (zero)" if len(block) > 1 and -block[0] in block else ""
        lines.append("  {" + " ".join(_label(x) for x in block) + "}" + tag)
    return "\n".join(lines)


def is_noncrossing(partition: CyclePartition) -> bool:
    """Whether the closure leaves the partition unchanged"""
    return _CLOSURES[partition.kind](partition).normalized() == partition.normalized()


_CLOSURES = {"A": nc_closure_A, "B": nc_closure_B, "D": nc_closure_D}
