"""
Group Engine - Finite irreducible Coxeter groups with exact arithmetic
Root systems, element algebra, reflection length and absolute order
"""

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from utils.errors import BudgetExceededError, ContextMismatchError, UnsupportedGroupError
from utils.linalg import clear_denominators, nullspace
from utils.scalar import QuadraticScalar

# Elements are plain tuples: root images for the generic backend,
# one-line or signed permutations for A/B/D, (rotation, flip) for I2(m).
Element = tuple


class CoxeterType(Enum):
    """Families of finite irreducible Coxeter groups"""
    A = "A"
    B = "B"
    D = "D"
    E = "E"
    F = "F"
    H = "H"
    I2 = "I2"

    @classmethod
    def parse(cls, text: str) -> "CoxeterType":
        key = str(text).strip().upper()
        if key in ("I", "I2"):
            return cls.I2
        try:
            return cls(key)
        except ValueError:
            raise UnsupportedGroupError(f"Unsupported Coxeter type: {text}")


class ProductConvention(Enum):
    """Order in which the product uv applies its factors"""
    LEFT_TO_RIGHT = "left_to_right"  # apply u, then v
    RIGHT_TO_LEFT = "right_to_left"  # uv = u o v


class CoxeterKind(Enum):
    """How the Coxeter element of a context is chosen"""
    STANDARD = "standard"
    BIPARTITE = "bipartite"
    WORD = "word"


@dataclass(frozen=True)
class CoxeterSpec:
    """Choice of Coxeter element; word entries are 0-based simple indices"""
    kind: CoxeterKind = CoxeterKind.STANDARD
    word: Tuple[int, ...] = ()

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "CoxeterSpec":
        return cls(CoxeterKind.WORD, tuple(word))

    @classmethod
    def parse(cls, text: Optional[str]) -> "CoxeterSpec":
        """
        Parse "standard", "bipartite" or an explicit 1-based word

        Accepted word forms: "word:1 3 2", "1,3,2", "s1 s3 s2".
        """
        if not text or text.strip().lower() == "standard":
            return cls()
        lowered = text.strip().lower()
        if lowered == "bipartite":
            return cls(CoxeterKind.BIPARTITE)
        if lowered.startswith("word:"):
            lowered = lowered[5:]
        tokens = lowered.replace(",", " ").replace("s", " ").split()
        try:
            word = tuple(int(tok) - 1 for tok in tokens)
        except ValueError:
            raise ValueError(f"Invalid Coxeter element specification: {text}")
        if not word or min(word) < 0:
            raise ValueError(f"Invalid Coxeter element specification: {text}")
        return cls.from_word(word)


_EXCEPTIONAL_DEGREES = {
    (CoxeterType.E, 6): (2, 5, 6, 8, 9, 12),
    (CoxeterType.E, 7): (2, 6, 8, 10, 12, 14, 18),
    (CoxeterType.E, 8): (2, 8, 12, 14, 18, 20, 24, 30),
    (CoxeterType.F, 4): (2, 6, 8, 12),
    (CoxeterType.H, 3): (2, 6, 10),
    (CoxeterType.H, 4): (2, 12, 20, 30),
}

_E_EDGES = ((0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3))


def degrees_for(cox_type: CoxeterType, rank: int, m: Optional[int] = None) -> Tuple[int, ...]:
    """Invariant degrees d_1 <= ... <= d_n"""
    if cox_type is CoxeterType.A:
        return tuple(range(2, rank + 2))
    if cox_type is CoxeterType.B:
        return tuple(2 * i for i in range(1, rank + 1))
    if cox_type is CoxeterType.D:
        return tuple(sorted([2 * i for i in range(1, rank)] + [rank]))
    if cox_type is CoxeterType.I2:
        return (2, m)
    try:
        return _EXCEPTIONAL_DEGREES[(cox_type, rank)]
    except KeyError:
        raise UnsupportedGroupError(f"Unsupported type/rank pair: {cox_type.value}{rank}")


def _diagram(cox_type: CoxeterType, rank: int) -> Tuple[List[Fraction], List[Tuple[int, int, int]]]:
    """Squared root lengths and labelled edges (i, j, m_ij) in Bourbaki numbering"""
    norms = [Fraction(2)] * rank
    if cox_type is CoxeterType.A:
        edges = [(i, i + 1, 3) for i in range(rank - 1)]
    elif cox_type is CoxeterType.B:
        edges = [(i, i + 1, 3) for i in range(rank - 2)] + [(rank - 2, rank - 1, 4)]
        norms[rank - 1] = Fraction(1)
    elif cox_type is CoxeterType.D:
        edges = [(i, i + 1, 3) for i in range(rank - 2)] + [(rank - 3, rank - 1, 3)]
    elif cox_type is CoxeterType.E:
        edges = [(i, j, 3) for i, j in _E_EDGES if i < rank and j < rank]
    elif cox_type is CoxeterType.F:
        edges = [(0, 1, 3), (1, 2, 4), (2, 3, 3)]
        norms[2] = norms[3] = Fraction(1)
    elif cox_type is CoxeterType.H:
        edges = [(0, 1, 5)] + [(i, i + 1, 3) for i in range(1, rank - 1)]
    else:
        raise UnsupportedGroupError(f"No root system for type {cox_type.value}")
    return norms, edges


def gram_matrix(cox_type: CoxeterType, rank: int) -> List[List]:
    """W-invariant bilinear form on the simple roots"""
    norms, edges = _diagram(cox_type, rank)
    quadratic = cox_type is CoxeterType.H
    zero = QuadraticScalar(0) if quadratic else Fraction(0)
    gram = [[zero] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = QuadraticScalar(norms[i]) if quadratic else norms[i]
    for i, j, m in edges:
        if m == 3:
            value = -norms[i] / 2
        elif m == 4:
            value = Fraction(-1)
        else:
            value = -QuadraticScalar.golden_ratio()
        if quadratic:
            value = QuadraticScalar.coerce(value)
        gram[i][j] = gram[j][i] = value
    return gram


def _flip(code: int, n_roots: int) -> int:
    return code + n_roots if code < n_roots else code - n_roots


def compose_root_images(f: Element, g: Element, n_roots: int) -> Element:
    """Function composition f o g of signed root permutations"""
    return tuple(f[x] if x < n_roots else _flip(f[x - n_roots], n_roots) for x in g)


class RootSystem:
    """Positive roots in simple-root coordinates, closed under the simple reflections"""

    MAX_ROOTS = 4096

    def __init__(self, gram: List[List], quadratic: bool = False):
        self.rank = len(gram)
        self.quadratic = quadratic
        self.to_field = QuadraticScalar.coerce if quadratic else Fraction
        self.gram = gram
        self.cartan = [
            [self._normalize(2 * gram[i][j] / gram[i][i]) for j in range(self.rank)]
            for i in range(self.rank)
        ]
        self.positive_roots: List[tuple] = []
        self.index: Dict[tuple, int] = {}
        self._parent: List[Optional[Tuple[int, int]]] = []
        self._close()
        self.n_roots = len(self.positive_roots)
        self.simple_images = [self._simple_image(i) for i in range(self.rank)]
        self.reflection_images = self._build_reflections()

        # scaled form so that orthogonality tests stay in integers for crystallographic types
        scale = 1 if quadratic else 2
        form = [[self._normalize(scale * gram[i][j]) for j in range(self.rank)] for i in range(self.rank)]
        self.root_forms = [
            tuple(sum(beta[i] * form[i][k] for i in range(self.rank)) for k in range(self.rank))
            for beta in self.positive_roots
        ]

    def _normalize(self, value):
        if self.quadratic:
            return QuadraticScalar.coerce(value)
        value = Fraction(value)
        return int(value) if value.denominator == 1 else value

    def _reflect(self, i: int, beta: tuple) -> tuple:
        coefficient = sum(beta[j] * self.cartan[i][j] for j in range(self.rank))
        image = list(beta)
        image[i] = self._normalize(image[i] - coefficient)
        return tuple(image)

    def _add(self, beta: tuple, parent: Optional[Tuple[int, int]]):
        self.index[beta] = len(self.positive_roots)
        self.positive_roots.append(beta)
        self._parent.append(parent)

    def _close(self):
        for i in range(self.rank):
            self._add(tuple(self._normalize(1 if j == i else 0) for j in range(self.rank)), None)
        k = 0
        while k < len(self.positive_roots):
            beta = self.positive_roots[k]
            for i in range(self.rank):
                if k == i:
                    continue
                gamma = self._reflect(i, beta)
                if gamma not in self.index:
                    self._add(gamma, (i, k))
            if len(self.positive_roots) > self.MAX_ROOTS:
                raise UnsupportedGroupError("Root closure does not terminate; diagram is not of finite type")
            k += 1

    def _simple_image(self, i: int) -> Element:
        images = []
        for k, beta in enumerate(self.positive_roots):
            if k == i:
                images.append(i + self.n_roots)
                continue
            gamma = self._reflect(i, beta)
            if gamma not in self.index:
                raise UnsupportedGroupError(f"Simple reflection s{i + 1} does not permute the positive roots")
            images.append(self.index[gamma])
        return tuple(images)

    def _build_reflections(self) -> List[Element]:
        reflections: List[Element] = list(self.simple_images)
        for k in range(self.rank, self.n_roots):
            i, parent = self._parent[k]
            s = self.simple_images[i]
            conjugated = compose_root_images(s, compose_root_images(reflections[parent], s, self.n_roots), self.n_roots)
            reflections.append(conjugated)
        return reflections

    def root_vector(self, code: int) -> tuple:
        """Coordinates of the signed root with the given code"""
        if code < self.n_roots:
            return self.positive_roots[code]
        return tuple(-x for x in self.positive_roots[code - self.n_roots])

    def fixed_space(self, w: Element) -> List[list]:
        """Basis of Fix(w) = ker(M_w - I)"""
        columns = [self.root_vector(w[j]) for j in range(self.rank)]
        matrix = [
            [columns[j][r] - (1 if r == j else 0) for j in range(self.rank)]
            for r in range(self.rank)
        ]
        basis = nullspace(matrix, self.to_field)
        if not self.quadratic:
            basis = [clear_denominators(vec) for vec in basis]
        return basis

    def reflection_length(self, w: Element) -> int:
        return self.rank - len(self.fixed_space(w))

    def reflections_below(self, w: Element) -> int:
        """Bitset of reflections whose root lies in Mov(w) = Fix(w)^perp"""
        basis = self.fixed_space(w)
        if not basis:
            return (1 << self.n_roots) - 1
        if len(basis) == self.rank:
            return 0
        bits = 0
        r = self.rank
        for k, form in enumerate(self.root_forms):
            if all(sum(form[t] * vec[t] for t in range(r)) == 0 for vec in basis):
                bits |= 1 << k
        return bits


def _epsilon_simple_roots(cox_type: CoxeterType, rank: int) -> List[tuple]:
    """Simple roots of the classical types in epsilon coordinates"""
    width = rank + 1 if cox_type is CoxeterType.A else rank

    def unit(*pairs):
        vec = [0] * width
        for position, value in pairs:
            vec[position] = value
        return tuple(vec)

    simple = [unit((i, 1), (i + 1, -1)) for i in range(width - 1)]
    if cox_type is CoxeterType.B:
        simple.append(unit((rank - 1, 1)))
    elif cox_type is CoxeterType.D:
        simple.append(unit((rank - 2, 1), (rank - 1, 1)))
    return simple


def _epsilon_roots(roots: RootSystem, simple_eps: List[tuple]) -> List[tuple]:
    width = len(simple_eps[0])
    return [
        tuple(sum(beta[j] * simple_eps[j][p] for j in range(roots.rank)) for p in range(width))
        for beta in roots.positive_roots
    ]


class RootBackend:
    """Generic backend: elements are signed permutations of positive-root indices"""

    kind = "root"

    def __init__(self, roots: RootSystem):
        self.roots = roots
        self.n_roots = roots.n_roots
        self.identity: Element = tuple(range(self.n_roots))
        self.generators = list(roots.simple_images)
        self.reflections = list(roots.reflection_images)

    def compose(self, f: Element, g: Element) -> Element:
        return compose_root_images(f, g, self.n_roots)

    def inverse(self, w: Element) -> Element:
        n = self.n_roots
        inv = [0] * n
        for k, x in enumerate(w):
            if x < n:
                inv[x] = k
            else:
                inv[x - n] = k + n
        return tuple(inv)

    def reflection_length(self, w: Element) -> int:
        return self.roots.reflection_length(w)

    def reflections_below(self, w: Element) -> int:
        return self.roots.reflections_below(w)

    def to_root_image(self, w: Element) -> Element:
        return w

    def element_width(self) -> int:
        return self.n_roots


class PermutationBackend:
    """Type A_{n-1} as permutations of n points in one-line notation (0-based)"""

    kind = "perm"

    def __init__(self, roots: RootSystem, eps_roots: List[tuple]):
        self.roots = roots
        self.n_points = roots.rank + 1
        self.identity: Element = tuple(range(self.n_points))
        self.pairs: List[Tuple[int, int]] = []
        for vec in eps_roots:
            i = vec.index(1)
            j = vec.index(-1)
            self.pairs.append((i, j))
        self.pair_index = {pair: k for k, pair in enumerate(self.pairs)}
        self.reflections = [self._transposition(i, j) for i, j in self.pairs]
        self.generators = self.reflections[: roots.rank]

    def _transposition(self, i: int, j: int) -> Element:
        w = list(self.identity)
        w[i], w[j] = j, i
        return tuple(w)

    def compose(self, f: Element, g: Element) -> Element:
        return tuple(f[x] for x in g)

    def inverse(self, w: Element) -> Element:
        inv = [0] * len(w)
        for i, x in enumerate(w):
            inv[x] = i
        return tuple(inv)

    def cycles(self, w: Element) -> List[Tuple[int, ...]]:
        """Cycles over 0-based points, each starting at its smallest entry"""
        seen = [False] * len(w)
        result = []
        for start in range(len(w)):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = w[x]
            result.append(tuple(cycle))
        return result

    def cycle_ids(self, w: Element) -> List[int]:
        ids = [-1] * len(w)
        for label, cycle in enumerate(self.cycles(w)):
            for x in cycle:
                ids[x] = label
        return ids

    def reflection_length(self, w: Element) -> int:
        return self.n_points - len(self.cycles(w))

    def reflections_below(self, w: Element) -> int:
        ids = self.cycle_ids(w)
        bits = 0
        for k, (i, j) in enumerate(self.pairs):
            if ids[i] == ids[j]:
                bits |= 1 << k
        return bits

    def to_root_image(self, w: Element) -> Element:
        n = len(self.pairs)
        image = []
        for i, j in self.pairs:
            a, b = w[i], w[j]
            image.append(self.pair_index[(a, b)] if a < b else self.pair_index[(b, a)] + n)
        return tuple(image)

    def element_width(self) -> int:
        return self.n_points


class SignedPermutationBackend:
    """Types B_n and D_n as signed permutations w(1..n) of the set +-[n]"""

    kind = "signed"

    def __init__(self, roots: RootSystem, eps_roots: List[tuple], cox_type: CoxeterType):
        self.roots = roots
        self.cox_type = cox_type
        self.n = roots.rank
        self.identity: Element = tuple(range(1, self.n + 1))
        self.eps_roots = eps_roots
        self.eps_index = {vec: k for k, vec in enumerate(eps_roots)}
        # each reflection as the signed pair (a, b) of (a b)(-a -b), or (a, None) for (a -a)
        self.reflection_pairs: List[Tuple[int, Optional[int]]] = []
        for vec in eps_roots:
            support = [p for p, x in enumerate(vec) if x]
            if len(support) == 1:
                self.reflection_pairs.append((support[0] + 1, None))
            else:
                i, j = support
                sign = 1 if vec[j] < 0 else -1
                self.reflection_pairs.append((i + 1, sign * (j + 1)))
        self.reflections = [self._reflection(pair) for pair in self.reflection_pairs]
        self.generators = self.reflections[: self.n]

    def _reflection(self, pair: Tuple[int, Optional[int]]) -> Element:
        w = list(self.identity)
        a, b = pair
        if b is None:
            w[a - 1] = -a
        else:
            # a -> b and b -> a, extended by w(-x) = -w(x)
            self._set(w, a, b)
            self._set(w, b, a)
        return tuple(w)

    @staticmethod
    def _set(w: list, x: int, y: int):
        if x > 0:
            w[x - 1] = y
        else:
            w[-x - 1] = -y

    @staticmethod
    def apply(w: Element, x: int) -> int:
        y = w[abs(x) - 1]
        return y if x > 0 else -y

    def compose(self, f: Element, g: Element) -> Element:
        return tuple(f[y - 1] if y > 0 else -f[-y - 1] for y in g)

    def inverse(self, w: Element) -> Element:
        inv = [0] * len(w)
        for i, y in enumerate(w):
            if y > 0:
                inv[y - 1] = i + 1
            else:
                inv[-y - 1] = -(i + 1)
        return tuple(inv)

    def cycles(self, w: Element) -> List[Tuple[int, ...]]:
        """Cycles of w acting on +-[n]"""
        seen = set()
        result = []
        for start in [-i for i in range(1, self.n + 1)] + list(range(1, self.n + 1)):
            if start in seen:
                continue
            cycle = []
            x = start
            while x not in seen:
                seen.add(x)
                cycle.append(x)
                x = self.apply(w, x)
            result.append(tuple(cycle))
        return result

    @staticmethod
    def is_balanced(cycle: Sequence[int]) -> bool:
        return -cycle[0] in cycle

    def reflection_length(self, w: Element) -> int:
        unbalanced = 0
        balanced = 0
        for cycle in self.cycles(w):
            if self.is_balanced(cycle):
                balanced += len(cycle) // 2
            else:
                unbalanced += len(cycle) - 1
        return unbalanced // 2 + balanced

    def cycle_data(self, w: Element) -> Tuple[Dict[int, int], set]:
        """Cycle label per point of +-[n] and the set of balanced cycle labels"""
        cycle_of: Dict[int, int] = {}
        balanced = set()
        for label, cycle in enumerate(self.cycles(w)):
            for x in cycle:
                cycle_of[x] = label
            if self.is_balanced(cycle):
                balanced.add(label)
        return cycle_of, balanced

    def reflections_below(self, w: Element) -> int:
        cycle_of, balanced = self.cycle_data(w)
        bits = 0
        for k, (a, b) in enumerate(self.reflection_pairs):
            if b is None:
                below = cycle_of[a] in balanced
            else:
                ca, cb = cycle_of[a], cycle_of[b]
                below = ca == cb or (ca in balanced and cb in balanced)
            if below:
                bits |= 1 << k
        return bits

    def to_root_image(self, w: Element) -> Element:
        n_roots = len(self.eps_roots)
        image = []
        for vec in self.eps_roots:
            out = [0] * self.n
            for i, x in enumerate(vec):
                if x:
                    y = w[i]
                    out[abs(y) - 1] = x if y > 0 else -x
            out = tuple(out)
            if out in self.eps_index:
                image.append(self.eps_index[out])
            else:
                image.append(self.eps_index[tuple(-x for x in out)] + n_roots)
        return tuple(image)

    def element_width(self) -> int:
        return self.n


class DihedralBackend:
    """I2(m) as pairs (k, f): the map r^k o s^f with r a rotation by 2*pi/m"""

    kind = "dihedral"

    def __init__(self, m: int):
        self.m = m
        self.identity: Element = (0, 0)
        self.reflections = [(k, 1) for k in range(m)]
        self.generators = [(0, 1), (1, 1)]

    def compose(self, f: Element, g: Element) -> Element:
        a, s = f
        b, t = g
        return ((a + (b if s == 0 else -b)) % self.m, s ^ t)

    def inverse(self, w: Element) -> Element:
        k, f = w
        return w if f else ((-k) % self.m, 0)

    def reflection_length(self, w: Element) -> int:
        if w[1]:
            return 1
        return 0 if w[0] == 0 else 2

    def reflections_below(self, w: Element) -> int:
        k, f = w
        if f:
            return 1 << k
        return 0 if k == 0 else (1 << self.m) - 1

    def function_word(self, w: Element) -> List[int]:
        """A word in the generators whose composition (rightmost first) is w"""
        k, f = w
        # r = t o s and r^-1 = s o t
        if not f:
            if k == 0:
                return []
            return [1, 0] * k if k <= self.m - k else [0, 1] * (self.m - k)
        if k == 0:
            return [0]
        via_t = [1, 0] * (k - 1) + [1]
        via_s = [0, 1] * (self.m - k) + [0]
        return via_t if len(via_t) <= len(via_s) else via_s

    def element_width(self) -> int:
        return 2


@dataclass(frozen=True)
class GroupContext:
    """A built finite Coxeter group with a chosen Coxeter element"""
    cox_type: CoxeterType
    rank: int
    m: Optional[int]
    convention: ProductConvention
    backend: object
    roots: Optional[RootSystem]
    degrees: Tuple[int, ...]
    coxeter_number: int
    group_order: int
    c: Element
    c_word: Tuple[int, ...]
    large: bool = False

    @property
    def label(self) -> str:
        if self.cox_type is CoxeterType.I2:
            return f"I2({self.m})"
        return f"{self.cox_type.value}{self.rank}"

    @property
    def identity(self) -> Element:
        return self.backend.identity

    @property
    def simple_generators(self) -> List[Element]:
        return self.backend.generators

    @property
    def reflections(self) -> List[Element]:
        return self.backend.reflections

    @property
    def n_reflections(self) -> int:
        return len(self.backend.reflections)

    @property
    def catalan_number(self) -> int:
        """W-Catalan number prod (h + d_i) / d_i"""
        h = self.coxeter_number
        return int(prod(Fraction(h + d, d) for d in self.degrees))

    def _check(self, w: Element):
        if len(w) != self.backend.element_width():
            raise ContextMismatchError(f"Element {w!r} does not belong to {self.label}")

    def multiply(self, u: Element, v: Element) -> Element:
        """Product uv under the context's convention"""
        if len(u) != len(v):
            raise ContextMismatchError(f"Cannot multiply elements of different shapes in {self.label}")
        if self.convention is ProductConvention.RIGHT_TO_LEFT:
            return self.backend.compose(u, v)
        return self.backend.compose(v, u)

    def product(self, elements: Sequence[Element]) -> Element:
        result = self.identity
        for w in elements:
            result = self.multiply(result, w)
        return result

    def invert(self, w: Element) -> Element:
        return self.backend.inverse(w)

    def conjugate(self, w: Element, g: Element) -> Element:
        """g w g^-1"""
        return self.multiply(self.multiply(g, w), self.invert(g))

    def power(self, w: Element, k: int) -> Element:
        base = w if k >= 0 else self.invert(w)
        result = self.identity
        for _ in range(abs(k)):
            result = self.multiply(result, base)
        return result

    def order_of(self, w: Element) -> int:
        order = 1
        x = w
        while x != self.identity:
            x = self.multiply(x, w)
            order += 1
        return order

    def reflection_length(self, w: Element) -> int:
        self._check(w)
        return self.backend.reflection_length(w)

    def reflections_below(self, w: Element) -> int:
        """ReflectionSet of w as an integer bitset indexed like self.reflections"""
        self._check(w)
        return self.backend.reflections_below(w)

    def leq_abs(self, v: Element, w: Element) -> bool:
        """v <=_T w in absolute order"""
        return self.reflection_length(v) + self.reflection_length(self.multiply(self.invert(v), w)) == self.reflection_length(w)

    def word_element(self, word: Sequence[int]) -> Element:
        """Product of simple generators (0-based indices) under the convention"""
        return self.product([self.simple_generators[i] for i in word])

    def function_word(self, w: Element) -> List[int]:
        """Simple indices a_1..a_k with w = s_{a_1} o ... o s_{a_k}"""
        if self.backend.kind == "dihedral":
            return self.backend.function_word(w)
        roots = self.roots
        n_roots = roots.n_roots
        x = self.backend.to_root_image(w)
        letters = []
        while True:
            descent = next((i for i in range(self.rank) if x[i] >= n_roots), None)
            if descent is None:
                break
            x = compose_root_images(x, roots.simple_images[descent], n_roots)
            letters.append(descent)
        return letters[::-1]

    def word_of(self, w: Element) -> List[int]:
        """A word in the simple generators whose product is w"""
        word = self.function_word(w)
        if self.convention is ProductConvention.LEFT_TO_RIGHT:
            return word[::-1]
        return word

    def coxeter_length(self, w: Element) -> int:
        """Length in the simple generators (number of inversions)"""
        if self.backend.kind == "dihedral":
            return len(self.function_word(w))
        n_roots = self.roots.n_roots
        return sum(1 for x in self.backend.to_root_image(w) if x >= n_roots)

    def geometric_reflection_length(self, w: Element) -> int:
        """Reflection length from the matrix rank, bypassing typed formulas"""
        return self.roots.reflection_length(self.backend.to_root_image(w))

    def geometric_reflections_below(self, w: Element) -> int:
        return self.roots.reflections_below(self.backend.to_root_image(w))

    def coxeter_matrix(self) -> List[List[int]]:
        gens = self.simple_generators
        n = len(gens)
        return [[1 if i == j else self.order_of(self.multiply(gens[i], gens[j])) for j in range(n)] for i in range(n)]

    def with_coxeter(self, spec: CoxeterSpec) -> "GroupContext":
        """Same group, different Coxeter element"""
        word = coxeter_word(self, spec)
        return replace(self, c=self.word_element(word), c_word=tuple(word))

    def format(self, w: Element) -> str:
        return format_element(self, w)


def bipartition(ctx: GroupContext) -> Tuple[List[int], List[int]]:
    """2-colouring (S+, S-) of the Coxeter diagram, S+ containing node 0"""
    matrix = ctx.coxeter_matrix()
    n = len(matrix)
    colour = [None] * n
    colour[0] = 0
    queue = [0]
    while queue:
        i = queue.pop(0)
        for j in range(n):
            if j != i and matrix[i][j] >= 3 and colour[j] is None:
                colour[j] = 1 - colour[i]
                queue.append(j)
    plus = [i for i in range(n) if colour[i] == 0]
    minus = [i for i in range(n) if colour[i] == 1]
    return plus, minus


def coxeter_word(ctx: GroupContext, spec: CoxeterSpec) -> Tuple[int, ...]:
    """Word in the simple generators realising the requested Coxeter element"""
    n = len(ctx.simple_generators)
    if spec.kind is CoxeterKind.STANDARD:
        # the linear map s_1 o s_2 o ... o s_n in either convention
        word = tuple(range(n))
        return word if ctx.convention is ProductConvention.RIGHT_TO_LEFT else word[::-1]
    if spec.kind is CoxeterKind.BIPARTITE:
        plus, minus = bipartition(ctx)
        return tuple(plus + minus)
    word = tuple(spec.word)
    if sorted(word) != list(range(n)):
        raise ValueError(f"Word {[i + 1 for i in word]} is not a Coxeter element of {ctx.label}: "
                         "every simple generator must appear exactly once")
    return word


def coxeter_element(ctx: GroupContext, spec: CoxeterSpec) -> Element:
    """The Coxeter element described by spec; its order is checked against h"""
    c = ctx.word_element(coxeter_word(ctx, spec))
    if ctx.order_of(c) != ctx.coxeter_number:
        raise ValueError(f"Element built from {spec} has order {ctx.order_of(c)}, expected {ctx.coxeter_number}")
    return c


def _validate_rank(cox_type: CoxeterType, rank: int):
    minimum = {CoxeterType.A: 1, CoxeterType.B: 2, CoxeterType.D: 3}
    if cox_type in minimum:
        if rank < minimum[cox_type]:
            raise UnsupportedGroupError(f"Unsupported type/rank pair: {cox_type.value}{rank}")
        return
    if cox_type is CoxeterType.I2:
        if rank < 2:
            raise UnsupportedGroupError(f"I2(m) needs m >= 2, got {rank}")
        return
    degrees_for(cox_type, rank)


def build_group(
    cox_type,
    rank_or_m: int,
    convention: ProductConvention = ProductConvention.LEFT_TO_RIGHT,
    coxeter: CoxeterSpec = CoxeterSpec(),
    backend: str = "auto",
) -> GroupContext:
    """
    Build a finite irreducible Coxeter group

    Args:
        cox_type: CoxeterType or its letter
        rank_or_m: Rank, or m for I2(m)
        convention: Product convention for multiply
        coxeter: Choice of Coxeter element
        backend: "auto" uses the typed models for A/B/D, "generic" forces root images

    Returns:
        GroupContext
    """
    if not isinstance(cox_type, CoxeterType):
        cox_type = CoxeterType.parse(cox_type)
    _validate_rank(cox_type, rank_or_m)

    if cox_type is CoxeterType.I2:
        m = rank_or_m
        degrees = degrees_for(cox_type, 2, m)
        engine = DihedralBackend(m)
        rank, roots = 2, None
    else:
        m = None
        rank = rank_or_m
        degrees = degrees_for(cox_type, rank)
        roots = RootSystem(gram_matrix(cox_type, rank), quadratic=cox_type is CoxeterType.H)
        typed = backend != "generic" and cox_type in (CoxeterType.A, CoxeterType.B, CoxeterType.D)
        if typed:
            eps_roots = _epsilon_roots(roots, _epsilon_simple_roots(cox_type, rank))
            if cox_type is CoxeterType.A:
                engine = PermutationBackend(roots, eps_roots)
            else:
                engine = SignedPermutationBackend(roots, eps_roots, cox_type)
        else:
            engine = RootBackend(roots)

    h = max(degrees)
    if len(engine.reflections) * 2 != rank * h:
        raise UnsupportedGroupError(f"{cox_type.value}{rank_or_m}: found {len(engine.reflections)} reflections, "
                                    f"expected {rank * h // 2}")

    ctx = GroupContext(
        cox_type=cox_type,
        rank=rank,
        m=m,
        convention=convention,
        backend=engine,
        roots=roots,
        degrees=tuple(degrees),
        coxeter_number=h,
        group_order=prod(degrees),
        c=engine.identity,
        c_word=(),
        large=cox_type is CoxeterType.E and rank >= 7,
    )
    word = coxeter_word(ctx, coxeter)
    ctx = replace(ctx, c=ctx.word_element(word), c_word=word)
    if ctx.order_of(ctx.c) != h:
        raise ValueError(f"Coxeter word {[i + 1 for i in word]} has order {ctx.order_of(ctx.c)}, expected {h}")
    return ctx


def generic_twin(ctx: GroupContext) -> GroupContext:
    """Root-image version of a typed context with the same Coxeter word"""
    if ctx.backend.kind == "root":
        return ctx
    if ctx.backend.kind == "dihedral":
        raise UnsupportedGroupError("I2(m) has no root-image backend")
    return build_group(ctx.cox_type, ctx.rank, ctx.convention, CoxeterSpec.from_word(ctx.c_word), backend="generic")


def enumerate_group(ctx: GroupContext, budget: Optional[int] = None, allow_large: bool = False) -> Iterator[Element]:
    """
    Every element exactly once, breadth-first by word length

    Args:
        ctx: Group context
        budget: Largest group order allowed (None for no cap)
        allow_large: Permit E7/E8 and orders above the budget

    Raises:
        BudgetExceededError: group too large for the configured budget
    """
    if not allow_large:
        if ctx.large:
            raise BudgetExceededError(f"{ctx.label} has order {ctx.group_order}; full enumeration needs --allow-large")
        if budget is not None and ctx.group_order > budget:
            raise BudgetExceededError(f"{ctx.label} has order {ctx.group_order}, above the budget {budget}")
    seen = {ctx.identity}
    frontier = [ctx.identity]
    yield ctx.identity
    gens = ctx.simple_generators
    while frontier:
        next_frontier = []
        for w in frontier:
            for s in gens:
                x = ctx.multiply(w, s)
                if x not in seen:
                    seen.add(x)
                    next_frontier.append(x)
                    yield x
        frontier = next_frontier


def _format_cycles(cycles: List[Tuple[int, ...]], compact: bool) -> str:
    parts = []
    for cycle in cycles:
        if len(cycle) < 2:
            continue
        labels = [str(x) for x in cycle]
        parts.append("(" + ("" if compact else " ").join(labels) + ")")
    return "".join(parts) or "e"


def format_element(ctx: GroupContext, w: Element) -> str:
    """Cycle notation for A/B/D, a word in the simples otherwise"""
    kind = ctx.backend.kind
    if kind == "perm":
        cycles = [tuple(x + 1 for x in cycle) for cycle in ctx.backend.cycles(w)]
        return _format_cycles(cycles, compact=ctx.backend.n_points < 10)
    if kind == "signed":
        return _format_cycles(ctx.backend.cycles(w), compact=False)
    if w == ctx.identity:
        return "e"
    return "w:" + " ".join(f"s{i + 1}" for i in ctx.word_of(w))
