"""
Element Parser - Read group elements from command-line specifications
Cycle notation, powers of c, words in simples and products of reflections
"""

import re
from typing import Dict, List, Tuple

from utils.errors import ElementParseError

OVERLINE = "̄"
SUPERSCRIPTS = {"²": 2, "³": 3, "⁴": 4, "⁵": 5, "⁶": 6}

_POWER = re.compile(r"^c\^?\s*\(?\s*([+-]?\d+)\s*\)?$")


def parse_root(text: str, rank: int) -> Tuple[int, ...]:
    """
    Root coefficients from a digit string such as "1234^25678" or "123²4²5²678"

    Each digit names a simple root; "^k" (a single digit) or a superscript
    sets its coefficient, so "4^25" is 2 alpha_4 + alpha_5.
    """
    coefficients = [0] * rank
    i = 0
    while i < len(text):
        ch = text[i]
        if not ch.isdigit():
            raise ElementParseError(f"Unexpected '{ch}' in root {text!r}")
        node = int(ch)
        if not 1 <= node <= rank:
            raise ElementParseError(f"Simple root {node} out of range 1..{rank} in {text!r}")
        i += 1
        power = 1
        if i < len(text) and text[i] == "^":
            if i + 1 >= len(text) or not text[i + 1].isdigit():
                raise ElementParseError(f"Missing exponent in root {text!r}")
            power = int(text[i + 1])
            i += 2
        elif i < len(text) and text[i] in SUPERSCRIPTS:
            power = SUPERSCRIPTS[text[i]]
            i += 1
        coefficients[node - 1] += power
    return tuple(coefficients)


def _reflection_index(ctx, text: str) -> int:
    if ctx.roots is None:
        raise ElementParseError(f"{ctx.label} has no root system; use a word in simples")
    coefficients = parse_root(text, ctx.rank)
    index = ctx.roots.index.get(coefficients)
    if index is None:
        raise ElementParseError(f"{text!r} is not a positive root of {ctx.label}")
    return index


def _parse_word(ctx, body: str) -> List[int]:
    tokens = body.lower().replace(",", " ").replace("s", " ").split()
    n = len(ctx.simple_generators)
    word = []
    for tok in tokens:
        if not tok.isdigit() or not 1 <= int(tok) <= n:
            raise ElementParseError(f"Bad simple generator {tok!r}; expected 1..{n}")
        word.append(int(tok) - 1)
    return word


def _split_label(token: str) -> List[str]:
    """Split a compact cycle body like "1̄35" into labels"""
    labels = []
    i = 0
    while i < len(token):
        sign = ""
        if token[i] == "-":
            sign = "-"
            i += 1
        if i >= len(token) or not token[i].isdigit():
            raise ElementParseError(f"Malformed cycle entry in {token!r}")
        label = sign + token[i]
        i += 1
        if i < len(token) and token[i] == OVERLINE:
            label = "-" + label.lstrip("-")
            i += 1
        labels.append(label)
    return labels


def _cycle_labels(body: str, compact: bool) -> List[int]:
    body = body.strip()
    if not body:
        return []
    if " " in body or "," in body or not compact:
        raw = body.replace(",", " ").split()
        labels = []
        for tok in raw:
            if tok.endswith(OVERLINE):
                tok = "-" + tok[:-1].lstrip("-")
            labels.append(tok)
    else:
        labels = _split_label(body)
    try:
        return [int(x) for x in labels]
    except ValueError:
        raise ElementParseError(f"Cycle ({body}) contains a non-integer entry")


def parse_cycles(text: str, compact: bool) -> List[List[int]]:
    cycles = re.findall(r"\(([^()]*)\)", text)
    leftover = re.sub(r"\(([^()]*)\)", "", text).strip()
    if leftover:
        raise ElementParseError(f"Unexpected text outside cycles: {leftover!r}")
    return [_cycle_labels(body, compact) for body in cycles]


def _permutation_from_cycles(ctx, cycles: List[List[int]]) -> tuple:
    n = ctx.backend.n_points
    image = list(range(n))
    seen = set()
    for cycle in cycles:
        for k, x in enumerate(cycle):
            if not 1 <= x <= n:
                raise ElementParseError(f"Point {x} outside 1..{n}")
            if x in seen:
                raise ElementParseError(f"Point {x} appears twice")
            seen.add(x)
            image[x - 1] = cycle[(k + 1) % len(cycle)] - 1
    return tuple(image)


def _signed_from_cycles(ctx, cycles: List[List[int]]) -> tuple:
    n = ctx.backend.n
    mapping: Dict[int, int] = {}
    for cycle in cycles:
        for x in cycle:
            if x == 0 or abs(x) > n:
                raise ElementParseError(f"Point {x} outside +-1..{n}")
        for k, x in enumerate(cycle):
            y = cycle[(k + 1) % len(cycle)]
            for a, b in ((x, y), (-x, -y)):
                if mapping.get(a, b) != b:
                    raise ElementParseError(f"Cycles disagree on the image of {a}")
                mapping[a] = b
    w = tuple(mapping.get(i, i) for i in range(1, n + 1))
    if sorted(abs(y) for y in w) != list(range(1, n + 1)):
        raise ElementParseError("Cycles do not describe a signed permutation")
    if ctx.cox_type.value == "D" and sum(1 for y in w if y < 0) % 2:
        raise ElementParseError(f"Odd number of sign changes; not an element of {ctx.label}")
    return w


def parse_element(ctx, text: str) -> tuple:
    """
    Parse an element specification

    Accepted forms:
        e, c, c^k, c^-k
        w:s1 s3 s2      (word in simple generators)
        r:2 123456 3    (product of reflections named by root coefficients)
        (135642)        (compact cycles when every label is one digit)
        (1 2 4 6 5)(7 9), (-1 -3 6) or with combining overlines (1̄ 3̄ 6)

    Raises:
        ElementParseError: malformed input or an element outside the group
    """
    spec = text.strip()
    if not spec:
        raise ElementParseError("Empty element specification")
    lowered = spec.lower()
    if lowered in ("e", "id"):
        return ctx.identity
    if lowered == "c":
        return ctx.c
    match = _POWER.match(lowered.replace(" ", ""))
    if match:
        return ctx.power(ctx.c, int(match.group(1)))
    if lowered.startswith("w:"):
        return ctx.word_element(_parse_word(ctx, spec[2:]))
    if lowered.startswith("r:"):
        indices = [_reflection_index(ctx, tok) for tok in spec[2:].replace("·", " ").split()]
        if not indices:
            raise ElementParseError("r: needs at least one root")
        return ctx.product([ctx.reflections[i] for i in indices])
    if spec.startswith("("):
        kind = ctx.backend.kind
        if kind == "perm":
            return _permutation_from_cycles(ctx, parse_cycles(spec, compact=ctx.backend.n_points < 10))
        if kind == "signed":
            return _signed_from_cycles(ctx, parse_cycles(spec, compact=ctx.backend.n < 10))
        raise ElementParseError(f"Cycle notation needs a typed A/B/D context, not {ctx.label}")
    if re.fullmatch(r"[sS\d ,]+", spec):
        return ctx.word_element(_parse_word(ctx, spec))
    raise ElementParseError(f"Could not parse element {text!r}")
