"""Gain-group arithmetic: cyclic groups, finite abelian products, free groups.

Cyclic and product elements are residue vectors written additively in I/O
(``gain e1 2``, ``gain e2 1 0``); free-group elements are reduced words of
signed symbols (``gain e3 a -b``).  A :class:`GroupClass` describes the
family of admissible gain groups for classification; explicit lists are
treated as subgroup closed.

Group header syntax in gain files: ``group Z 3``, ``group Z 2 x Z 3``,
``group free a b c``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import GraphError, ParseError

CYCLIC = "Cyclic"
ABELIAN_PRODUCT = "AbelianProduct"
FREE = "FreeOn"


@dataclass(frozen=True)
class Group:
    """Descriptor: Cyclic(k), AbelianProduct(k1,..,kr), or FreeOn(symbols)."""

    kind: str
    moduli: tuple[int, ...] = ()
    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind in (CYCLIC, ABELIAN_PRODUCT):
            if not self.moduli or any(k < 1 for k in self.moduli):
                raise GraphError("cyclic/product moduli must be >= 1")
            if self.kind == CYCLIC and len(self.moduli) != 1:
                raise GraphError("Cyclic takes exactly one modulus")
        elif self.kind == FREE:
            if len(set(self.symbols)) != len(self.symbols):
                raise GraphError("free generators must be distinct")
        else:
            raise GraphError(f"unknown group kind {self.kind!r}")

    # -- structure -------------------------------------------------------

    @property
    def is_abelian(self) -> bool:
        return self.kind != FREE or len(self.symbols) <= 1

    @property
    def is_finite(self) -> bool:
        return self.kind != FREE or not self.symbols

    def order(self) -> Optional[int]:
        if self.kind == FREE:
            return 1 if not self.symbols else None
        return math.prod(self.moduli)

    # -- elements ----------------------------------------------------------

    def identity(self) -> "GroupElement":
        if self.kind == FREE:
            return GroupElement(self, word=())
        return GroupElement(self, residues=(0,) * len(self.moduli))

    def element(self, residues: Sequence[int] = (), word: Sequence[tuple[str, int]] = ()) -> "GroupElement":
        if self.kind == FREE:
            return GroupElement(self, word=_reduce_word(tuple(word)))
        res = tuple(r % k for r, k in zip(residues, self.moduli))
        if len(res) != len(self.moduli):
            raise GraphError("residue vector length mismatch")
        return GroupElement(self, residues=res)

    def generator(self) -> "GroupElement":
        """A canonical nontrivial element where one exists."""
        if self.kind == FREE:
            if not self.symbols:
                raise GraphError("trivial group has no generator")
            return GroupElement(self, word=((self.symbols[0], 1),))
        if all(k == 1 for k in self.moduli):
            raise GraphError("trivial group has no generator")
        res = [0] * len(self.moduli)
        res[next(i for i, k in enumerate(self.moduli) if k > 1)] = 1
        return GroupElement(self, residues=tuple(res))

    def elements(self) -> list["GroupElement"]:
        if not self.is_finite:
            raise GraphError("cannot enumerate an infinite group")
        if self.kind == FREE:
            return [self.identity()]
        out = []
        counters = [0] * len(self.moduli)
        while True:
            out.append(GroupElement(self, residues=tuple(counters)))
            i = len(counters) - 1
            while i >= 0:
                counters[i] += 1
                if counters[i] < self.moduli[i]:
                    break
                counters[i] = 0
                i -= 1
            if i < 0:
                return out

    def element_orders(self) -> set:
        """All element orders; infinite order is represented as None."""
        if self.kind == FREE:
            return {1} if not self.symbols else {1, None}
        exponent = math.lcm(*self.moduli)
        return {d for d in range(1, exponent + 1) if exponent % d == 0}

    def __str__(self):
        if self.kind == CYCLIC:
            return f"Z{self.moduli[0]}"
        if self.kind == ABELIAN_PRODUCT:
            return "x".join(f"Z{k}" for k in self.moduli)
        return "free(" + ",".join(self.symbols) + ")"


def cyclic(k: int) -> Group:
    return Group(CYCLIC, (k,))


def abelian_product(*moduli: int) -> Group:
    return Group(ABELIAN_PRODUCT, tuple(moduli))


def free_on(*symbols: str) -> Group:
    return Group(FREE, symbols=tuple(symbols))


def _reduce_word(word: tuple[tuple[str, int], ...]) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for sym, sgn in word:
        if sgn not in (1, -1):
            raise GraphError("word letters must carry sign +1 or -1")
        if stack and stack[-1] == (sym, -sgn):
            stack.pop()
        else:
            stack.append((sym, sgn))
    return tuple(stack)


@dataclass(frozen=True)
class GroupElement:
    group: Group
    residues: tuple[int, ...] = ()
    word: tuple[tuple[str, int], ...] = ()

    @property
    def is_identity(self) -> bool:
        if self.group.kind == FREE:
            return not self.word
        return all(r == 0 for r in self.residues)

    def __str__(self):
        if self.group.kind == FREE:
            return " ".join(("" if s == 1 else "-") + sym for sym, s in self.word) or "1"
        return " ".join(str(r) for r in self.residues)


def op(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.group != y.group:
        raise GraphError("cannot combine elements of different groups")
    g = x.group
    if g.kind == FREE:
        return GroupElement(g, word=_reduce_word(x.word + y.word))
    return GroupElement(g, residues=tuple((a + b) % k for a, b, k in zip(x.residues, y.residues, g.moduli)))


def inverse(x: GroupElement) -> GroupElement:
    g = x.group
    if g.kind == FREE:
        return GroupElement(g, word=tuple((sym, -s) for sym, s in reversed(x.word)))
    return GroupElement(g, residues=tuple((-a) % k for a, k in zip(x.residues, g.moduli)))


def identity(g: Group) -> GroupElement:
    return g.identity()


def element_order(x: GroupElement) -> Optional[int]:
    """Least n >= 1 with x^n trivial; None for infinite order."""
    g = x.group
    if g.kind == FREE:
        return 1 if not x.word else None
    n = 1
    for r, k in zip(x.residues, g.moduli):
        if r:
            n = math.lcm(n, k // math.gcd(r, k))
    return n


# -- element and group text forms -------------------------------------------


def parse_group_header(text: str) -> Group:
    """Parse ``Z 3``, ``Z 2 x Z 3``, ``free a b c`` (the part after ``group``)."""
    parts = text.split()
    if not parts:
        raise ParseError("empty group header")
    if parts[0] == "free":
        return free_on(*parts[1:])
    if not re.fullmatch(r"Z \d+( x Z \d+)*", " ".join(parts)):
        raise ParseError(f"unknown group header {text!r}")
    moduli = [int(tok) for tok in parts if tok.isdigit()]
    return cyclic(moduli[0]) if len(moduli) == 1 else abelian_product(*moduli)


def parse_group_spec(text: str) -> Group:
    """Parse compact CLI specs: ``Z3``, ``Z2xZ3``, ``free:a,b``."""
    s = text.strip()
    if s.startswith("free:"):
        return free_on(*[t for t in s[5:].split(",") if t])
    parts = s.split("x")
    moduli = []
    for part in parts:
        if not part.startswith("Z") or not part[1:].isdigit():
            raise ParseError(f"unknown group spec {text!r}")
        moduli.append(int(part[1:]))
    return cyclic(moduli[0]) if len(moduli) == 1 else abelian_product(*moduli)


def parse_element(g: Group, tokens: Sequence[str]) -> GroupElement:
    if g.kind == FREE:
        word = []
        for tok in tokens:
            sgn = 1
            if tok.startswith("-"):
                sgn, tok = -1, tok[1:]
            if tok not in g.symbols:
                raise ParseError(f"unknown free generator {tok!r}")
            word.append((tok, sgn))
        return g.element(word=word)
    if len(tokens) != len(g.moduli):
        raise ParseError(f"element for {g} needs {len(g.moduli)} residue(s)")
    try:
        return g.element(residues=[int(t) for t in tokens])
    except ValueError:
        raise ParseError(f"bad residues {tokens!r}") from None


# -- group classes ----------------------------------------------------------

ALL = "All"
ALL_ABELIAN = "AllAbelian"
EXPLICIT = "ExplicitList"


@dataclass(frozen=True)
class GroupClass:
    """A subgroup-closed family of admissible gain groups."""

    kind: str
    groups: tuple[Group, ...] = ()

    def __str__(self):
        if self.kind == EXPLICIT:
            return "groups:" + ",".join(str(g) for g in self.groups)
        return {ALL: "all", ALL_ABELIAN: "abelian"}[self.kind]


@dataclass(frozen=True)
class ClassFlags:
    contains_z3: bool
    contains_nontrivial_odd_order: bool
    has_odd_torsion: bool
    abelian_only: bool
    smallest_odd_order: Optional[int] = None


def class_flags(c: GroupClass) -> ClassFlags:
    """Derived flags, computed over all subgroups of the listed groups."""
    if c.kind in (ALL, ALL_ABELIAN):
        return ClassFlags(True, True, True, c.kind == ALL_ABELIAN, 3)
    odd_orders: set[int] = set()
    abelian = True
    for g in c.groups:
        abelian = abelian and g.is_abelian
        for d in g.element_orders():
            if d is not None and d >= 3 and d % 2 == 1:
                odd_orders.add(d)
    has_odd = bool(odd_orders)
    return ClassFlags(
        contains_z3=3 in odd_orders,
        contains_nontrivial_odd_order=has_odd,
        has_odd_torsion=has_odd,
        abelian_only=abelian,
        smallest_odd_order=min(odd_orders) if has_odd else None,
    )


def parse_class_spec(text: str) -> GroupClass:
    """Parse ``all | abelian | contains-z3 | groups:Z3,Z5 | groups:Z2xZ2``."""
    s = text.strip()
    if s == "all":
        return GroupClass(ALL)
    if s == "abelian":
        return GroupClass(ALL_ABELIAN)
    if s == "contains-z3":
        return GroupClass(EXPLICIT, (cyclic(3),))
    if s.startswith("groups:"):
        specs = [t for t in s[len("groups:"):].split(",") if t]
        if not specs:
            raise ParseError("empty group list")
        return GroupClass(EXPLICIT, tuple(parse_group_spec(t) for t in specs))
    raise ParseError(f"unknown class spec {text!r}")
