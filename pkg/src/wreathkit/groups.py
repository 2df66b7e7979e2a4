"""Exact arithmetic in the supported groups.

Elements are plain immutable Python values: tuples for free abelian groups,
permutations and the Heisenberg group, ints for cyclic groups and
:class:`WreathElement` for wreath products.  A group object knows how to
multiply, invert, compare and serialize its elements.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence


class GroupError(ValueError):
    pass


class Token(NamedTuple):
    level: int
    index: int
    sign: int = 1

    def inverse(self) -> "Token":
        return Token(self.level, self.index, -self.sign)


Word = tuple  # tuple[Token, ...]


def invert_word(word: Sequence[Token]) -> tuple:
    return tuple(Token(t.level, t.index, -t.sign) for t in reversed(word))


# ---------------------------------------------------------------- keys

def _varint(n: int) -> bytes:
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def _zigzag(n: int) -> bytes:
    return _varint(2 * n if n >= 0 else -2 * n - 1)


def _chunk(b: bytes) -> bytes:
    return _varint(len(b)) + b


# ---------------------------------------------------------------- elements

class WreathElement:
    """A pair (f, h): finitely supported f from H to A, and the cursor h.

    ``support`` maps right-factor elements to non-identity left-factor
    elements.  The dict is never mutated after construction.
    """

    __slots__ = ("support", "cursor", "_hash")

    def __init__(self, support: dict, cursor):
        self.support = support
        self.cursor = cursor
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, WreathElement):
            return NotImplemented
        return self.cursor == other.cursor and self.support == other.support

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.cursor, frozenset(self.support.items())))
            self._hash = h
        return h

    def __repr__(self):
        items = ", ".join(f"{_short(k)}: {_short(v)}" for k, v in self.support.items())
        return f"WreathElement({{{items}}}, {_short(self.cursor)})"


def _short(x):
    if isinstance(x, tuple) and len(x) == 1 and isinstance(x[0], int):
        return repr(x[0])
    return repr(x)


# ---------------------------------------------------------------- groups

class Group:
    """Common interface.  Subclasses provide the primitive operations."""

    descriptor: str = "?"
    nilpotency_class: int | None = None
    num_levels: int = 1
    finite: bool = False

    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def key(self, x) -> bytes:
        raise NotImplementedError

    def generator(self, level: int, index: int):
        raise NotImplementedError

    def check_token(self, tok: Token) -> None:
        self.generator(tok.level, tok.index)

    def is_identity(self, x) -> bool:
        return x == self.identity()

    def token_element(self, tok: Token):
        g = self.generator(tok.level, tok.index)
        return g if tok.sign > 0 else self.inv(g)

    def pow(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity()
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def eval_word(self, word: Iterable[Token]):
        acc = self.identity()
        for tok in word:
            acc = self.mul(acc, self.token_element(tok))
        return acc

    def order(self):
        return None

    def elements(self):
        raise GroupError(f"{self.descriptor} is not enumerable")

    # text forms
    def format_token(self, tok: Token) -> str:
        s = f"g{tok.level}.{tok.index}"
        return s if tok.sign > 0 else s + "^-1"

    def format_element(self, x) -> str:
        return repr(x)

    def parse_element(self, text: str):
        return self.eval_word(parse_word(self, text))

    def __repr__(self):
        return self.descriptor

    def __eq__(self, other):
        return isinstance(other, Group) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)


class FreeAbelian(Group):
    nilpotency_class = 1

    def __init__(self, r: int):
        if r < 1:
            raise GroupError("rank must be at least 1")
        self.r = r
        self.descriptor = f"Z^{r}"
        self._zero = (0,) * r

    def identity(self):
        return self._zero

    def mul(self, x, y):
        if self.r == 1:
            return (x[0] + y[0],)
        return tuple([a + b for a, b in zip(x, y)])

    def inv(self, x):
        return tuple([-a for a in x])

    def pow(self, x, k):
        return tuple([a * k for a in x])

    def is_identity(self, x):
        return not any(x)

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.r and all(isinstance(a, int) for a in x)

    def key(self, x):
        if not any(x):
            return b""
        return b"".join(_zigzag(a) for a in x)

    def generator(self, level, index):
        if level != 0 or not 1 <= index <= self.r:
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        v = [0] * self.r
        v[index - 1] = 1
        return tuple(v)

    def format_element(self, x):
        return ":".join(str(a) for a in x)

    def parse_element(self, text):
        parts = text.strip().split(":")
        if len(parts) != self.r:
            raise GroupError(f"expected {self.r} colon-separated integers, got {text!r}")
        return tuple(int(p) for p in parts)


class CyclicGroup(Group):
    nilpotency_class = 1
    finite = True

    def __init__(self, n: int):
        if n < 1:
            raise GroupError("order must be positive")
        self.n = n
        self.descriptor = f"Cyc({n})"

    def identity(self):
        return 0

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n

    def pow(self, x, k):
        return (x * k) % self.n

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.n

    def key(self, x):
        return b"" if x == 0 else _varint(x)

    def generator(self, level, index):
        if level != 0 or index != 1:
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        return 1 % self.n

    def order(self):
        return self.n

    def elements(self):
        return list(range(self.n))

    def format_element(self, x):
        return str(x)

    def parse_element(self, text):
        return int(text.strip()) % self.n


class SymmetricGroup(Group):
    """Permutations of {1..n}, stored 0-based as image tuples.

    The product ``x*y`` applies x first, then y.  Token index k names the
    permutation of lexicographic rank k-1, so g0.1 is the identity and the
    generating set is the whole group (identity letter included).
    """

    finite = True
    MAX_TOKEN_DEGREE = 8

    def __init__(self, n: int):
        if n < 1:
            raise GroupError("degree must be positive")
        self.n = n
        self.descriptor = f"Sym({n})"
        self._id = tuple(range(n))
        self.nilpotency_class = {1: 1, 2: 1}.get(n)
        self._mul_cache: dict = {}

    @property
    def _perms(self):
        return _perm_table(self.n)

    def identity(self):
        return self._id

    def mul(self, x, y):
        c = self._mul_cache
        r = c.get((x, y))
        if r is None:
            r = tuple([y[i] for i in x])
            if len(c) < 200000:
                c[(x, y)] = r
        return r

    def inv(self, x):
        out = [0] * self.n
        for i, j in enumerate(x):
            out[j] = i
        return tuple(out)

    def contains(self, x):
        return isinstance(x, tuple) and sorted(x) == list(range(self.n))

    def key(self, x):
        return b"" if x == self._id else bytes(x)

    def generator(self, level, index):
        if level != 0 or self.n > self.MAX_TOKEN_DEGREE:
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        perms, _ = self._perms
        if not 1 <= index <= len(perms):
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        return perms[index - 1]

    def token_for(self, perm) -> Token:
        _, rank = self._perms
        return Token(0, rank[perm] + 1, 1)

    def order(self):
        return math.factorial(self.n)

    def elements(self):
        return list(self._perms[0])

    def format_element(self, x):
        return format_cycles(x)

    def format_token(self, tok):
        s = format_cycles(self.generator(tok.level, tok.index))
        return s if tok.sign > 0 else s + "^-1"

    def parse_element(self, text):
        return parse_cycles(text, self.n)


@lru_cache(maxsize=None)
def _perm_table(n: int):
    perms = list(itertools.permutations(range(n)))
    return perms, {p: i for i, p in enumerate(perms)}


def format_cycles(perm) -> str:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int):
    text = text.strip()
    if not re.fullmatch(r"(\([^()]*\)\s*)+", text):
        raise GroupError(f"bad cycle notation {text!r}")
    perm = list(range(n))
    for body in _CYCLE_RE.findall(text):
        parts = body.replace(",", " ").split()
        if len(parts) == 1 and len(parts[0]) > 1 and n <= 9:
            parts = list(parts[0])
        pts = [int(p) - 1 for p in parts]
        if any(not 0 <= p < n for p in pts) or len(set(pts)) != len(pts):
            raise GroupError(f"bad cycle ({body}) for degree {n}")
        cyc = list(range(n))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            cyc[a] = b
        perm = [cyc[p] for p in perm]
    return tuple(perm)


class Heisenberg(Group):
    """UT(3,Z); (a, b, c) is the matrix [[1,a,c],[0,1,b],[0,0,1]]."""

    nilpotency_class = 2
    descriptor = "UT3"

    def identity(self):
        return (0, 0, 0)

    def mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def inv(self, x):
        a, b, c = x
        return (-a, -b, a * b - c)

    def pow(self, x, k):
        a, b, c = x
        # (a,b,c)^k = (ka, kb, kc + ab*k(k-1)/2)
        return (k * a, k * b, k * c + a * b * (k * (k - 1) // 2))

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == 3

    def key(self, x):
        if x == (0, 0, 0):
            return b""
        return b"".join(_zigzag(a) for a in x)

    def generator(self, level, index):
        if level != 0 or not 1 <= index <= 3:
            raise GroupError(f"token g{level}.{index} not valid for UT3")
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))[index - 1]

    def format_element(self, x):
        return ":".join(str(a) for a in x)

    def parse_element(self, text):
        parts = text.strip().split(":")
        if len(parts) != 3:
            raise GroupError(f"UT3 literal must be a:b:c, got {text!r}")
        return tuple(int(p) for p in parts)


class Dihedral(Group):
    """Dihedral group of order 2n; (k, f) stands for r^k s^f."""

    finite = True

    def __init__(self, n: int):
        if n < 1:
            raise GroupError("n must be positive")
        self.n = n
        self.descriptor = f"Dih({n})"
        if n & (n - 1) == 0:
            self.nilpotency_class = max(1, n.bit_length() - 1)

    def identity(self):
        return (0, 0)

    def mul(self, x, y):
        k1, f1 = x
        k2, f2 = y
        return ((k1 - k2 if f1 else k1 + k2) % self.n, f1 ^ f2)

    def inv(self, x):
        k, f = x
        return (k, 1) if f else ((-k) % self.n, 0)

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == 2 and 0 <= x[0] < self.n and x[1] in (0, 1)

    def key(self, x):
        return b"" if x == (0, 0) else _varint(x[0]) + _varint(x[1])

    def generator(self, level, index):
        if level != 0 or index not in (1, 2):
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        return (1 % self.n, 0) if index == 1 else (0, 1)

    def order(self):
        return 2 * self.n

    def elements(self):
        return [(k, f) for f in (0, 1) for k in range(self.n)]

    def format_element(self, x):
        return f"{x[0]}:{x[1]}"

    def parse_element(self, text):
        k, f = text.strip().split(":")
        return (int(k) % self.n, int(f) & 1)


class DirectPower(Group):
    """G^d with coordinates 0..d-1.  Token index (copy*K + j) names G's
    token j in coordinate ``copy``, where K = ``base.token_span``."""

    def __init__(self, base: Group, d: int):
        if d < 1:
            raise GroupError("d must be positive")
        self.base = base
        self.d = d
        self.descriptor = f"({base.descriptor})^{d}"
        self.finite = base.finite
        self.nilpotency_class = base.nilpotency_class
        self.span = token_span(base)

    def identity(self):
        return (self.base.identity(),) * self.d

    def mul(self, x, y):
        m = self.base.mul
        return tuple([m(a, b) for a, b in zip(x, y)])

    def inv(self, x):
        return tuple([self.base.inv(a) for a in x])

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.d and all(self.base.contains(a) for a in x)

    def key(self, x):
        if x == self.identity():
            return b""
        return b"".join(_chunk(self.base.key(a)) for a in x)

    def coordinate_token(self, copy: int, tok: Token) -> Token:
        return Token(0, copy * self.span + tok.index, tok.sign)

    def split_token(self, tok: Token) -> tuple[int, Token]:
        copy, j = divmod(tok.index - 1, self.span)
        return copy, Token(0, j + 1, tok.sign)

    def generator(self, level, index):
        if level != 0 or not 1 <= index <= self.span * self.d:
            raise GroupError(f"token g{level}.{index} not valid for {self.descriptor}")
        copy, tok = self.split_token(Token(0, index, 1))
        out = list(self.identity())
        out[copy] = self.base.generator(0, tok.index)
        return tuple(out)


def token_span(g: Group) -> int:
    if isinstance(g, SymmetricGroup):
        return math.factorial(g.n)
    if isinstance(g, FreeAbelian):
        return g.r
    return {CyclicGroup: 1, Heisenberg: 3, Dihedral: 2}.get(type(g), 1)


class WreathProduct(Group):
    """Restricted wreath product A wr H.

    Tokens of H keep their levels; tokens of A are shifted up by
    ``H.num_levels``.
    """

    def __init__(self, left: Group, right: Group, descriptor: str | None = None):
        self.A = left
        self.H = right
        self.shift = right.num_levels
        self.num_levels = right.num_levels + left.num_levels
        self.descriptor = descriptor or f"({left.descriptor}) wr ({right.descriptor})"
        self._id = WreathElement({}, right.identity())

    # projections
    def is_left_token(self, tok: Token) -> bool:
        return tok.level >= self.shift

    def left_token(self, tok: Token) -> Token:
        return Token(tok.level - self.shift, tok.index, tok.sign)

    def lift_left_token(self, tok: Token) -> Token:
        return Token(tok.level + self.shift, tok.index, tok.sign)

    def sigma_word(self, word) -> tuple:
        s = self.shift
        return tuple(t for t in word if t.level < s)

    def identity(self):
        return self._id

    def is_identity(self, x):
        return not x.support and self.H.is_identity(x.cursor)

    def mul(self, x, y):
        H = self.H
        if not y.support:
            return WreathElement(x.support, H.mul(x.cursor, y.cursor))
        A = self.A
        h1 = x.cursor
        sup = dict(x.support)
        shift = not H.is_identity(h1)
        for pos, val in y.support.items():
            p = H.mul(h1, pos) if shift else pos
            cur = sup.get(p)
            if cur is None:
                sup[p] = val
            else:
                nv = A.mul(cur, val)
                if A.is_identity(nv):
                    del sup[p]
                else:
                    sup[p] = nv
        return WreathElement(sup, H.mul(h1, y.cursor))

    def inv(self, x):
        H, A = self.H, self.A
        hinv = H.inv(x.cursor)
        if H.is_identity(hinv):
            sup = {p: A.inv(v) for p, v in x.support.items()}
        else:
            sup = {H.mul(hinv, p): A.inv(v) for p, v in x.support.items()}
        return WreathElement(sup, hinv)

    def contains(self, x):
        return isinstance(x, WreathElement) and self.H.contains(x.cursor) and all(
            self.H.contains(p) and self.A.contains(v) and not self.A.is_identity(v)
            for p, v in x.support.items()
        )

    def key(self, x):
        if self.is_identity(x):
            return b""
        H, A = self.H, self.A
        pairs = sorted((H.key(p), A.key(v)) for p, v in x.support.items())
        out = [_varint(len(pairs))]
        for kp, kv in pairs:
            out.append(_chunk(kp))
            out.append(_chunk(kv))
        out.append(_chunk(H.key(x.cursor)))
        return b"".join(out)

    def generator(self, level, index):
        if level < self.shift:
            return WreathElement({}, self.H.generator(level, index))
        a = self.A.generator(level - self.shift, index)
        return WreathElement({self.H.identity(): a}, self.H.identity())

    def check_token(self, tok):
        self.generator(tok.level, tok.index)

    def left_element(self, a):
        """a placed at the H-identity."""
        if self.A.is_identity(a):
            return self._id
        return WreathElement({self.H.identity(): a}, self.H.identity())

    def right_element(self, h):
        return WreathElement({}, h)

    def tau_at(self, x, h):
        return x.support.get(h, self.A.identity())

    def eval_word(self, word):
        """Letter-by-letter evaluation with a mutable accumulator."""
        H, A = self.H, self.A
        s = self.shift
        sup: dict = {}
        cursor = H.identity()
        run: list = []
        aid_check = A.is_identity
        for tok in word:
            if tok.level < s:
                run.append(tok)
                continue
            if run:
                cursor = H.mul(cursor, H.eval_word(run))
                run = []
            a = A.token_element(Token(tok.level - s, tok.index, tok.sign))
            cur = sup.get(cursor)
            nv = a if cur is None else A.mul(cur, a)
            if aid_check(nv):
                sup.pop(cursor, None)
            else:
                sup[cursor] = nv
        if run:
            cursor = H.mul(cursor, H.eval_word(run))
        return WreathElement(sup, cursor)

    def format_token(self, tok):
        if tok.level < self.shift:
            return self.H.format_token(tok)
        inner = self.A.format_token(self.left_token(tok))
        if isinstance(self.A, SymmetricGroup):
            return inner
        return f"g{tok.level}.{tok.index}" + ("" if tok.sign > 0 else "^-1")

    def format_element(self, x):
        items = ", ".join(
            f"{self.H.format_element(p)}->{self.A.format_element(v)}"
            for p, v in sorted(x.support.items(), key=lambda kv: self.H.key(kv[0]))
        )
        return f"{{{items}}} @ {self.H.format_element(x.cursor)}"


class IteratedWreath(WreathProduct):
    """W_{m,r}: W_{0,r} = Z^r and W_{m,r} = Z^r wr W_{m-1,r}."""

    nilpotency_class = None

    def __init__(self, m: int, r: int):
        if m < 1:
            raise GroupError("use FreeAbelian for m = 0")
        inner = FreeAbelian(r) if m == 1 else IteratedWreath(m - 1, r)
        super().__init__(FreeAbelian(r), inner, f"W({m},{r})")
        self.m = m
        self.r = r


def iterated_wreath(m: int, r: int) -> Group:
    return FreeAbelian(r) if m == 0 else IteratedWreath(m, r)


class WreathOverZ(WreathProduct):
    def __init__(self, inner: Group):
        if not (inner.finite or isinstance(inner, Heisenberg) or isinstance(inner, DirectPower)):
            raise GroupError("wrZ needs a finite or Heisenberg left factor")
        desc = f"wrZ({inner.descriptor})"
        super().__init__(inner, FreeAbelian(1), desc)

    def format_token(self, tok):
        if tok.level == 0:
            return "t" if tok.sign > 0 else "t^-1"
        return super().format_token(tok)


class FreeSolvable(Group):
    """Free solvable group of rank r and derived length d, realized inside
    W_{d-1,r} by the iterated Magnus embedding.  Tokens x_i are Token(0, i)."""

    def __init__(self, d: int, r: int):
        if d < 1 or r < 1:
            raise GroupError("FS(d,r) needs d >= 1 and r >= 1")
        self.d = d
        self.r = r
        self.ambient = iterated_wreath(d - 1, r)
        self.descriptor = f"FS({d},{r})"

    def image_word(self, tok: Token) -> tuple:
        """Word over W_{d-1,r} for the Magnus image of x_i^{+-1}."""
        if not 1 <= tok.index <= self.r:
            raise GroupError(f"generator x{tok.index} out of range for {self.descriptor}")
        w = tuple(Token(lv, tok.index, 1) for lv in range(self.d - 1, -1, -1))
        return w if tok.sign > 0 else invert_word(w)

    def embed_word(self, word) -> tuple:
        out: list = []
        for tok in word:
            out.extend(self.image_word(tok))
        return tuple(out)

    def identity(self):
        return self.ambient.identity()

    def mul(self, x, y):
        return self.ambient.mul(x, y)

    def inv(self, x):
        return self.ambient.inv(x)

    def is_identity(self, x):
        return self.ambient.is_identity(x)

    def contains(self, x):
        return self.ambient.contains(x)

    def key(self, x):
        return self.ambient.key(x)

    def generator(self, level, index):
        return self.ambient.eval_word(self.image_word(Token(level, index, 1)))

    def eval_word(self, word):
        return self.ambient.eval_word(self.embed_word(word))

    def format_token(self, tok):
        return f"x{tok.index}" + ("" if tok.sign > 0 else "^-1")


# ---------------------------------------------------------------- descriptors

@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    params: tuple = ()
    inner: "GroupDescriptor | None" = None

    def __str__(self):
        if self.kind == "FreeAbelian":
            return f"Z^{self.params[0]}"
        if self.kind == "IteratedWreath":
            return "W({},{})".format(*self.params)
        if self.kind == "FreeSolvable":
            return "FS({},{})".format(*self.params)
        if self.kind == "SymmetricGroup":
            return f"Sym({self.params[0]})"
        if self.kind == "CyclicGroup":
            return f"Cyc({self.params[0]})"
        if self.kind == "Dihedral":
            return f"Dih({self.params[0]})"
        if self.kind == "Heisenberg":
            return "UT3"
        return f"wrZ({self.inner})"


_DESC_RE = [
    (re.compile(r"Z\^(\d+)"), "FreeAbelian"),
    (re.compile(r"Z"), "FreeAbelian"),
    (re.compile(r"W\((\d+),(\d+)\)"), "IteratedWreath"),
    (re.compile(r"FS\((\d+),(\d+)\)"), "FreeSolvable"),
    (re.compile(r"Sym\((\d+)\)"), "SymmetricGroup"),
    (re.compile(r"Cyc\((\d+)\)"), "CyclicGroup"),
    (re.compile(r"Dih\((\d+)\)"), "Dihedral"),
    (re.compile(r"UT3"), "Heisenberg"),
]


def parse_descriptor(text: str) -> GroupDescriptor:
    s = text.replace(" ", "")
    m = re.fullmatch(r"wrZ\((.*)\)", s)
    if m:
        inner = parse_descriptor(m.group(1))
        if inner.kind not in ("SymmetricGroup", "CyclicGroup", "Dihedral", "Heisenberg"):
            raise GroupError(f"wrZ inner factor must be finite or UT3, got {inner}")
        return GroupDescriptor("WreathOverZ", (), inner)
    for rx, kind in _DESC_RE:
        m = rx.fullmatch(s)
        if m:
            params = tuple(int(g) for g in m.groups()) or ((1,) if kind == "FreeAbelian" else ())
            if kind in ("FreeAbelian",) and params[0] < 1:
                raise GroupError("r must be >= 1")
            if kind in ("IteratedWreath", "FreeSolvable") and params[1] < 1:
                raise GroupError("r must be >= 1")
            if kind == "FreeSolvable" and params[0] < 1:
                raise GroupError("FS(d,r) requires d >= 1")
            return GroupDescriptor(kind, params)
    raise GroupError(f"unknown group descriptor {text!r}")


@lru_cache(maxsize=64)
def _build(desc: GroupDescriptor) -> Group:
    k, p = desc.kind, desc.params
    if k == "FreeAbelian":
        return FreeAbelian(p[0])
    if k == "IteratedWreath":
        return iterated_wreath(p[0], p[1])
    if k == "FreeSolvable":
        return FreeSolvable(p[0], p[1])
    if k == "SymmetricGroup":
        return SymmetricGroup(p[0])
    if k == "CyclicGroup":
        return CyclicGroup(p[0])
    if k == "Dihedral":
        return Dihedral(p[0])
    if k == "Heisenberg":
        return Heisenberg()
    return WreathOverZ(_build(desc.inner))


def make_group(desc: "GroupDescriptor | str | Group") -> Group:
    if isinstance(desc, Group):
        return desc
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    return _build(desc)


# ---------------------------------------------------------------- word syntax

_LETTER_RE = re.compile(
    r"\s*(?:(?P<g>g(?P<lv>\d+)\.(?P<ix>\d+))|(?P<x>x(?P<xi>\d+))|(?P<t>t)(?![\w.])"
    r"|(?P<cyc>(?:\([^()]*\))+))(?P<inv>\^-1)?"
)


def _cycle_group(group: Group) -> tuple[SymmetricGroup, int] | None:
    """Symmetric group reachable for cycle literals, with its level shift."""
    if isinstance(group, SymmetricGroup):
        return group, 0
    if isinstance(group, WreathProduct) and isinstance(group.A, SymmetricGroup):
        return group.A, group.shift
    return None


def parse_word(group: Group, text: str) -> tuple:
    """Parse whitespace-separated letters; raises GroupError with a column."""
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        while text[pos].isspace():
            pos += 1
        m = _LETTER_RE.match(text, pos)
        if not m or m.end() == pos:
            raise GroupError(f"unexpected input at column {pos + 1}: {text[pos:pos + 12]!r}")
        sign = -1 if m.group("inv") else 1
        if m.group("g"):
            tok = Token(int(m.group("lv")), int(m.group("ix")), sign)
        elif m.group("x"):
            if not isinstance(group, FreeSolvable):
                raise GroupError(f"free generator at column {pos + 1} needs an FS group")
            tok = Token(0, int(m.group("xi")), sign)
        elif m.group("t"):
            if not isinstance(group, WreathOverZ):
                raise GroupError(f"letter t at column {pos + 1} needs a wrZ group")
            tok = Token(0, 1, sign)
        else:
            cg = _cycle_group(group)
            if cg is None:
                raise GroupError(f"cycle literal at column {pos + 1} needs a symmetric group")
            sym, shift = cg
            try:
                perm = parse_cycles(m.group("cyc"), sym.n)
            except GroupError as exc:
                raise GroupError(f"column {pos + 1}: {exc}") from None
            t0 = sym.token_for(perm)
            tok = Token(t0.level + shift, t0.index, sign)
        try:
            group.check_token(tok)
        except GroupError:
            raise GroupError(f"column {pos + 1}: token {m.group(0).strip()} not valid for {group.descriptor}") from None
        out.append(tok)
        pos = m.end()
    return tuple(out)


def format_word(group: Group, word) -> str:
    return " ".join(group.format_token(t) for t in word)


# ---------------------------------------------------------------- operations

def multiply(group: Group, g, h):
    if not (group.contains(g) and group.contains(h)):
        raise GroupError(f"operands are not elements of {group.descriptor}")
    return group.mul(g, h)


def inverse(group: Group, g):
    return group.inv(g)


def project_sigma(group: WreathProduct, g):
    if not isinstance(group, WreathProduct):
        raise GroupError("project_sigma needs a wreath product")
    return g.cursor


def project_tau_at(group: WreathProduct, g, h):
    if not isinstance(group, WreathProduct):
        raise GroupError("project_tau_at needs a wreath product")
    return group.tau_at(g, h)


def eval_word(group, word):
    group = make_group(group)
    if isinstance(word, str):
        word = parse_word(group, word)
    for tok in word:
        group.check_token(tok)
    return group.eval_word(word)


def canonical_serialize(group: Group, g) -> bytes:
    return group.key(g)


def gd_wreath(base: Group, d: int) -> WreathProduct:
    """G^d wr Z."""
    return WreathProduct(DirectPower(base, d), FreeAbelian(1), f"wrZ(({base.descriptor})^{d})")


def embed_gd_wr_z(d: int, g: WreathElement, base: Group) -> WreathElement:
    """Image of g in G wr Z under t -> t^d, (copy i letter a) -> t^i a t^-i.

    ``g`` is an element of G^d wr Z and ``base`` is G.
    """
    if d < 1:
        raise GroupError("d must be >= 1")
    sup = {}
    for (x,), vals in g.support.items():
        if len(vals) != d:
            raise GroupError("coordinate count does not match d")
        for i, a in enumerate(vals):
            if not base.is_identity(a):
                sup[(d * x + i,)] = a
    return WreathElement(sup, (d * g.cursor[0],))


def embed_gd_word(group: WreathProduct, word) -> tuple:
    """Word-level version of :func:`embed_gd_wr_z` for words over G^d wr Z."""
    dp: DirectPower = group.A
    d = dp.d
    out: list = []
    t_fwd, t_back = Token(0, 1, 1), Token(0, 1, -1)
    for tok in word:
        if tok.level == 0:
            out.extend([Token(0, 1, tok.sign)] * d)
            continue
        copy, inner = dp.split_token(Token(0, tok.index, tok.sign))
        out.extend([t_fwd] * copy)
        out.append(Token(1, inner.index, inner.sign))
        out.extend([t_back] * copy)
    return tuple(out)


def magnus_embed(d: int, r: int, word) -> object:
    """Element of W_{d-1,r} representing ``word`` in the free solvable group."""
    fs = FreeSolvable(d, r)
    if isinstance(word, str):
        word = parse_word(fs, word)
    return fs.eval_word(word)


def element_word(group: Group, x) -> tuple:
    """A word evaluating to ``x`` (free abelian groups and wreath products
    over them, recursively)."""
    if isinstance(group, FreeAbelian):
        out = []
        for i, c in enumerate(x, 1):
            out.extend([Token(0, i, 1 if c > 0 else -1)] * abs(c))
        return tuple(out)
    if isinstance(group, WreathProduct) and isinstance(group.A, FreeAbelian):
        out = []
        H = group.H
        for p, a in sorted(x.support.items(), key=lambda kv: H.key(kv[0])):
            w = element_word(H, p)
            out.extend(w)
            out.extend(group.lift_left_token(t) for t in element_word(group.A, a))
            out.extend(invert_word(w))
        out.extend(element_word(H, x.cursor))
        return tuple(out)
    raise GroupError(f"no element words for {group.descriptor}")
