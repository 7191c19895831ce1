"""Word-problem backends.

A backend decides equality in a finitely presented group.  Each one exposes

* ``nf(w)`` on encoded words: a canonical representative (pure function);
* ``new_table()``: an element table whose ``mul(key, word)`` returns a key
  that is canonical *within that table*.  Searches (ball enumeration, lifted
  Dijkstra) only ever use tables, which lets the small-cancellation backend
  avoid computing shortlex forms.

Variants: ``Free``, ``FreeAbelian``, ``DirectProduct``, ``FreeProduct`` and
``SmallCancellation``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .._kernels import dehn_reduce as _dehn
from .._kernels import free_mul, free_reduce, inverse
from ..errors import BudgetExceeded, Unsupported
from ..words import Word, decode, encode, exponent_sums
from .presentation import Presentation
from .quotients import Abelianization, find_permutation_quotients
from .smallcancel import Dehn


class Backend:
    kind = "abstract"
    ngens: int

    def nf(self, w: bytes) -> bytes:
        raise Unsupported(f"{self.kind} cannot canonicalize")

    def normal_form(self, word: Word) -> Word:
        return decode(self.nf(encode(word)))

    def reduce(self, w: bytes) -> bytes:
        """A cheap representative that is empty iff ``w`` is trivial."""
        return self.nf(w)

    def is_trivial(self, w: bytes) -> bool:
        return not self.reduce(w)

    def equal(self, u: bytes, v: bytes) -> bool:
        return self.is_trivial(inverse(u) + v)

    def new_table(self) -> "ElementTable":
        return CanonicalTable(self)

    def mul_fn(self):
        """Multiplication on canonical keys; ``None`` means free multiplication."""
        return lambda k, w: self.nf(k + w)

    def letters(self) -> list[bytes]:
        return [bytes([c]) for c in range(2 * self.ngens)]

    def describe(self) -> dict:
        return {"kind": self.kind, "ngens": self.ngens}

    def __repr__(self):
        return f"{type(self).__name__}({self.ngens})"


class ElementTable:
    identity = b""

    def mul(self, key: bytes, w: bytes) -> bytes:
        raise NotImplementedError

    @property
    def mul_fn(self):
        return self.mul


class CanonicalTable(ElementTable):
    def __init__(self, backend: Backend):
        self.backend = backend
        self._mul = backend.mul_fn()

    def mul(self, key: bytes, w: bytes) -> bytes:
        if self._mul is None:
            return free_mul(key, free_reduce(w))
        return self._mul(key, w)

    @property
    def mul_fn(self):
        return self._mul


class Free(Backend):
    kind = "free"

    def __init__(self, ngens: int):
        self.ngens = ngens

    def nf(self, w: bytes) -> bytes:
        return free_reduce(w)

    def mul_fn(self):
        return None


class FreeAbelian(Backend):
    kind = "abelian"

    def __init__(self, ngens: int):
        self.ngens = ngens

    def nf(self, w: bytes) -> bytes:
        out = bytearray()
        for g, e in enumerate(exponent_sums(w, self.ngens)):
            if e:
                out += bytes([2 * g + (e < 0)]) * abs(e)
        return bytes(out)


def _translation(gens: tuple[int, ...]) -> tuple[bytes, bytes]:
    to_local = bytearray(range(256))
    to_global = bytearray(range(256))
    for i, g in enumerate(gens):
        for s in (0, 1):
            to_local[2 * g + s] = 2 * i + s
            to_global[2 * i + s] = 2 * g + s
    return bytes(to_local), bytes(to_global)


class _Composite(Backend):
    def __init__(self, parts, gens=None):
        """``parts`` is a list of backends; ``gens[i]`` lists the global
        (0-based) generator indices of part ``i`` (consecutive by default)."""
        parts = list(parts)
        if gens is None:
            gens, off = [], 0
            for b in parts:
                gens.append(tuple(range(off, off + b.ngens)))
                off += b.ngens
        self.parts = parts
        self.part_gens = [tuple(g) for g in gens]
        self.ngens = sum(len(g) for g in self.part_gens)
        self.owner = [255] * 256
        self._tr = []
        for i, g in enumerate(self.part_gens):
            if len(g) != parts[i].ngens:
                raise ValueError("generator assignment does not match part size")
            for x in g:
                self.owner[2 * x] = self.owner[2 * x + 1] = i
            self._tr.append(_translation(g))

    def project(self, w: bytes, i: int) -> bytes:
        """Letters of ``w`` belonging to part ``i``, in local numbering."""
        own = self.owner
        return bytes(c for c in w if own[c] == i).translate(self._tr[i][0])

    def lift(self, w: bytes, i: int) -> bytes:
        return w.translate(self._tr[i][1])

    def describe(self) -> dict:
        return {"kind": self.kind, "ngens": self.ngens,
                "parts": [dict(b.describe(), generators=list(g))
                          for b, g in zip(self.parts, self.part_gens)]}

    def __repr__(self):
        return f"{type(self).__name__}({self.parts!r})"


class DirectProduct(_Composite):
    kind = "direct_product"

    def _split(self, w: bytes) -> list[bytes]:
        return [self.project(w, i) for i in range(len(self.parts))]

    def nf(self, w: bytes) -> bytes:
        return b"".join(self.lift(b.nf(x), i)
                        for i, (b, x) in enumerate(zip(self.parts, self._split(w))))

    def reduce(self, w: bytes) -> bytes:
        return b"".join(self.lift(b.reduce(x), i)
                        for i, (b, x) in enumerate(zip(self.parts, self._split(w))))

    def new_table(self) -> ElementTable:
        if all(isinstance(t, CanonicalTable) for t in (b.new_table() for b in self.parts)):
            return CanonicalTable(self)
        return _ProductTable(self)


class _ProductTable(ElementTable):
    def __init__(self, backend: DirectProduct):
        self.backend = backend
        self.tables = [b.new_table() for b in backend.parts]

    def mul(self, key: bytes, w: bytes) -> bytes:
        b = self.backend
        out = []
        for i, t in enumerate(self.tables):
            k = b.project(key, i)
            x = b.project(w, i)
            out.append(b.lift(t.mul(k, x) if x else k, i))
        return b"".join(out)


class FreeProduct(_Composite):
    kind = "free_product"

    def _syllables(self, w: bytes) -> list[tuple[int, bytes]]:
        out: list[tuple[int, bytes]] = []
        own = self.owner
        start = 0
        for j in range(1, len(w) + 1):
            if j == len(w) or own[w[j]] != own[w[start]]:
                i = own[w[start]]
                out.append((i, w[start:j].translate(self._tr[i][0])))
                start = j
        return out

    def _combine(self, w: bytes, mul_part) -> bytes:
        stack: list[list] = []
        for i, syl in self._syllables(w):
            if stack and stack[-1][0] == i:
                merged = mul_part(i, stack[-1][1], syl)
                if merged:
                    stack[-1][1] = merged
                else:
                    stack.pop()
            else:
                s = mul_part(i, b"", syl)
                if s:
                    stack.append([i, s])
        return b"".join(self.lift(s, i) for i, s in stack)

    def nf(self, w: bytes) -> bytes:
        return self._combine(w, lambda i, a, b: self.parts[i].nf(a + b))

    def reduce(self, w: bytes) -> bytes:
        return self._combine(w, lambda i, a, b: self.parts[i].reduce(a + b))

    def new_table(self) -> ElementTable:
        if all(isinstance(b.new_table(), CanonicalTable) for b in self.parts):
            return CanonicalTable(self)
        return _FreeProductTable(self)


class _FreeProductTable(ElementTable):
    def __init__(self, backend: FreeProduct):
        self.backend = backend
        self.tables = [b.new_table() for b in backend.parts]

    def mul(self, key: bytes, w: bytes) -> bytes:
        # keys are concatenations of table-canonical syllables, so re-reading
        # them as syllables is unambiguous
        return self.backend._combine(key + w, lambda i, a, b: self.tables[i].mul(a, b))


class SmallCancellation(Backend):
    """C'(1/6) presentations: Dehn's algorithm decides triviality.

    ``nf`` returns the shortlex-least representative, found by enumerating the
    ball of radius ``|dehn(w)|`` in shortlex order (exponential cost; meant for
    short words).  Searches use ``DehnTable`` instead.
    """

    kind = "small_cancellation"

    def __init__(self, presentation: Presentation, quotient_seed: int = 0):
        self.presentation = presentation
        self.ngens = presentation.ngens
        self.dehn = Dehn(presentation)
        self.abelianization = Abelianization(presentation)
        self.quotients = find_permutation_quotients(presentation, seed=quotient_seed)
        self._shortlex: DehnTable | None = None
        self._shortlex_layers: list[set] = []

    def reduce(self, w: bytes) -> bytes:
        return _dehn(w, self.dehn.rules, self.dehn.lengths)

    def is_trivial(self, w: bytes) -> bool:
        return not self.reduce(w)

    def invariant(self, w: bytes) -> tuple:
        return self.abelianization.image(w) + tuple(q.image(w) for q in self.quotients)

    def new_table(self) -> "DehnTable":
        return DehnTable(self)

    def mul_fn(self):
        return self.new_table().mul

    def nf(self, w: bytes, cap: int = 2_000_000) -> bytes:
        r = self.reduce(w)
        if not r:
            return b""
        if self._shortlex is None:
            self._shortlex = DehnTable(self)
            self._shortlex_layers = [{b""}]
        t = self._shortlex
        gens = self.letters()
        while True:
            hit = t.find(r)
            if hit is not None:
                return hit
            if len(self._shortlex_layers) > len(r) or t.size > cap:
                raise BudgetExceeded("shortlex search exhausted")
            cur = self._shortlex_layers[-1]
            prev = self._shortlex_layers[-2] if len(self._shortlex_layers) > 1 else set()
            new = set()
            for k in sorted(cur):
                for g in gens:
                    u = t.mul(k, g)
                    if u not in prev and u not in cur:
                        new.add(u)
            self._shortlex_layers.append(new)

    def describe(self) -> dict:
        return {"kind": self.kind, "ngens": self.ngens,
                "relators": [list(r) for r in self.presentation.relators],
                "quotient_orders": [q.order for q in self.quotients]}


class DehnTable(ElementTable):
    """Element table for a small-cancellation group.

    Stored representatives are bucketed by homomorphic invariants; a new word
    is compared, by Dehn's algorithm, only against its bucket.  The first word
    stored for an element stays its key, so filling the table breadth-first in
    shortlex order yields shortlex normal forms.
    """

    def __init__(self, backend: SmallCancellation):
        self.backend = backend
        self.rules = backend.dehn.rules
        self.lengths = backend.dehn.lengths
        self.buckets: dict[tuple, list[bytes]] = {}
        self.size = 1

    def find(self, r: bytes) -> bytes | None:
        if not r:
            return b""
        bucket = self.buckets.get(self.backend.invariant(r))
        if bucket:
            for rep in bucket:
                if rep == r or not _dehn(inverse(rep) + r, self.rules, self.lengths):
                    return rep
        return None

    def intern(self, w: bytes) -> bytes:
        r = _dehn(w, self.rules, self.lengths)
        if not r:
            return b""
        key = self.backend.invariant(r)
        bucket = self.buckets.get(key)
        if bucket is None:
            self.buckets[key] = [w if len(w) == len(r) else r]
            self.size += 1
            return self.buckets[key][0]
        for rep in bucket:
            if rep == r or not _dehn(inverse(rep) + r, self.rules, self.lengths):
                return rep
        rep = w if len(w) == len(r) else r
        bucket.append(rep)
        self.size += 1
        return rep

    def mul(self, key: bytes, w: bytes) -> bytes:
        return self.intern(free_mul(key, free_reduce(w)))


def normal_form(backend: Backend, word: Word) -> Word:
    """Canonical representative of ``word`` (signed 1-based letters)."""
    return backend.normal_form(word)


@dataclass
class Homomorphism:
    """Generator-respecting map: source generator ``i`` goes to ``images[i]``."""

    source_ngens: int
    target: Backend
    images: list[bytes]

    def __post_init__(self):
        if len(self.images) != self.source_ngens:
            raise ValueError("one image per source generator required")

    @classmethod
    def from_words(cls, source_ngens: int, target: Backend, images) -> "Homomorphism":
        return cls(source_ngens, target, [encode(w) for w in images])

    def apply(self, w: bytes) -> bytes:
        out = bytearray()
        for c in w:
            img = self.images[c >> 1]
            out += inverse(img) if c & 1 else img
        return bytes(out)

    @classmethod
    def identity(cls, backend: Backend) -> "Homomorphism":
        return cls(backend.ngens, backend, [bytes([2 * g]) for g in range(backend.ngens)])
