"""Arenas with staged hiding, and justified sequences over them.

An arena describes which moves exist, who owns them (O or P), whether they
are questions or answers, how deep inside an intermediate computation they
sit (their degree: 0 means externally visible), and which move enables
which.  Move sets may be infinite (numeric answers, replicated threads), so
an arena carries membership/label/enabling *functions* plus a finite sample
of moves used by validators and bounded searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional


class _Star:
    """Unique sentinel enabling initial moves."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STAR"


STAR = _Star()


class _Omega:
    """Hiding depth meaning 'all internal degrees'."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"


OMEGA = _Omega()

Depth = "int | _Omega"


def clamp_depth(d, mu: int) -> int:
    """Turn a hiding depth into a concrete number of levels for this arena."""
    if d is OMEGA:
        return mu
    if not isinstance(d, int) or d < 0:
        raise ValueError(f"hiding depth must be a natural number or OMEGA, got {d!r}")
    return d


# Tags locating a move inside a composite arena.  A tag is either a plain
# string ("L", "R", "s1", "s2") or a pair ("b", i) / ("c", i) carrying a
# thread or copy index.
Tag = "str | tuple[str, int]"


@dataclass(frozen=True)
class MoveId:
    """A move: a base symbol plus a path of component tags (outermost first)."""

    base: "str | int"
    path: tuple = ()

    def push(self, tag) -> "MoveId":
        return MoveId(self.base, (tag,) + self.path)

    def pop(self) -> "MoveId":
        return MoveId(self.base, self.path[1:])

    def head(self):
        return self.path[0] if self.path else None

    def __repr__(self):
        if not self.path:
            return f"<{self.base}>"
        tags = ".".join(t if isinstance(t, str) else f"{t[0]}{t[1]}" for t in self.path)
        return f"<{tags}:{self.base}>"


def tag_to_json(tag):
    return tag if isinstance(tag, str) else [tag[0], tag[1]]


def tag_from_json(obj):
    return obj if isinstance(obj, str) else (obj[0], int(obj[1]))


def move_to_json(m: MoveId) -> dict:
    return {"base": m.base, "path": [tag_to_json(t) for t in m.path]}


def move_from_json(obj) -> MoveId:
    return MoveId(obj["base"], tuple(tag_from_json(t) for t in obj["path"]))


@dataclass(frozen=True)
class MoveLabel:
    owner: str  # "O" | "P"
    kind: str  # "Q" | "A"
    degree: int = 0

    def flip(self) -> "MoveLabel":
        return MoveLabel("P" if self.owner == "O" else "O", self.kind, self.degree)

    def shift(self, delta: int) -> "MoveLabel":
        if self.degree == 0 and delta < 0:
            return self
        return MoveLabel(self.owner, self.kind, max(0, self.degree + delta))


class Arena:
    """Move universe with labelling and enabling.

    contains/label/enables are total on the intended move set; `samples`
    is a finite probe used by validation and property tests, and
    `successors` is a bounded enumeration of enabled moves used when hiding
    composes enabling across deleted chains.  Answers never enable further
    moves in any arena built here, so the bounded enumeration is complete
    for chain search.
    """

    def __init__(
        self,
        contains: Callable[[MoveId], bool],
        label: Callable[[MoveId], MoveLabel],
        enables: Callable[[object, MoveId], bool],
        successors: Callable[[object], Iterable[MoveId]],
        mu: int,
        samples: tuple,
        name: str = "arena",
    ):
        self._contains = contains
        self._label = label
        self._enables = enables
        self._successors = successors
        self.mu = mu
        self.samples = tuple(samples)
        self.name = name
        # membership, labels and enabling are pure; layered constructions
        # ask for them constantly, so cache per move
        self._ccache = {}
        self._lcache = {}
        self._ecache = {}

    def contains(self, m: MoveId) -> bool:
        try:
            return self._ccache[m]
        except KeyError:
            r = self._ccache[m] = bool(self._contains(m))
            return r

    def label(self, m: MoveId) -> MoveLabel:
        try:
            return self._lcache[m]
        except KeyError:
            r = self._lcache[m] = self._label(m)
            return r

    def degree(self, m: MoveId) -> int:
        return self.label(m).degree

    def enables(self, m, n: MoveId) -> bool:
        try:
            return self._ecache[(m, n)]
        except KeyError:
            r = self._ecache[(m, n)] = bool(self._enables(m, n))
            return r

    def successors(self, m) -> Iterable[MoveId]:
        return self._successors(m)

    def initials(self) -> Iterable[MoveId]:
        return self._successors(STAR)

    def is_initial(self, m: MoveId) -> bool:
        return self._enables(STAR, m)

    def __repr__(self):
        return f"Arena({self.name}, mu={self.mu})"


def empty_arena() -> Arena:
    return Arena(
        contains=lambda m: False,
        label=lambda m: (_ for _ in ()).throw(KeyError(m)),
        enables=lambda m, n: False,
        successors=lambda m: (),
        mu=0,
        samples=(),
        name="empty",
    )


def flat_arena(answers: Iterable, name: str = "flat") -> Arena:
    """One O-question enabling P-answers drawn from `answers` (all degree 0).

    Membership accepts any int answer when `answers` contains an int, so the
    intended answer set (a copy of the naturals) stays unbounded while probes
    remain finite.
    """
    answer_samples = tuple(answers)
    numeric = any(isinstance(a, int) for a in answer_samples)
    q = MoveId("q")

    def contains(m):
        if m == q:
            return True
        if m.path:
            return False
        if numeric and isinstance(m.base, int) and m.base >= 0:
            return True
        return m.base in answer_samples

    def label(m):
        if m == q:
            return MoveLabel("O", "Q", 0)
        if contains(m):
            return MoveLabel("P", "A", 0)
        raise KeyError(m)

    def enables(m, n):
        if m is STAR:
            return n == q
        return m == q and contains(n) and n != q

    def successors(m):
        if m is STAR:
            return (q,)
        if m == q:
            return tuple(MoveId(a) for a in answer_samples)
        return ()

    samples = (q,) + tuple(MoveId(a) for a in answer_samples)
    return Arena(contains, label, enables, successors, 0, samples, name)


def hide_arena(a: Arena, d) -> Arena:
    """Delete moves of degree 1..d, lower remaining positive degrees by d,
    and compose enabling across even-length chains of deleted moves."""
    dd = clamp_depth(d, a.mu)
    if dd == 0:
        return a

    def deleted(m):
        return 0 < a.degree(m) <= dd

    def contains(m):
        return a.contains(m) and not deleted(m)

    def label(m):
        if not contains(m):
            raise KeyError(m)
        return a.label(m).shift(-dd)

    def chain_reaches(m, n):
        # even-length chains m |- x1 |- ... |- x2k |- n through deleted moves
        frontier = [x for x in a.successors(m) if a.contains(x) and deleted(x)]
        seen = set(frontier)
        parity = 1
        while frontier:
            nxt = []
            for x in frontier:
                for y in a.successors(x):
                    if not a.contains(y):
                        continue
                    if deleted(y):
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                    elif parity % 2 == 0 and y == n:
                        return True
            frontier = nxt
            parity += 1
        return False

    def enables(m, n):
        if not contains(n):
            return False
        if m is STAR:
            return a.enables(STAR, n)
        if not contains(m):
            return False
        if a.enables(m, n):
            return True
        return chain_reaches(m, n)

    def successors(m):
        if m is STAR:
            return tuple(x for x in a.initials() if contains(x))
        if not contains(m):
            return ()
        out = []
        direct = set()
        for x in a.successors(m):
            if contains(x):
                direct.add(x)
                out.append(x)
        # survivors reachable through deleted even chains
        frontier = [x for x in a.successors(m) if a.contains(x) and 0 < a.degree(x) <= dd]
        seen = set(frontier)
        parity = 1
        while frontier:
            nxt = []
            for x in frontier:
                for y in a.successors(x):
                    if not a.contains(y):
                        continue
                    if 0 < a.degree(y) <= dd:
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                    elif parity % 2 == 0 and y not in direct:
                        direct.add(y)
                        out.append(y)
            frontier = nxt
            parity += 1
        return tuple(out)

    samples = tuple(m for m in a.samples if contains(m))
    return Arena(
        contains,
        label,
        enables,
        successors,
        max(0, a.mu - dd),
        samples,
        name=f"hide({a.name},{dd})",
    )


@dataclass
class ArenaViolation:
    axiom: str
    detail: str

    def __repr__(self):
        return f"[{self.axiom}] {self.detail}"


def validate_arena(a: Arena, extra_samples: Iterable = ()) -> list:
    """Check the arena axioms on the sample set.

    - initial moves are O-questions of degree 0, enabled only by the root;
    - a question enabling an answer shares its degree;
    - non-root enabling links opposite owners;
    - a non-root enabling that changes degree starts from an O-move;
    - every degree is at most mu.
    """
    out = []
    sample = list(dict.fromkeys(tuple(a.samples) + tuple(extra_samples)))
    for m in sample:
        if not a.contains(m):
            out.append(ArenaViolation("membership", f"sample {m} not in arena"))
            continue
        lab = a.label(m)
        if lab.degree > a.mu:
            out.append(ArenaViolation("mu", f"{m} has degree {lab.degree} > mu={a.mu}"))
        if a.enables(STAR, m):
            if not (lab.owner == "O" and lab.kind == "Q" and lab.degree == 0):
                out.append(ArenaViolation("E1", f"initial {m} is not an external O-question"))
            for n in sample:
                if n != m and a.contains(n) and a.enables(n, m):
                    out.append(ArenaViolation("E1", f"initial {m} also enabled by {n}"))
    for m, n in itertools.product(sample, repeat=2):
        if not (a.contains(m) and a.contains(n)):
            continue
        if not a.enables(m, n):
            continue
        lm, ln = a.label(m), a.label(n)
        if ln.kind == "A" and (lm.kind != "Q" or lm.degree != ln.degree):
            out.append(ArenaViolation("E2", f"{m} |- {n}: answer not matching question/degree"))
        if lm.owner == ln.owner:
            out.append(ArenaViolation("E3", f"{m} |- {n}: same owner"))
        if lm.degree != ln.degree and lm.owner != "O":
            out.append(ArenaViolation("E4", f"{m} |- {n}: degree change from a P-move"))
    return out


# ---------------------------------------------------------------------------
# Justified sequences


@dataclass(frozen=True)
class JSeq:
    """A finite sequence of moves with justification pointers.

    entries[i] = (move, ptr) where ptr is the index of the justifying
    occurrence, or None for initial moves.
    """

    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def move(self, i: int) -> MoveId:
        return self.entries[i][0]

    def ptr(self, i: int) -> Optional[int]:
        return self.entries[i][1]

    def last(self):
        return self.entries[-1]

    def snoc(self, move: MoveId, ptr: Optional[int]) -> "JSeq":
        return JSeq(self.entries + ((move, ptr),))

    def prefix(self, n: int) -> "JSeq":
        return JSeq(self.entries[:n])

    def moves(self) -> tuple:
        return tuple(m for m, _ in self.entries)

    def __repr__(self):
        bits = []
        for i, (m, p) in enumerate(self.entries):
            bits.append(f"{i}:{m}" + ("" if p is None else f"->{p}"))
        return "JSeq[" + " ".join(bits) + "]"


def jseq_of(*pairs) -> JSeq:
    return JSeq(tuple(pairs))


def jseq_to_json(s: JSeq, a: Optional[Arena] = None) -> list:
    out = []
    for m, p in s.entries:
        item = move_to_json(m)
        if a is not None:
            lab = a.label(m)
            item.update(owner=lab.owner, kind=lab.kind, degree=lab.degree)
        item["pointer"] = p
        out.append(item)
    return out


def jseq_from_json(obj) -> JSeq:
    return JSeq(tuple((move_from_json(it), it.get("pointer")) for it in obj))


def check_justified(s: JSeq, a: Arena) -> Optional[str]:
    """None if every pointer is a well-formed enabling; else a description."""
    for i, (m, p) in enumerate(s.entries):
        if not a.contains(m):
            return f"move {m} at {i} not in arena"
        if p is None:
            if not a.enables(STAR, m):
                return f"non-initial {m} at {i} lacks a pointer"
        else:
            if not (0 <= p < i):
                return f"pointer {p} at {i} out of range"
            if not a.enables(s.move(p), m):
                return f"{s.move(p)} does not enable {m} (at {i})"
    return None


def justifier_chain(s: JSeq, i: int) -> list:
    """Indices from i's justifier up the pointer chain to an initial move."""
    out = []
    p = s.ptr(i)
    while p is not None:
        out.append(p)
        p = s.ptr(p)
    return out


def external_justifier(s: JSeq, a: Arena, i: int, d) -> Optional[int]:
    """First ancestor of occurrence i that survives d-hiding.

    Walks the justifier chain from i, skipping ancestors whose degree lies
    in 1..d; returns the first surviving index, or None if i is initial or
    every ancestor is deleted.
    """
    dd = clamp_depth(d, a.mu)
    p = s.ptr(i)
    while p is not None:
        if not (0 < a.degree(s.move(p)) <= dd):
            return p
        p = s.ptr(p)
    return None


def hide_jseq(s: JSeq, a: Arena, d) -> JSeq:
    """Delete entries of degree 1..d and rewire pointers to the first
    surviving ancestor.  Point-wise, hence independent of deletion order."""
    dd = clamp_depth(d, a.mu)
    keep = [i for i in range(len(s)) if not (0 < a.degree(s.move(i)) <= dd)]
    renum = {old: new for new, old in enumerate(keep)}
    entries = []
    for old in keep:
        ext = external_justifier(s, a, old, dd)
        entries.append((s.move(old), renum[ext] if ext is not None else None))
    return JSeq(tuple(entries))


def hidden_indices(s: JSeq, a: Arena, d) -> list:
    """Original indices surviving d-hiding, in order."""
    dd = clamp_depth(d, a.mu)
    return [i for i in range(len(s)) if not (0 < a.degree(s.move(i)) <= dd)]


def is_complete(s: JSeq, a: Arena, d) -> bool:
    """Empty, or ends with a move that survives d-hiding."""
    if not s:
        return True
    dd = clamp_depth(d, a.mu)
    deg = a.degree(s.move(len(s) - 1))
    return deg == 0 or deg > dd


def truncate_hide(s: JSeq, a: Arena, d) -> JSeq:
    """d-hide, dropping the dangling last entry when s is not d-complete."""
    t = hide_jseq(s, a, d)
    if is_complete(s, a, d):
        return t
    return t.prefix(len(t) - 1)


# ---------------------------------------------------------------------------
# Views and legality


def p_view(s: JSeq, a: Arena) -> list:
    """Indices of the P-view of s (in order)."""
    out = []
    i = len(s) - 1
    while i >= 0:
        m = s.move(i)
        lab = a.label(m)
        if lab.owner == "P":
            out.append(i)
            i -= 1
        elif s.ptr(i) is None:
            out.append(i)
            break
        else:
            out.append(i)
            j = s.ptr(i)
            out.append(j)
            i = j - 1
    out.reverse()
    return out


def o_view(s: JSeq, a: Arena) -> list:
    """Indices of the O-view of s (in order)."""
    out = []
    i = len(s) - 1
    while i >= 0:
        m = s.move(i)
        lab = a.label(m)
        if lab.owner == "O":
            out.append(i)
            i -= 1
        else:
            j = s.ptr(i)
            out.append(i)
            if j is None:
                break
            out.append(j)
            i = j - 1
    out.reverse()
    return out


@dataclass
class LegalVerdict:
    ok: bool
    reason: Optional[str] = None  # justification | alternation | generalized-visibility | ie-switch
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_legal(s: JSeq, a: Arena) -> LegalVerdict:
    """Justification, alternation, visibility at every hiding stage that
    leaves the prefix complete, and the owner condition on degree changes."""
    err = check_justified(s, a)
    if err is not None:
        return LegalVerdict(False, "justification", err)

    for i in range(1, len(s)):
        if a.label(s.move(i - 1)).owner == a.label(s.move(i)).owner:
            return LegalVerdict(False, "alternation", f"same owner at {i - 1},{i}")

    for i in range(1, len(s)):
        la, lb = a.label(s.move(i - 1)), a.label(s.move(i))
        if la.degree != lb.degree and la.owner != "O":
            return LegalVerdict(False, "ie-switch", f"degree change after P-move at {i - 1}")

    for d in range(0, a.mu + 1):
        ha = hide_arena(a, d) if d else a
        for i in range(len(s)):
            pre = s.prefix(i + 1)
            if s.ptr(i) is None or not is_complete(pre, a, d):
                continue
            if 0 < a.degree(s.move(i)) <= d:
                continue
            t = hide_jseq(pre, a, d)
            k = len(t) - 1
            if t.ptr(k) is None:
                if not ha.enables(STAR, t.move(k)):
                    return LegalVerdict(
                        False,
                        "generalized-visibility",
                        f"occurrence {i} loses its justifier after hiding {d}",
                    )
                continue
            lab = ha.label(t.move(k))
            view = p_view(t.prefix(k), ha) if lab.owner == "P" else o_view(t.prefix(k), ha)
            if t.ptr(k) not in view:
                return LegalVerdict(
                    False,
                    "generalized-visibility",
                    f"justifier of occurrence {i} invisible after hiding {d}",
                )
    return LegalVerdict(True)
