"""Algebraic packings: plane orbits, conference matrices, binary codes."""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .binocular import BinocularPair, packing_from_lr
from .core import Packing, Plane, complement, orthonormalize
from .errors import GrassPackError, NotComplementClosed, NotConferenceMatrix


def plane_key(P: Plane, decimals: int = 8) -> bytes:
    """Basis-free fingerprint: the rounded projection matrix."""
    Pm = P.gen.T @ P.gen
    return (np.round(Pm, decimals) + 0.0).tobytes()


def dedupe(planes) -> list[Plane]:
    seen = set()
    out = []
    for P in planes:
        k = plane_key(P)
        if k not in seen:
            seen.add(k)
            out.append(P)
    return out


def orbit(seeds, transforms) -> list[Plane]:
    """Closure of ``seeds`` under right multiplication by the given m x m matrices."""
    out = dedupe(seeds)
    seen = {plane_key(P) for P in out}
    todo = deque(out)
    while todo:
        P = todo.popleft()
        for T in transforms:
            Q = orthonormalize(P.gen @ T)
            k = plane_key(Q)
            if k not in seen:
                seen.add(k)
                out.append(Q)
                todo.append(Q)
    return out


def _perm_matrix(images) -> np.ndarray:
    """Matrix sending coordinate i to coordinate images[i] (row-vector convention)."""
    m = len(images)
    T = np.zeros((m, m))
    T[np.arange(m), images] = 1
    return T


# ---------------------------------------------------------------------------
# plane packings


def planes70_g84() -> Packing:
    """70 four-planes in R^8 with d_c^2 = 2, meeting the orthoplex bound.

    Coordinates are labelled inf, 0, 1, ..., 6 (array positions 0..7).  The
    planes form the orbit of two seed planes under sign changes of an even
    number of coordinates and the permutations (0123456), (inf 0)(16)(23)(45)
    and (124)(365).
    """
    pos = {"inf": 0, **{i: i + 1 for i in range(7)}}
    e = np.eye(8)

    def vec(*labels):
        return sum(e[pos[x]] for x in labels)

    seeds = [
        orthonormalize([vec("inf"), vec(0), vec(1), vec(3)]),
        orthonormalize([vec("inf", 0), vec(1, 3), vec(2, 6), vec(4, 5)]) ,
    ]

    def from_cycles(*cycles):
        img = list(range(8))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[pos[a]] = pos[b]
        return _perm_matrix(img)

    transforms = [
        from_cycles((0, 1, 2, 3, 4, 5, 6)),
        from_cycles(("inf", 0), (1, 6), (2, 3), (4, 5)),
        from_cycles((1, 2, 4), (3, 6, 5)),
    ]
    for k in range(1, 8):
        S = np.ones(8)
        S[0] = S[k] = -1
        transforms.append(np.diag(S))
    planes = orbit(seeds, transforms)
    return Packing(tuple(planes), comments=("70 planes in G(8,4)",))


def planes28_g73() -> Packing:
    """28 three-planes in R^7 meeting the simplex bound 16/9.

    ``v_r`` has 1 at position 2^r mod 7 and +-sqrt 2 at 3 * 2^r mod 7; a plane
    is spanned by v_0, v_1, v_2 with an even number of minus signs, and the
    four sign choices are cycled through the seven coordinates.
    """
    gens = []
    for signs in itertools.product((1, -1), repeat=3):
        if np.prod(signs) < 0:
            continue
        base = np.zeros((3, 7))
        for r, s in enumerate(signs):
            base[r, pow(2, r, 7)] = 1
            base[r, 3 * pow(2, r, 7) % 7] = s * math.sqrt(2)
        for shift in range(7):
            gens.append(np.roll(base, shift, axis=1))
    return Packing.from_gens(gens, comments=("28 planes in G(7,3)",))


def planes18_g42() -> Packing:
    """18 planes in R^4 spanned by perpendicular pairs of D4 minimal vectors."""
    vecs = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = np.zeros(4)
            v[i], v[j] = si, sj
            vecs.append(v)
    planes = []
    for a, b in itertools.combinations(vecs, 2):
        if a @ b == 0:
            planes.append(orthonormalize([a, b]))
    return Packing(tuple(dedupe(planes)), comments=("18 planes in G(4,2)",))


_TAU = (1 + math.sqrt(5)) / 2


def _icosahedron_reps(tau: float) -> np.ndarray:
    pts = []
    for s in (1, -1):
        pts += [(0, 1, s * tau), (tau, 0, s), (1, s * tau, 0)]
    pts = np.array(pts, float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def icosahedral6_g42() -> Packing:
    """6 equidistant planes in R^4, d_c^2 = 6/5.

    Left code: icosahedron vertices; each is matched with its image under
    sqrt 5 -> -sqrt 5, renormalized.
    """
    left = _icosahedron_reps(_TAU)
    right = _icosahedron_reps(-1 / _TAU)
    pairs = [BinocularPair.normalized(a, b) for a, b in zip(left, right)]
    return packing_from_lr(pairs, comments=("6 planes in G(4,2), icosahedral binocular code",))


def decagonal10_g42() -> Packing:
    """10 equidistant planes in R^4 (d_c^2 = 10/9) from a decagonal prism."""
    t = math.pi / 5
    a, b = math.sqrt(2 / 3), math.sqrt(1 / 3)
    pairs = []
    for r in range(10):
        l = (a * math.cos(r * t), a * math.sin(r * t), b)
        rr = np.array([a * math.cos(3 * r * t), a * math.sin(3 * r * t), b]) * (-1) ** r
        pairs.append(BinocularPair.normalized(l, rr))
    return packing_from_lr(pairs, comments=("10 planes in G(4,2), decagonal prism code",))


# ---------------------------------------------------------------------------
# conference matrices


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not _is_prime(p):
                break
            return p, k
    raise GrassPackError(f"{q} is not a prime power")


class _GF:
    """GF(p^k); elements are ints whose base-p digits are polynomial coefficients."""

    def __init__(self, q: int):
        self.p, self.k = _prime_power(q)
        self.q = q
        self.mod = self._irreducible() if self.k > 1 else None

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _num(self, digits):
        return sum(int(d) % self.p * self.p ** i for i, d in enumerate(digits))

    def _polymod(self, c, mod):
        c = list(c)
        while len(c) >= len(mod):
            lead = c[-1]
            if lead:
                shift = len(c) - len(mod)
                for i, m in enumerate(mod):
                    c[shift + i] = (c[shift + i] - lead * m) % self.p
            c.pop()
        return c

    def _irreducible(self):
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            mod = list(tail) + [1]
            if tail[0] == 0:
                continue
            ok = True
            for deg in range(1, k // 2 + 1):
                for dtail in itertools.product(range(p), repeat=deg):
                    rem = self._polymod(mod, list(dtail) + [1])
                    if not any(rem):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return mod
        raise GrassPackError("no irreducible polynomial found")  # unreachable

    def sub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return self._num([x - y for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        x, y = self._digits(a), self._digits(b)
        c = [0] * (2 * self.k - 1)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                c[i + j] = (c[i + j] + xi * yj) % self.p
        return self._num(self._polymod(c, self.mod))

    def squares(self) -> set:
        return {self.mul(a, a) for a in range(1, self.q)}


def paley_conference_matrix(q: int) -> np.ndarray:
    """Symmetric conference matrix of order q + 1 for a prime power q = 1 mod 4."""
    if q % 4 != 1:
        raise GrassPackError("symmetric Paley matrices need q = 1 (mod 4)")
    F = _GF(q)
    sq = F.squares()
    C = np.zeros((q + 1, q + 1), dtype=int)
    C[0, 1:] = C[1:, 0] = 1
    for a in range(q):
        for b in range(q):
            if a != b:
                C[a + 1, b + 1] = 1 if F.sub(a, b) in sq else -1
    return C


def check_conference_matrix(C) -> int:
    """Return q when C is a symmetric conference matrix of order q + 1 = 2 (mod 4)."""
    C = np.asarray(C)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise NotConferenceMatrix("conference matrix must be square")
    n = C.shape[0]
    q = n - 1
    off = ~np.eye(n, dtype=bool)
    if np.any(np.diag(C) != 0) or not np.all(np.isin(C[off], (-1, 1))):
        raise NotConferenceMatrix("need zero diagonal and +-1 elsewhere")
    if not np.array_equal(C, C.T):
        raise NotConferenceMatrix("conference matrix must be symmetric")
    if not np.array_equal(C.T @ C, q * np.eye(n, dtype=C.dtype)):
        raise NotConferenceMatrix("C^T C != q I")
    if n % 4 != 2:
        raise NotConferenceMatrix("order must be 2 mod 4")
    return q


def lines_from_conference_matrix(C) -> Packing:
    """q + 1 equiangular lines in R^{(q+1)/2} with |cos| = 1/sqrt q."""
    C = np.asarray(C)
    q = check_conference_matrix(C)
    G = np.eye(q + 1) + C / math.sqrt(q)
    w, V = np.linalg.eigh(G)
    m = (q + 1) // 2
    # eigenvalues are 0 and 2, each with multiplicity m
    X = V[:, -m:] * np.sqrt(w[-m:])
    return Packing.from_gens(X[:, None, :], comments=(f"conference matrix, q={q}",))


def diplo_simplex_lines(n: int) -> Packing:
    """n + 1 lines in R^n with |cos| = 1/n (a diplo-simplex)."""
    if n < 2:
        raise GrassPackError("diplo-simplex needs n >= 2")
    c = 1 / math.sqrt(n * (n + 1))
    V = c * (np.full((n + 1, n + 1), -1.0) + (n + 1) * np.eye(n + 1))
    basis = complement(orthonormalize(np.ones((1, n + 1)))).gen
    return Packing.from_gens((V @ basis.T)[:, None, :], comments=(f"diplo-simplex, n={n}",))


# ---------------------------------------------------------------------------
# binary codes


@dataclass(frozen=True, eq=False)
class BinaryCode:
    """Codewords as +-1 vectors (0 -> +1, 1 -> -1)."""

    words: np.ndarray
    name: str = ""

    def __post_init__(self):
        w = np.array(self.words, dtype=np.int8)
        if w.ndim != 2 or not np.all(np.isin(w, (-1, 1))):
            raise GrassPackError("codewords must be +-1 vectors of one length")
        w.setflags(write=False)
        object.__setattr__(self, "words", w)

    @classmethod
    def from_bits(cls, bits, name: str = "") -> "BinaryCode":
        bits = np.asarray(bits, dtype=np.int8)
        return cls(1 - 2 * bits, name)

    @property
    def m(self) -> int:
        return self.words.shape[1]

    @property
    def size(self) -> int:
        return self.words.shape[0]

    @cached_property
    def closed_under_complement(self) -> bool:
        have = {w.tobytes() for w in self.words}
        return all((-w).tobytes() in have for w in self.words)

    @cached_property
    def min_distance(self) -> int:
        W = self.words.astype(np.int64)
        ip = W @ W.T
        np.fill_diagonal(ip, -self.m - 1)
        # Hamming distance = (m - <x, y>) / 2
        return int((self.m - ip.max()) // 2)


def _representatives(code: BinaryCode) -> np.ndarray:
    if not code.closed_under_complement:
        raise NotComplementClosed("code is not closed under complementation")
    seen = set()
    reps = []
    for w in code.words:
        key = w.tobytes()
        if key in seen:
            continue
        seen.add(key)
        seen.add((-w).tobytes())
        reps.append(w)
    return np.array(reps, dtype=np.int64)


def lines_from_code(code: BinaryCode) -> Packing:
    """One line per complementary pair of codewords, spanned by ``w / sqrt m``."""
    reps = _representatives(code)
    gens = reps[:, None, :] / math.sqrt(code.m)
    return Packing.from_gens(gens, comments=(f"lines from code {code.name}".strip(),))


def code_lines_min_dc2(code: BinaryCode) -> Fraction:
    """Exact minimal d_c^2 of :func:`lines_from_code`, ``1 - <x,y>^2 / m^2``."""
    reps = _representatives(code)
    ip = reps @ reps.T
    np.fill_diagonal(ip, 0)
    if len(reps) < 2:
        raise GrassPackError("need at least two lines")
    worst = int(np.abs(ip).max())
    return 1 - Fraction(worst * worst, code.m * code.m)


def code_dc2_formula(m: int, d: int) -> Fraction:
    """4 d (m - d) / m^2."""
    return Fraction(4 * d * (m - d), m * m)


def repetition_code(m: int) -> BinaryCode:
    return BinaryCode.from_bits([[0] * m, [1] * m], name=f"repetition({m})")


def _span(gen: np.ndarray) -> np.ndarray:
    gen = np.asarray(gen, dtype=np.int64) % 2
    k = gen.shape[0]
    coeffs = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)
    return (coeffs @ gen) % 2


def reed_muller_2_4() -> np.ndarray:
    """All 2048 words of the [16, 11, 4] second-order Reed-Muller code (bits)."""
    pts = np.array(list(itertools.product((0, 1), repeat=4)), dtype=np.int64)
    rows = [np.ones(16, dtype=np.int64)]
    rows += [pts[:, i] for i in range(4)]
    rows += [pts[:, i] * pts[:, j] for i, j in itertools.combinations(range(4), 2)]
    return _span(np.array(rows))


def shortened_hamming_code() -> BinaryCode:
    """[10, 5, 4] code containing the all-ones word: 32 words.

    Obtained from RM(2, 4) by keeping the words that vanish on the support
    of a weight-6 word and deleting those six positions.
    """
    rm = reed_muller_2_4()
    w6 = next(w for w in rm if w.sum() == 6)
    keep = w6 == 0
    words = rm[np.all(rm[:, ~keep] == 0, axis=1)][:, keep]
    return BinaryCode.from_bits(words, name="shortened Hamming [10,5,4]")


_GOLAY_POLY = (1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1)  # x^11+x^10+x^6+x^5+x^4+x^2+1, low degree first


def extended_golay_code() -> np.ndarray:
    """All 4096 words of the [24, 12, 8] extended Golay code (bits)."""
    g = np.array(_GOLAY_POLY, dtype=np.int64)
    gen = np.zeros((12, 23), dtype=np.int64)
    for i in range(12):
        gen[i, i:i + 12] = g
    words = _span(gen)
    parity = words.sum(axis=1) % 2
    return np.hstack([words, parity[:, None]])


def nordstrom_robinson_code() -> BinaryCode:
    """The (16, 256, 6) Nordstrom-Robinson code.

    Take an octad of the extended Golay code containing the last coordinate.
    Keep the codewords whose octad part is zero or has weight two with a 1 in
    the last octad position, then delete the octad.
    """
    golay = extended_golay_code()
    octad = next(w for w in golay if w.sum() == 8 and w[-1] == 1)
    idx = np.flatnonzero(octad)
    part = golay[:, idx]
    ok = (part.sum(axis=1) == 0) | ((part.sum(axis=1) == 2) & (part[:, -1] == 1))
    rest = np.flatnonzero(octad == 0)
    return BinaryCode.from_bits(golay[ok][:, rest], name="Nordstrom-Robinson")


# ---------------------------------------------------------------------------

CONSTRUCTIONS = {
    "planes70-g84": planes70_g84,
    "planes28-g73": planes28_g73,
    "planes18-g42": planes18_g42,
    "icosahedral6-g42": icosahedral6_g42,
    "decagonal10-g42": decagonal10_g42,
    "shortened-hamming": lambda: lines_from_code(shortened_hamming_code()),
    "nordstrom-robinson": lambda: lines_from_code(nordstrom_robinson_code()),
    "conference": lambda q=5: lines_from_conference_matrix(paley_conference_matrix(int(q))),
    "diplo": lambda n=4: diplo_simplex_lines(int(n)),
}


def construct(name: str, *args) -> Packing:
    try:
        fn = CONSTRUCTIONS[name.replace("_", "-")]
    except KeyError:
        raise GrassPackError(f"unknown construction {name!r}; known: {', '.join(CONSTRUCTIONS)}")
    return fn(*args)
