"""Multi-index arithmetic and the Bohr correspondence.

A multi-index is a finitely supported integer exponent sequence; it indexes
the Fourier monomial e^{i nu . theta} on the infinite torus.  The Bohr
correspondence identifies the coefficient at nu with the Dirichlet
coefficient a_n of the integer n = p_1^{nu_1} p_2^{nu_2} ... built from the
ordered primes, turning multivariate Fourier data into Dirichlet series and
back.

Prime factorisation runs by trial division against a cached sieve
(smallest-prime-factor table, default bound 10^6).  The sieve grows on
demand for larger prime factors, up to a hard cap; integers are restricted
to the unsigned 64-bit range.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ConfigError, DomainError, ResourceError, SpectrumError

U64_MAX = 2**64 - 1

_SIEVE_DEFAULT = 1_000_000
_SIEVE_CAP = 50_000_000


class _PrimeTable:
    """Smallest-prime-factor sieve with prime indexing, grown on demand."""

    def __init__(self, bound: int = _SIEVE_DEFAULT):
        self.bound = 0
        self._grow(bound)

    def _grow(self, bound: int) -> None:
        if bound > _SIEVE_CAP:
            raise ResourceError(
                f"sieve bound {bound} exceeds the cap {_SIEVE_CAP}; "
                "prime factors this large are out of desk scale"
            )
        spf = np.zeros(bound + 1, dtype=np.int64)
        for i in range(2, math.isqrt(bound) + 1):
            if spf[i] == 0:
                block = spf[i * i :: i]
                block[block == 0] = i
        rest = np.flatnonzero(spf == 0)
        spf[rest] = rest  # primes (and 0, 1, harmless)
        primes = np.flatnonzero(spf == np.arange(bound + 1))
        primes = primes[primes >= 2]
        index = np.zeros(bound + 1, dtype=np.int64)
        index[primes] = np.arange(1, len(primes) + 1)
        self.bound = bound
        # plain lists: scalar access is several times faster than numpy
        self._spf = spf.tolist()
        self._index = index.tolist()
        self._primes = primes.tolist()

    def ensure(self, bound: int) -> None:
        if bound <= self.bound:
            return
        if bound > _SIEVE_CAP:
            raise ResourceError(
                f"sieve bound {bound} exceeds the cap {_SIEVE_CAP}; "
                "prime factors this large are out of desk scale"
            )
        self._grow(min(max(bound, 2 * self.bound), _SIEVE_CAP))

    def nth_prime(self, j: int) -> int:
        while j > len(self._primes):
            if self.bound >= _SIEVE_CAP:
                raise ResourceError(f"prime #{j} lies beyond the sieve cap {_SIEVE_CAP}")
            # p_j < j (ln j + ln ln j) for j >= 6; pad generously
            est = int(j * (math.log(j + 2) + math.log(math.log(j + 2)) + 2)) + 10
            self._grow(min(max(est, 2 * self.bound), _SIEVE_CAP))
        return self._primes[j - 1]

    def prime_position(self, p: int) -> int:
        self.ensure(p)
        j = self._index[p]
        if j == 0:
            raise ConfigError(f"{p} is not prime")
        return j

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorisation as ordered (prime, exponent) pairs."""
        out: list[tuple[int, int]] = []
        if n <= self.bound:
            spf = self._spf
            while n > 1:
                p = spf[n]
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            return out
        for p in self._primes:
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        if n > 1:
            if n <= self.bound or _is_prime_u64(n):
                self.ensure(n)  # may raise ResourceError for huge primes
                out.append((n, 1))
                out.sort()
            else:
                raise ResourceError(
                    f"cofactor {n} has no prime factor below the sieve bound "
                    f"{self.bound} and is composite; out of desk scale"
                )
        return out


def _is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_TABLE: _PrimeTable | None = None


def _table() -> _PrimeTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = _PrimeTable()
    return _TABLE


class MultiIndex:
    """Finitely supported integer exponent sequence, in canonical form.

    ``entries`` is a tuple of (coordinate, exponent) pairs with strictly
    increasing coordinates >= 1 and nonzero exponents.  Instances are
    immutable and hashable; equality respects the canonical form.
    """

    __slots__ = ("entries",)

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        merged: dict[int, int] = {}
        for j, e in pairs:
            j = int(j)
            e = int(e)
            if j < 1:
                raise ConfigError(f"coordinate {j} must be >= 1")
            merged[j] = merged.get(j, 0) + e
        ent = tuple((j, e) for j, e in sorted(merged.items()) if e != 0)
        object.__setattr__(self, "entries", ent)

    @classmethod
    def _raw(cls, entries: tuple[tuple[int, int], ...]) -> "MultiIndex":
        """Trusted constructor: entries already canonical."""
        self = object.__new__(cls)
        object.__setattr__(self, "entries", entries)
        return self

    def __setattr__(self, name, value):  # immutability
        raise AttributeError("MultiIndex is immutable")

    # -- derived quantities -------------------------------------------------

    @property
    def order(self) -> int:
        """|nu|_1 = sum of |exponents|."""
        return sum(abs(e) for _, e in self.entries)

    @property
    def diagonal_sum(self) -> int:
        """s(nu) = sum of exponents (common rotation frequency)."""
        return sum(e for _, e in self.entries)

    @property
    def max_coordinate(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def weighted_degree(self, scheme=None) -> int:
        """sum_j m_j |nu_j| for a radial scheme (default m_j = j)."""
        if scheme is None:
            return sum(j * abs(e) for j, e in self.entries)
        return sum(scheme.exponent(j) * abs(e) for j, e in self.entries)

    def signature(self, scheme=None) -> int:
        """sum_j m_j nu_j (phase frequency of the twisted extension)."""
        if scheme is None:
            return sum(j * e for j, e in self.entries)
        return sum(scheme.exponent(j) * e for j, e in self.entries)

    @property
    def is_nonnegative(self) -> bool:
        return all(e > 0 for _, e in self.entries)

    @property
    def is_nonpositive(self) -> bool:
        return all(e < 0 for _, e in self.entries)

    def exponent(self, j: int) -> int:
        for jj, e in self.entries:
            if jj == j:
                return e
        return 0

    def __neg__(self) -> "MultiIndex":
        return MultiIndex._raw(tuple((j, -e) for j, e in self.entries))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.entries + other.entries)

    # -- container protocol -------------------------------------------------

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.entries < other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = ",".join(f"{j}:{e}" for j, e in self.entries)
        return f"MultiIndex({body or '-'})"


EMPTY_INDEX = MultiIndex._raw(())


class DirichletSeries:
    """Finitely supported map n -> a_n, no stored zero coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, complex] = {}
        for n, a in items:
            n = int(n)
            if n < 1:
                raise DomainError(f"Dirichlet index {n} must be >= 1")
            a = complex(a)
            if a != 0:
                clean[n] = clean.get(n, 0) + a
        self._terms = {n: a for n, a in sorted(clean.items()) if a != 0}

    @property
    def terms(self) -> dict[int, complex]:
        return dict(self._terms)

    def coefficient(self, n: int) -> complex:
        return self._terms.get(n, 0j)

    @property
    def max_support(self) -> int:
        return max(self._terms) if self._terms else 1

    def convolve(self, other: "DirichletSeries") -> "DirichletSeries":
        """Dirichlet convolution (a * b)_n = sum_{de=n} a_d b_e."""
        out: dict[int, complex] = {}
        for n, a in self._terms.items():
            for m, b in other._terms.items():
                k = n * m
                out[k] = out.get(k, 0) + a * b
        return DirichletSeries(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletSeries) and self._terms == other._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        return f"DirichletSeries({self._terms!r})"


# -- operations --------------------------------------------------------------


def index_of_integer(n: int) -> MultiIndex:
    """Exponent vector of the prime factorisation of n (n = 1 -> empty)."""
    n = int(n)
    if n == 0:
        raise DomainError("0 has no prime factorisation")
    if n < 0 or n > U64_MAX:
        raise DomainError(f"{n} outside the supported unsigned 64-bit range")
    if n == 1:
        return EMPTY_INDEX
    tab = _table()
    if n <= tab.bound:
        # hot path: smallest-prime-factor walk, primes come out ordered
        spf = tab._spf
        index = tab._index
        entries = []
        while n > 1:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            entries.append((index[p], e))
        return MultiIndex._raw(tuple(entries))
    pairs = tab.factor(n)
    return MultiIndex._raw(tuple((tab.prime_position(p), e) for p, e in pairs))


def integer_of_index(nu: MultiIndex) -> int:
    """Inverse of index_of_integer for nonnegative multi-indices."""
    tab = _table()
    n = 1
    for j, e in nu.entries:
        if e < 0:
            raise DomainError(f"negative exponent {e} at coordinate {j}")
        n *= tab.nth_prime(j) ** e
        if n > U64_MAX:
            raise DomainError("product overflows the unsigned 64-bit range")
    return n


def lift_dirichlet(series: DirichletSeries):
    """Bohr lift: the Fourier series whose coefficient at nu(n) is a_n."""
    from .series import FourierSeries

    return FourierSeries((index_of_integer(n), a) for n, a in series._terms.items())


def unlift(fourier) -> DirichletSeries:
    """Inverse Bohr lift; requires an analytic spectrum."""
    from .series import SpectrumClass, spectrum_class

    if spectrum_class(fourier) is not SpectrumClass.ANALYTIC:
        raise SpectrumError("only analytic series (nonnegative exponents) unlift")
    return DirichletSeries((integer_of_index(nu), a) for nu, a in fourier.items())


def dirichlet_eval(series: DirichletSeries, s: complex, cutoff: int | None = None) -> complex:
    """Partial sum sum_{n <= cutoff} a_n n^{-s} in double precision."""
    if cutoff is None:
        cutoff = series.max_support
    if cutoff < series.max_support:
        raise ConfigError(f"cutoff {cutoff} below the series support {series.max_support}")
    s = complex(s)
    total = 0j
    for n, a in series._terms.items():
        total += a * complex(n) ** (-s)
    return total
