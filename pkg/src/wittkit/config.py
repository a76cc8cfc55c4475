"""Run-time limits and defaults shared across the package."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace


class ResourceLimitError(ValueError):
    """A requested size exceeds the configured caps."""


class InvalidConfiguration(ValueError):
    """Malformed parameters, e.g. a non-prime characteristic."""


def _default_caps() -> dict[int, int]:
    return {2: 6, 3: 5, 5: 4}


@dataclass(frozen=True)
class StructureCaps:
    """Largest truncation length for which structure polynomials are built.

    Primes missing from ``per_prime`` use ``other``.
    """

    per_prime: dict[int, int] = field(default_factory=_default_caps)
    other: int = 3

    def cap(self, p: int) -> int:
        return self.per_prime.get(p, self.other)


@dataclass(frozen=True)
class HarnessDefaults:
    search_bound: int = 20
    scan_bound: int = 16
    # i = 0 places no truncation limit on n; this bounds the exponent instead.
    lowest_term_nmax_cap: int = 4
    seed: int = 42


@dataclass(frozen=True)
class Settings:
    caps: StructureCaps = field(default_factory=StructureCaps)
    harness: HarnessDefaults = field(default_factory=HarnessDefaults)
    cache_dir: str | None = None


_settings = Settings(cache_dir=os.environ.get("WITT_CACHE_DIR") or None)


def get_settings() -> Settings:
    return _settings


def configure(**changes) -> Settings:
    """Replace fields of the global settings; returns the new object."""
    global _settings
    _settings = replace(_settings, **changes)
    return _settings


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidConfiguration(f"p must be prime, got {p!r}")
    return p
