"""
Closed-form Ramsey and Gallai-Ramsey values.

All arithmetic is on Python integers; results that would not fit a signed
64-bit integer raise OverflowError.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from catalog import CatalogId, UnknownPatternError
from config_loader import get_config

logger = logging.getLogger(__name__)

INT64_LIMIT = 2 ** 63

SMALL_K5_NOTE = 'k+9 closed form holds for k>=3; value is the pattern order (k=1) or r2 (k=2)'


@dataclass(frozen=True)
class GrValue:
    """Exact value (lo == hi) or a range; hi is None when unbounded."""

    lo: int
    hi: Optional[int]
    k: int
    family: str
    note: Optional[str] = None

    def __post_init__(self):
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"range lo={self.lo} exceeds hi={self.hi}")

    @property
    def kind(self) -> str:
        return 'exact' if self.hi == self.lo else 'range'

    @property
    def exact(self) -> Optional[int]:
        return self.lo if self.hi == self.lo else None

    def contains(self, value: int) -> bool:
        return self.lo <= value and (self.hi is None or value <= self.hi)

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.lo)
        return f"{self.lo}..{self.hi if self.hi is not None else '?'}"


def _family_key(family: Union[str, CatalogId]) -> Tuple[str, Optional[int]]:
    """('f9', None), ('f2n', 5), ('star', 4), ('k3', None), ..."""
    cid = CatalogId.parse(family) if isinstance(family, str) else family
    if cid.tag == 'alias':
        if cid.label == 'f11':
            return 'f2n', 3
        return cid.label, None
    if cid.tag == 'named' and cid.label == 'banner':
        return 'f2n', 3
    if cid.tag == 'complete' and cid.params == (3,):
        return 'k3', None
    if cid.tag in ('f2n', 'star') and len(cid.params) == 1:
        return cid.tag, cid.params[0]
    raise UnknownPatternError(f"no formula for family '{cid}'")


def _checked(value: int) -> int:
    if value >= INT64_LIMIT:
        raise OverflowError(f"value {value} does not fit in 64 bits")
    return value


def _five_power(k: int, even_factor: int) -> int:
    if k % 2 == 0:
        return even_factor * 5 ** ((k - 2) // 2) + 1
    return 4 * 5 ** ((k - 1) // 2) + 1


def star_r2(n: int) -> int:
    """r2(K_{1,n}) = 2n - eps, eps = 1 iff n even"""
    return 2 * n - (1 if n % 2 == 0 else 0)


def r2_value(family: Union[str, CatalogId]) -> int:
    """Two-colour Ramsey number of a family member.

    Raises:
        UnknownPatternError: For families without a recorded value
    """
    name, n = _family_key(family)
    if name in ('f9', 'f10'):
        return 9
    if name in ('f12', 'f13'):
        return 10
    if name == 'k3':
        return 6
    if name == 'f2n':
        if n < 3:
            raise UnknownPatternError(f"f2n needs n >= 3, got {n}")
        return 2 * n - 1 if n % 2 == 0 else 2 * n
    if name == 'star':
        if n < 1:
            raise UnknownPatternError(f"star needs n >= 1, got {n}")
        return star_r2(n)
    raise UnknownPatternError(f"no r2 value for '{name}'")


def gr_value(family: Union[str, CatalogId], k: int) -> GrValue:
    """gr_k(K3 : H) for a family.

    Args:
        family: f9, f10, f12, f13, f11/banner, k3 or f2n:n
        k: Number of colours (>= 1)

    Returns:
        GrValue, a range for f2n with n >= 6 and k >= 3

    Raises:
        UnknownPatternError: Unknown family
        OverflowError: Value beyond 64 bits
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    name, n = _family_key(family)
    label = name if n is None else f"{name}:{n}"

    if name in ('f9', 'f10'):
        return GrValue(_checked(_five_power(k, 8)), _checked(_five_power(k, 8)), k, label)
    if name in ('f12', 'f13'):
        value = _checked(_five_power(k, 9))
        return GrValue(value, value, k, label)
    if name == 'k3':
        value = 5 ** (k // 2) + 1 if k % 2 == 0 else 2 * 5 ** ((k - 1) // 2) + 1
        value = _checked(value)
        return GrValue(value, value, k, label)
    if name != 'f2n':
        raise UnknownPatternError(f"no Gallai-Ramsey formula for '{label}'")
    if n < 3:
        raise UnknownPatternError(f"f2n needs n >= 3, got {n}")

    if n in (3, 4):
        value = _checked(r2_value(CatalogId('f2n', (n,))) + k - 2)
        return GrValue(value, value, k, 'f11' if n == 3 else label)
    if k == 1:
        return GrValue(n + 2, n + 2, k, label, note=SMALL_K5_NOTE if n == 5 else None)
    if k == 2:
        value = r2_value(CatalogId('f2n', (n,)))
        return GrValue(value, value, k, label, note=SMALL_K5_NOTE if n == 5 else None)
    if n == 5:
        return GrValue(_checked(k + 9), _checked(k + 9), k, label)
    if n % 2 == 0:
        lo = 5 * n // 2 + k - 6
    else:
        lo = (5 * n - 1) // 2 + k - 4
    hi = k * (n - 1) + 2
    return GrValue(_checked(lo), _checked(hi), k, label, note='open gap between bounds')


def witness_order(family: Union[str, CatalogId], k: int) -> int:
    """Order of the lower-bound construction: lo - 1"""
    return gr_value(family, k).lo - 1


@dataclass(frozen=True)
class ConstructionCheck:
    k: int
    expected: int
    actual: Optional[int]
    rainbow_free: Optional[bool]
    skipped: bool = False

    @property
    def ok(self) -> bool:
        return self.skipped or (self.actual == self.expected and bool(self.rainbow_free))


def _build_witness(family: Union[str, CatalogId], k: int):
    import constructions
    name, n = _family_key(family)
    if name in ('f9', 'f10'):
        return constructions.witness_f9_f10(k)
    if name in ('f12', 'f13'):
        return constructions.witness_f12_f13(k)
    if name == 'k3':
        return constructions.witness_k3(k)
    return constructions.witness_f2n(k, n)


def check_constructions(family: Union[str, CatalogId], k_max: int) -> List[ConstructionCheck]:
    """Build each witness up to k_max and compare its order with lo - 1.

    Witnesses above the configured vertex cap are skipped.
    """
    from detect import find_rainbow_triangle

    cap = get_config().table_check_max_vertices
    checks = []
    for k in range(1, k_max + 1):
        expected = witness_order(family, k)
        if expected > cap:
            logger.info(f"Skipping construction check k={k}: {expected} vertices > {cap}")
            checks.append(ConstructionCheck(k, expected, None, None, skipped=True))
            continue
        g = _build_witness(family, k)
        checks.append(ConstructionCheck(k, expected, g.n, find_rainbow_triangle(g) is None))
    return checks


def format_table(family: Union[str, CatalogId], k_max: int,
                 checks: Optional[List[ConstructionCheck]] = None) -> str:
    """Column-aligned table of gr_k values for k = 1..k_max"""
    if k_max < 1:
        raise ValueError(f"k-max must be >= 1, got {k_max}")
    limit = get_config().formulas_max_k
    if k_max > limit:
        raise ValueError(f"k-max {k_max} above configured limit {limit}")
    headers = ['k', 'gr_k', 'kind']
    if checks is not None:
        headers += ['witness', 'check']
    rows = []
    by_k = {c.k: c for c in checks or []}
    for k in range(1, k_max + 1):
        value = gr_value(family, k)
        row = [str(k), str(value), value.kind]
        if checks is not None:
            check = by_k.get(k)
            if check is None or check.skipped:
                row += ['-', 'skipped']
            else:
                row += [str(check.actual), 'ok' if check.ok else 'MISMATCH']
        rows.append(row)
    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(len(headers))]
    lines = ['  '.join(h.rjust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append('  '.join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip())
    return '\n'.join(lines)
