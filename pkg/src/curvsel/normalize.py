"""Min-Max pre-normalization and the eight post-selection normalizers.

Axes: MM works per feature (column), L1/L2 per instance (row), PN
elementwise. Composite tags apply left to right, so ``L1PN`` is L1 followed
by PN and ``PNL1`` is PN followed by L1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from curvsel.errors import ConfigError, DataError

DEFAULT_PN_ALPHA = 0.1


class NormTag(str, enum.Enum):
    MM = "mm"
    L1 = "l1"
    L2 = "l2"
    PN = "pn"
    L1PN = "l1pn"
    L2PN = "l2pn"
    PNL1 = "pnl1"
    PNL2 = "pnl2"


# application order of the primitive steps behind each tag
_STEPS = {
    NormTag.MM: ("mm",),
    NormTag.L1: ("l1",),
    NormTag.L2: ("l2",),
    NormTag.PN: ("pn",),
    NormTag.L1PN: ("l1", "pn"),
    NormTag.L2PN: ("l2", "pn"),
    NormTag.PNL1: ("pn", "l1"),
    NormTag.PNL2: ("pn", "l2"),
}

ALL_NORMALIZERS = tuple(t.value for t in NormTag)


@dataclass(frozen=True)
class NormalizerKind:
    tag: NormTag
    pn_alpha: float = DEFAULT_PN_ALPHA

    def __post_init__(self):
        object.__setattr__(self, "tag", NormTag(self.tag))
        if not 0.0 < self.pn_alpha <= 1.0:
            raise ConfigError(f"pn_alpha must lie in (0, 1], got {self.pn_alpha}")

    @classmethod
    def parse(cls, name: str, pn_alpha: float = DEFAULT_PN_ALPHA) -> "NormalizerKind":
        try:
            return cls(NormTag(name.strip().lower()), pn_alpha)
        except ValueError:
            raise ConfigError(
                f"unknown normalizer {name!r}; valid names: {', '.join(ALL_NORMALIZERS)}"
            ) from None

    @property
    def name(self) -> str:
        return self.tag.value

    @property
    def steps(self) -> tuple[str, ...]:
        return _STEPS[self.tag]


def _as_finite(features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataError("matrix contains non-finite values")
    return X


def minmax_fit(features) -> tuple[np.ndarray, np.ndarray]:
    """Column minima and maxima."""
    X = _as_finite(features)
    if X.shape[0] < 1:
        raise DataError("min-max needs at least one row")
    return X.min(axis=0), X.max(axis=0)


def minmax_apply(features, lo, hi, clip: bool = False) -> np.ndarray:
    """``(x - lo) / (hi - lo)`` per column; constant columns become 0."""
    X = _as_finite(features)
    span = hi - lo
    const = span == 0
    out = (X - lo) / np.where(const, 1.0, span)
    out[:, const] = 0.0
    if clip:
        np.clip(out, 0.0, 1.0, out=out)
    return out


def minmax_per_feature(features) -> np.ndarray:
    """Rescale every column onto [0, 1] using its own min and max.

    >>> minmax_per_feature([[2.0], [4.0], [6.0]]).ravel().tolist()
    [0.0, 0.5, 1.0]
    """
    lo, hi = minmax_fit(features)
    out = minmax_apply(features, lo, hi)
    # exact endpoints despite rounding in the division
    np.clip(out, 0.0, 1.0, out=out)
    return out


def _row_norm(X: np.ndarray, order: int) -> tuple[np.ndarray, int]:
    norms = np.abs(X).sum(axis=1) if order == 1 else np.sqrt((X * X).sum(axis=1))
    zero = norms == 0
    out = X / np.where(zero, 1.0, norms)[:, None]
    return out, int(zero.sum())


def power_normalize(features, alpha: float = DEFAULT_PN_ALPHA) -> np.ndarray:
    """Signed power ``sign(x) * |x|**alpha``, elementwise."""
    X = np.asarray(features, dtype=np.float64)
    return np.sign(X) * np.abs(X) ** alpha


def _apply_steps(X: np.ndarray, steps, alpha: float, mm_stats=None, clip=False):
    zero_rows = 0
    for step in steps:
        if step == "mm":
            lo, hi = mm_stats if mm_stats is not None else minmax_fit(X)
            X = minmax_apply(X, lo, hi, clip=clip)
            if mm_stats is None:
                np.clip(X, 0.0, 1.0, out=X)
        elif step == "pn":
            X = power_normalize(X, alpha)
        else:
            X, n = _row_norm(X, 1 if step == "l1" else 2)
            zero_rows += n
    return X, zero_rows


def apply_normalizer(kind: NormalizerKind, features) -> tuple[np.ndarray, int]:
    """Normalize ``features`` with ``kind``.

    Returns
    -------
    out : ndarray
        Normalized copy.
    zero_rows : int
        Rows left unchanged by an L1/L2 step because their norm was zero.
    """
    X = _as_finite(features)
    return _apply_steps(X.copy(), kind.steps, kind.pn_alpha)


@dataclass(frozen=True)
class FittedNormalizer:
    """Normalizer whose data-dependent statistics come from a training split.

    Only MM learns statistics; at transform time unseen values are clipped
    to [0, 1].
    """

    kind: NormalizerKind
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None

    def transform(self, features) -> np.ndarray:
        X = _as_finite(features)
        stats = (self.lo, self.hi) if self.lo is not None else None
        out, _ = _apply_steps(X.copy(), self.kind.steps, self.kind.pn_alpha, stats, clip=True)
        return out


def fit_normalizer(kind: NormalizerKind, train_features) -> FittedNormalizer:
    if "mm" in kind.steps:
        lo, hi = minmax_fit(train_features)
        return FittedNormalizer(kind, lo, hi)
    return FittedNormalizer(kind)
