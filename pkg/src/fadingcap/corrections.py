"""Named corrections to the uncorrected closed forms.

Every closed form is first evaluated literally. Each correction below fixes
one defect that quadrature exposed, and is applied only when named, so a
result always states which reading produced it.
"""

from __future__ import annotations

from typing import Iterable

from .errors import DomainError

CORRECTIONS: dict[str, str] = {
    "entropy-constant-group": (
        "Shannon entropy: replace the dimensionally inconsistent group that carries"
        " ln(B1/sqrt(2 pi D1)) by -ln(B1/sqrt(2 pi D1)) + (2 K M / alpha)(1/M^2 - 1/P^2)."
    ),
    "entropy-log-term": (
        "Shannon entropy: restore the dropped E[ln(1 - exp(-2 D1 g^(alpha/2)))] term,"
        " which sums exactly to a digamma expression."
    ),
    "cross-prefactor": (
        "Cross entropy: use the eta-mu density prefactor"
        " sqrt(pi)(eta'+1)^(3/2) / (sqrt(eta') sqrt|eta'-1| gbar'^(3/2)) for B2."
    ),
    "cross-d2-symmetric": "Cross entropy: D2 = |eta'^2 - 1| / (2 eta' gbar') instead of mixing eta and eta'.",
    "cross-gamma-order": "Cross entropy: the first moment of p carries Gamma(1 + 2/alpha), not Gamma(2/alpha - 1).",
    "cross-log-term": (
        "Cross entropy: restore the dropped -E_p[ln(1 - exp(-2 D2 g))] term as a Mellin-Barnes"
        " integral with zeta(1 + s)."
    ),
    "ora-meijer": (
        "ORA capacity: complete the Meijer G lower row with Delta(2, 2s/alpha), take c^2/4 as"
        " the argument and keep both exponentials of the Bessel expansion."
    ),
}

ALL = frozenset(CORRECTIONS)
NONE: frozenset[str] = frozenset()


def parse_corrections(selection: str | Iterable[str] | None) -> frozenset[str]:
    """Turn ``"all"``, ``"none"``, a comma list or an iterable of names into a set."""
    if selection is None:
        return NONE
    if isinstance(selection, str):
        text = selection.strip()
        if text in ("", "none"):
            return NONE
        if text == "all":
            return ALL
        names = [part.strip() for part in text.split(",") if part.strip()]
    else:
        names = list(selection)
    unknown = sorted(set(names) - ALL)
    if unknown:
        raise DomainError(f"unknown correction(s) {unknown}; known: {sorted(ALL)}")
    return frozenset(names)


def format_corrections(active: Iterable[str]) -> str:
    active = frozenset(active)
    if not active:
        return "none"
    if active == ALL:
        return "all"
    return ",".join(sorted(active))
