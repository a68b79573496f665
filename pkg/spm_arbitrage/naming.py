"""Helpers that turn model names into fixed-format MPS identifiers."""

import logging
from collections.abc import Iterable


LOGGER = logging.getLogger(__name__)

MPS_NAME_LEN = 8
OBJECTIVE_ROW = "OBJ"


def _sanitize_mps_name(name: str) -> str:
    """Keep letters, digits and underscores, truncated to the MPS field width."""
    sanitized = name.replace(" ", "_").replace("-", "_").replace(".", "_")
    sanitized = "".join(
        c for c in sanitized if c.isascii() and (c.isalnum() or c == "_")
    )
    return sanitized[:MPS_NAME_LEN]


def assign_mps_names(
    names: Iterable[str], prefix: str, reserved: Iterable[str] = ()
) -> tuple[list[str], dict[str, str]]:
    """Map model names to unique MPS identifiers.

    Names that survive sanitizing unchanged and unique are kept. Everything
    else receives a generated ``<prefix>NNNNNNN`` identifier.

    Args:
        names: Original names in model order.
        prefix: One-letter prefix for generated identifiers.
        reserved: Identifiers that must not be produced.

    Returns:
        The identifiers in model order and a map of every renamed entry from
        identifier back to the original name.
    """
    originals = list(names)
    taken = set(reserved)
    short = [_sanitize_mps_name(name) for name in originals]
    counts: dict[str, int] = {}
    for name in short:
        counts[name] = counts.get(name, 0) + 1

    keep = {
        name
        for original, name in zip(originals, short, strict=True)
        if name and name == original and counts[name] == 1 and name not in taken
    }
    taken |= keep

    result: list[str] = []
    renamed: dict[str, str] = {}
    serial = 0
    for original, name in zip(originals, short, strict=True):
        if name in keep and name == original:
            result.append(name)
            continue
        serial += 1
        generated = f"{prefix}{serial:07d}"
        while generated in taken:
            serial += 1
            generated = f"{prefix}{serial:07d}"
        taken.add(generated)
        result.append(generated)
        renamed[generated] = original
    if renamed:
        LOGGER.warning(
            "Renamed %d names with prefix %s for MPS export", len(renamed), prefix
        )
    return result, renamed


__all__ = ["MPS_NAME_LEN", "OBJECTIVE_ROW", "assign_mps_names"]
