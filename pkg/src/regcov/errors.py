"""Error types and resource caps.

Every hard limit in the library is a named cap carried by a :class:`Caps`
value.  Exceeding a cap raises a dedicated error naming the cap; nothing is
ever truncated silently.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


class RegcovError(Exception):
    """Base class for all library errors."""


class InputError(RegcovError):
    """Malformed input: bad syntax, bad alphabet, inconsistent instance."""


class ResourceCapError(RegcovError):
    """A configured resource cap was exceeded."""

    def __init__(self, cap_name: str, cap: int, detail: str = ""):
        self.cap_name = cap_name
        self.cap = cap
        self.detail = detail
        msg = f"cap '{cap_name}' exceeded (limit {cap})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DeterminizationCapError(ResourceCapError):
    pass


class MonoidCapError(ResourceCapError):
    pass


class PowersetCapError(ResourceCapError):
    pass


class RelationCapError(ResourceCapError):
    pass


class AlphabetCapError(ResourceCapError):
    pass


class SaturationCapError(ResourceCapError):
    """Raised when a fixpoint engine would enumerate too many elements."""

    def __init__(self, cap: int, class_name: str, detail: str = ""):
        self.class_name = class_name
        super().__init__("max_elements", cap, f"class {class_name}: {detail}" if detail else f"class {class_name}")


class PieceCapError(ResourceCapError):
    pass


class WordBudgetError(ResourceCapError):
    pass


class PtStateCapError(ResourceCapError):
    pass


@dataclass(frozen=True)
class Caps:
    """Resource limits shared by all operations.

    The defaults are sized for desk-scale instances; every field can be
    overridden per call or through the CLI flags.
    """

    max_det_states: int = 1 << 20      # subset-construction states
    max_monoid: int = 4096             # transition-monoid elements
    max_powerset_monoid: int = 20      # |M| for powerset semirings
    max_relation_states: int = 6       # |Q| for relation semirings
    max_alphabet_sets: int = 8         # |A| for alphabet-set semirings
    max_elements: int = 200_000        # saturated-set elements
    max_pieces: int = 10_000           # pieces per synthesized cover
    max_word_budget: int = 1_000_000   # word enumeration budget
    max_pt_states: int = 50_000        # piece-automaton states
    max_k: int = 0                     # piece-length bound; 0 = per-alphabet default

    def pt_depth_cap(self, alphabet_size: int) -> int:
        """Deepest piece length tried when synthesizing piecewise covers."""
        if self.max_k:
            return self.max_k
        if alphabet_size <= 2:
            return 4
        if alphabet_size == 3:
            return 3
        return 2

    def with_overrides(self, **kw) -> "Caps":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_CAPS = Caps()
