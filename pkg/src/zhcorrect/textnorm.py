"""Unit-level text representation and normalization.

All position arithmetic in the toolkit is done in "units" = Unicode scalar
values, never encoding bytes and never grapheme clusters: Chinese correction
corpora are overwhelmingly single-scalar characters, so scalar indexing keeps
span math simple while staying exact.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import NormalizationError


class UnicodeForm(Enum):
    """Canonical composition applied before any other step."""

    NFC = "nfc"
    NONE = "none"


@dataclass(frozen=True)
class NormalizePolicy:
    """How raw text is canonicalized before it becomes a UnitSeq.

    width_fold maps half-width ASCII punctuation to its full-width form;
    it is off by default because several benchmarks treat full/half-width
    punctuation as a correctable error.
    """

    unicode_form: UnicodeForm = UnicodeForm.NFC
    width_fold: bool = False
    strip_outer_whitespace: bool = True


DEFAULT_POLICY = NormalizePolicy()
RAW_POLICY = NormalizePolicy(UnicodeForm.NONE, False, False)
WIDTHFOLD_POLICY = NormalizePolicy(UnicodeForm.NFC, True, True)

# Half-width ASCII punctuation -> full-width forms (U+FF01..). Letters and
# digits are left alone.
_WIDTH_FOLD_TABLE = str.maketrans(
    {cp: chr(cp + 0xFEE0) for cp in range(0x21, 0x7F) if not chr(cp).isalnum()}
)


def _check_scalars(text: str) -> None:
    for i, ch in enumerate(text):
        if 0xD800 <= ord(ch) <= 0xDFFF:
            offset = len(text[:i].encode("utf-8", "surrogatepass"))
            raise NormalizationError(
                f"invalid Unicode scalar U+{ord(ch):04X} at byte offset {offset}"
            )


def normalize(text: str, policy: NormalizePolicy = DEFAULT_POLICY) -> str:
    """Apply the policy to raw text. Idempotent and deterministic.

    With ``RAW_POLICY`` the output equals the input (identity).
    Raises NormalizationError if the text contains surrogate code points,
    naming the UTF-8 byte offset of the first offender.
    """
    _check_scalars(text)
    out = text
    if policy.unicode_form is UnicodeForm.NFC:
        out = unicodedata.normalize("NFC", out)
    if policy.width_fold:
        out = out.translate(_WIDTH_FOLD_TABLE)
    if policy.strip_outer_whitespace:
        out = out.strip()
    return out


@dataclass(frozen=True)
class UnitSeq:
    """An immutable sequence of Unicode scalar values plus the text it came from.

    Invariant: ``"".join(units) == original`` (the text is expected to be
    normalized already; see to_units / units_of).
    """

    units: tuple[str, ...]
    original: str

    @property
    def text(self) -> str:
        return self.original

    def __len__(self) -> int:
        return len(self.units)

    def __iter__(self) -> Iterator[str]:
        return iter(self.units)

    def __getitem__(self, index):
        return self.units[index]

    def __repr__(self) -> str:
        return f"UnitSeq({self.original!r})"


def to_units(text: str) -> UnitSeq:
    """Split already-normalized text into units. Length counts scalar values."""
    return UnitSeq(tuple(text), text)


def units_of(text: str, policy: NormalizePolicy = DEFAULT_POLICY) -> UnitSeq:
    """normalize + to_units in one step."""
    return to_units(normalize(text, policy))


def join_units(units: tuple[str, ...]) -> UnitSeq:
    """Build a UnitSeq directly from a unit tuple (e.g. an edit replacement)."""
    return UnitSeq(units, "".join(units))
