"""Pre-segmentation text normalization of the uncased multilingual BERT tokenizer.

Character classes follow the reference BERT basic tokenizer: ASCII
symbol ranges count as punctuation even where Unicode files them under
``S*`` categories, tab/newline/CR are whitespace rather than control.
"""

from __future__ import annotations

import unicodedata


def is_whitespace(ch: str) -> bool:
    if ch in " \t\n\r":
        return True
    return unicodedata.category(ch) == "Zs"


def is_control(ch: str) -> bool:
    if ch in "\t\n\r":
        return False
    return unicodedata.category(ch) in ("Cc", "Cf")


def is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(ch).startswith("P")


_CJK_RANGES = (
    (0x4E00, 0x9FFF),
    (0x3400, 0x4DBF),
    (0x20000, 0x2A6DF),
    (0x2A700, 0x2B73F),
    (0x2B740, 0x2B81F),
    (0x2B820, 0x2CEAF),
    (0xF900, 0xFAFF),
    (0x2F800, 0x2FA1F),
)


def is_cjk_ideograph(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_RANGES)


def clean_text(text: str) -> str:
    """Drop NUL, U+FFFD and control characters; map whitespace to a space."""
    out = []
    for ch in text:
        cp = ord(ch)
        if cp == 0 or cp == 0xFFFD or is_control(ch):
            continue
        out.append(" " if is_whitespace(ch) else ch)
    return "".join(out)


def strip_accents(text: str) -> str:
    return "".join(ch for ch in unicodedata.normalize("NFD", text) if unicodedata.category(ch) != "Mn")


def _space_cjk(text: str) -> str:
    out = []
    for ch in text:
        if is_cjk_ideograph(ch):
            out.extend((" ", ch, " "))
        else:
            out.append(ch)
    return "".join(out)


def _split_punctuation(word: str) -> list[str]:
    pieces: list[str] = []
    current: list[str] = []
    for ch in word:
        if is_punctuation(ch):
            if current:
                pieces.append("".join(current))
                current = []
            pieces.append(ch)
        else:
            current.append(ch)
    if current:
        pieces.append("".join(current))
    return pieces


def basic_normalize(text: str, lowercase: bool = True) -> list[str]:
    """Split ``text`` into normalized words ready for WordPiece segmentation.

    Cleans control characters, optionally lowercases and strips accents,
    isolates CJK ideographs, splits on whitespace and then on punctuation
    (punctuation characters become words of their own).

    >>> basic_normalize("Héllo, World!")
    ['hello', ',', 'world', '!']
    """
    text = _space_cjk(clean_text(text))
    words: list[str] = []
    # str.split(), not split(" "): U+2028/U+2029 survive cleaning and still separate words.
    for token in text.split():
        if lowercase:
            # Character-wise: the reference never applies the contextual final-sigma rule.
            token = strip_accents("".join(ch.lower() for ch in token))
        words.extend(_split_punctuation(token))
    return words
