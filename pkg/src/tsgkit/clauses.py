"""Lexicon-driven clause tagging for natural-language conditionals.

Wraps the condition clause in <CL1>...</CL1> and the action clause in
<CL2>...</CL2> so extraction programs can anchor on the tags instead of
punctuation.  A transparent approximation of constituency tagging: the
boundary between clauses is the first comma, or the first second-clause
signal word after the clause opener.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_SUBORDINATORS = ("if", "when", "once", "in case", "unless")
DEFAULT_SECOND_CLAUSE_SIGNALS = (
    "then",
    "you",
    "we",
    "please",
    "contact",
    "run",
    "check",
    "create",
    "delete",
    "use",
    "can",
    "should",
    "must",
    "it is",
    "it's",
)

TAG_RE = re.compile(r"</?CL[0-9]+>")


@dataclass(frozen=True)
class Lexicon:
    subordinators: tuple[str, ...] = DEFAULT_SUBORDINATORS
    second_clause_signals: tuple[str, ...] = DEFAULT_SECOND_CLAUSE_SIGNALS


def load_lexicon(path: str) -> Lexicon:
    """Plain-text lexicon: one phrase per line under [section] headers."""
    sections: dict[str, list[str]] = {"subordinators": [], "second_clause_signals": []}
    current = None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1]
                if current not in sections:
                    raise ValueError(f"unknown lexicon section {current!r}")
                continue
            if current is None:
                raise ValueError("lexicon phrase outside any section")
            sections[current].append(line.lower())
    return Lexicon(
        subordinators=tuple(sections["subordinators"]),
        second_clause_signals=tuple(sections["second_clause_signals"]),
    )


@dataclass(frozen=True)
class TaggedSentence:
    text: str
    original: str


def strip_tags(t: TaggedSentence) -> str:
    return TAG_RE.sub("", t.text)


def _word_spans(s: str) -> list[tuple[str, int, int]]:
    return [(m.group(0), m.start(), m.end()) for m in re.finditer(r"\S+", s)]


def _norm(token: str) -> str:
    return token.strip(".,;:!?\"'()").lower()


def _phrase_at(words, i: int, phrase: str) -> int:
    """Length in tokens of `phrase` matched at word index i, or 0."""
    parts = phrase.split()
    if i + len(parts) > len(words):
        return 0
    for off, part in enumerate(parts):
        if _norm(words[i + off][0]) != part:
            return 0
    return len(parts)


def tag_clauses(sentence: str, lexicon: Lexicon = Lexicon()) -> TaggedSentence:
    """Always returns a tagging; strip_tags() recovers the input exactly."""
    if not sentence:
        raise ValueError("sentence must be non-empty")
    words = _word_spans(sentence)
    if not words:
        return TaggedSentence(sentence, sentence)

    sub_len = 0
    for phrase in sorted(lexicon.subordinators, key=lambda p: -len(p.split())):
        sub_len = _phrase_at(words, 0, phrase)
        if sub_len:
            break

    if not sub_len:
        a, b = words[0][1], words[-1][2]
        return TaggedSentence(
            sentence[:a] + "<CL1>" + sentence[a:b] + "</CL1>" + sentence[b:], sentence
        )

    rest = words[sub_len:]
    if not rest:
        a, b = words[0][1], words[-1][2]
        return TaggedSentence(
            sentence[:a] + "<CL1>" + sentence[a:b] + "</CL1>" + sentence[b:], sentence
        )

    comma_pos = sentence.find(",", rest[0][1])

    # A signal at the very start of the remainder would leave the condition
    # empty, so the scan starts at the second remainder token.
    signal_pos = -1
    i = 1
    while i < len(rest):
        matched = 0
        for phrase in sorted(lexicon.second_clause_signals, key=lambda p: -len(p.split())):
            matched = _phrase_at(rest, i, phrase)
            if matched:
                break
        if matched:
            signal_pos = rest[i][1]
            break
        i += 1

    boundaries = [p for p in (comma_pos, signal_pos) if p >= 0]
    if not boundaries:
        a, b = rest[0][1], rest[-1][2]
        return TaggedSentence(
            sentence[:a] + "<CL1>" + sentence[a:b] + "</CL1>" + sentence[b:], sentence
        )

    boundary = min(boundaries)
    cl1_start = rest[0][1]
    cl1_end = boundary
    while cl1_end > cl1_start and sentence[cl1_end - 1].isspace():
        cl1_end -= 1

    cl2_start = boundary
    if boundary == comma_pos and (signal_pos < 0 or comma_pos <= signal_pos):
        cl2_start = boundary + 1
    while cl2_start < len(sentence) and sentence[cl2_start].isspace():
        cl2_start += 1
    # A leading "then" belongs to the boundary, not the action clause.
    then_words = [w for w in _word_spans(sentence[cl2_start:])]
    if then_words and _norm(then_words[0][0]) == "then":
        cl2_start += then_words[0][2]
        while cl2_start < len(sentence) and sentence[cl2_start].isspace():
            cl2_start += 1
    cl2_end = len(sentence)
    while cl2_end > cl2_start and sentence[cl2_end - 1].isspace():
        cl2_end -= 1

    pieces = [
        sentence[:cl1_start],
        "<CL1>",
        sentence[cl1_start:cl1_end],
        "</CL1>",
        sentence[cl1_end:cl2_start],
    ]
    if cl2_end > cl2_start:
        pieces += ["<CL2>", sentence[cl2_start:cl2_end], "</CL2>", sentence[cl2_end:]]
    else:
        pieces.append(sentence[cl2_start:])
    return TaggedSentence("".join(pieces), sentence)
