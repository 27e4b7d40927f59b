"""Apply synthesized parsers to classified statements.

A registry maps (component, constituent) to a program plus flags.
Repeating constituents of a component are extracted together in an
iterative loop: evaluate all first-occurrence parsers, record the tuple,
delete the extracted values, repeat until a parser fails.  Parser
failures are recorded as data (the `missing` set), never raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clauses import Lexicon, tag_clauses
from .dsl import EvalFailure, ExtractionProgram, eval_program, parse, serialize
from .ingest import Statement, Warning_

REGISTRY_HEADER = "# tsgkit parser registry v1"


@dataclass(frozen=True)
class RegistryEntry:
    component: str
    constituent: str
    program: ExtractionProgram
    repeats: bool = False
    preprocess: tuple[str, ...] = ()


@dataclass
class ParserRegistry:
    entries: list[RegistryEntry] = field(default_factory=list)

    def put(self, entry: RegistryEntry) -> None:
        for i, existing in enumerate(self.entries):
            if (existing.component, existing.constituent) == (
                entry.component,
                entry.constituent,
            ):
                self.entries[i] = entry
                return
        self.entries.append(entry)

    def for_component(self, component: str) -> list[RegistryEntry]:
        return [e for e in self.entries if e.component == component]


def save_registry(registry: ParserRegistry, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(REGISTRY_HEADER + "\n")
        for e in registry.entries:
            flags = ",".join(e.preprocess) if e.preprocess else "-"
            fh.write(
                f"{e.component}\t{e.constituent}\t{int(e.repeats)}\t{flags}\t"
                f"{serialize(e.program)}\n"
            )


def load_registry(path: str) -> ParserRegistry:
    registry = ParserRegistry()
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != REGISTRY_HEADER:
        raise ValueError(f"{path}: not a parser registry file")
    for line in lines[1:]:
        if not line.strip():
            continue
        component, constituent, repeats, flags, text = line.split("\t", 4)
        registry.put(
            RegistryEntry(
                component,
                constituent,
                parse(text),
                repeats=repeats == "1",
                preprocess=() if flags == "-" else tuple(flags.split(",")),
            )
        )
    return registry


@dataclass
class ParsedComponent:
    component: str
    constituents: dict[str, object] = field(default_factory=dict)
    missing: set[str] = field(default_factory=set)


def split_pipes(text: str) -> list[str]:
    """Split on top-level '|' outside single/double quotes; segments trimmed."""
    segments: list[str] = []
    buf: list[str] = []
    quote = ""
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = ""
        elif ch in "\"'":
            quote = ch
            buf.append(ch)
        elif ch == "|":
            segments.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    segments.append("".join(buf).strip())
    return [s for s in segments if s]


def extract_repeating(
    component_text: str,
    first_parsers: list[ExtractionProgram],
    max_iterations: int = 100,
    warnings: list[Warning_] | None = None,
) -> list[tuple[str, ...]]:
    """Repeatedly extract first constituents and delete them from the text."""
    if not first_parsers:
        raise ValueError("need at least one parser")
    working = component_text
    tuples: list[tuple[str, ...]] = []
    iterations = 0
    while True:
        values = []
        try:
            for prog in first_parsers:
                v = eval_program(prog, working)
                if not v:
                    raise EvalFailure("empty extraction")
                values.append(v)
        except EvalFailure:
            break
        if iterations >= max_iterations:
            if warnings is not None:
                warnings.append(
                    Warning_(
                        "IterationLimitExceeded",
                        f"stopped after {max_iterations} iterations on "
                        f"{component_text[:40]!r}",
                        0,
                    )
                )
            break
        tuples.append(tuple(values))
        iterations += 1
        # Delete leftmost occurrences; on overlap the longest value goes first.
        remaining = list(values)
        while remaining:
            located = [
                (working.find(v), -len(v), i)
                for i, v in enumerate(remaining)
                if v in working
            ]
            if not located:
                break
            _, _, i = min(located)
            v = remaining.pop(i)
            at = working.find(v)
            working = working[:at] + working[at + len(v) :]
    return tuples


def _apply_preprocess(
    raw: str, flags: tuple[str, ...], lexicon: Lexicon
) -> list[str]:
    text = raw
    if "tag_clauses" in flags:
        text = tag_clauses(text, lexicon).text
    if "split_pipes" in flags:
        return split_pipes(text)
    return [text]


def extract(
    stmt: Statement,
    component: str,
    registry: ParserRegistry,
    lexicon: Lexicon = Lexicon(),
    warnings: list[Warning_] | None = None,
) -> ParsedComponent:
    """Run every registered parser for the component over the statement."""
    result = ParsedComponent(component)
    entries = registry.for_component(component)
    repeating = [e for e in entries if e.repeats]
    for entry in entries:
        if entry.repeats:
            continue
        value = None
        for segment in _apply_preprocess(stmt.raw, entry.preprocess, lexicon):
            try:
                value = eval_program(entry.program, segment)
                break
            except EvalFailure:
                continue
        if value is None:
            result.missing.add(entry.constituent)
        else:
            result.constituents[entry.constituent] = value
    if repeating:
        flags = repeating[0].preprocess
        tuples: list[tuple[str, ...]] = []
        for segment in _apply_preprocess(stmt.raw, flags, lexicon):
            tuples.extend(
                extract_repeating(
                    segment, [e.program for e in repeating], warnings=warnings
                )
            )
        for pos, entry in enumerate(repeating):
            result.constituents[entry.constituent] = [t[pos] for t in tuples]
    return result
