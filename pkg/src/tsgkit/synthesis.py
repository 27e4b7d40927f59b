"""Programming-by-example synthesis of extraction programs.

Given input/output string pairs, enumerate bounded position expressions
that pin the output span in each input, intersect the candidates across
pairs, and fall back to predicate-guarded conditionals when no single
branch explains every pair.  Optional negative examples (output = None)
require the final program to fail on those inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .dsl import (
    ALPHABET,
    AbsPos,
    Atom,
    Branch,
    ConstStr,
    EvalFailure,
    ExtractionProgram,
    Predicate,
    RegPos,
    Single,
    SubStr,
    Switch,
    TokenClass,
    program_key,
)


class SynthesisFailure(Exception):
    def __init__(self, message: str, unmet_pairs: list[tuple[str, str]]):
        super().__init__(message)
        self.unmet_pairs = unmet_pairs


class NoOccurrence(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Search limits; defaults are sized for desk-scale specs."""

    max_occurrence: int = 3
    abs_window: int = 4
    max_atoms: int = 3
    max_branches: int = 6


DEFAULT_BOUNDS = Bounds()


@dataclass
class ExampleSpec:
    """Input/output pairs for one constituent of one component type."""

    component: str
    constituent_name: str
    pairs: list[tuple[str, str]]
    negatives: list[str] = field(default_factory=list)
    repeats: bool = False
    preprocess: tuple[str, ...] = ()

    def validate(self) -> None:
        if not self.pairs:
            raise ValueError("spec needs at least one input/output pair")
        for inp, out in self.pairs:
            if not out:
                raise ValueError(f"empty output for input {inp!r}")
            if out not in inp and _decompose(inp, out) is None:
                raise ValueError(
                    f"output {out!r} is not assembled from substrings of {inp!r}"
                )


VALID_PREPROCESS = ("split_pipes", "tag_clauses")


def load_spec(path: str, lexicon=None) -> ExampleSpec:
    """Read a line-delimited spec file: header record, then example records.

    Inputs of tag_clauses specs are tagged at load time, so synthesis sees
    the same text extraction will see.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty spec file")
    header = json.loads(lines[0])
    flags = tuple(header.get("preprocess", ()))
    for flag in flags:
        if flag not in VALID_PREPROCESS:
            raise ValueError(f"{path}: unknown preprocess flag {flag!r}")
    pairs: list[tuple[str, str]] = []
    negatives: list[str] = []
    for ln in lines[1:]:
        rec = json.loads(ln)
        text = rec["input"]
        if "tag_clauses" in flags:
            from .clauses import Lexicon, tag_clauses

            text = tag_clauses(text, lexicon or Lexicon()).text
        if rec.get("output") is None:
            negatives.append(text)
        else:
            pairs.append((text, rec["output"]))
    spec = ExampleSpec(
        component=header["component"],
        constituent_name=header["constituent"],
        pairs=pairs,
        negatives=negatives,
        repeats=bool(header.get("repeats", False)),
        preprocess=flags,
    )
    spec.validate()
    return spec


# ---------------------------------------------------------------------------
# Candidate generation


def positions_resolving_to(s: str, i: int, bounds: Bounds = DEFAULT_BOUNDS) -> list:
    """All bounded position expressions that resolve to index i in s."""
    out: list = []
    if i <= bounds.abs_window:
        out.append(AbsPos(i))
    if len(s) - i <= bounds.abs_window:
        out.append(AbsPos(i - len(s) - 1))
    left_classes = [tc for tc in ALPHABET if any(e == i for _, e in tc.matches(s))]
    right_classes = [tc for tc in ALPHABET if any(b == i for b, _ in tc.matches(s))]

    def add(left: Optional[TokenClass], right: Optional[TokenClass]):
        bs = RegPos(left, right, 1).boundaries(s)
        idx = bs.index(i)
        if idx + 1 <= bounds.max_occurrence:
            out.append(RegPos(left, right, idx + 1))
        back = len(bs) - idx
        if back <= bounds.max_occurrence:
            out.append(RegPos(left, right, -back))

    for tc in left_classes:
        add(tc, None)
    for tc in right_classes:
        add(None, tc)
    for lt in left_classes:
        for rt in right_classes:
            add(lt, rt)
    return out


def generate_atoms(inp: str, out: str, bounds: Bounds = DEFAULT_BOUNDS) -> set[Atom]:
    """Atoms consistent with one example, over every occurrence of the output."""
    if not out or out not in inp:
        raise NoOccurrence(f"output {out!r} does not occur in input {inp!r}")
    atoms: set[Atom] = {ConstStr(out)}
    start = inp.find(out)
    while start >= 0:
        end = start + len(out)
        for p1 in positions_resolving_to(inp, start, bounds):
            for p2 in positions_resolving_to(inp, end, bounds):
                atoms.add(SubStr(p1, p2))
        start = inp.find(out, start + 1)
    return atoms


def _atom_ok(atom: Atom, inp: str, out: str) -> bool:
    try:
        return atom.eval(inp) == out
    except EvalFailure:
        return False


def _branch_rank_key(b: Branch) -> tuple:
    return program_key(Single(b))


def _best_single_atom(pairs: list[tuple[str, str]], bounds: Bounds) -> Optional[Branch]:
    first_in, first_out = pairs[0]
    if first_out not in first_in:
        return None
    survivors = [
        a
        for a in generate_atoms(first_in, first_out, bounds)
        if all(_atom_ok(a, i, o) for i, o in pairs[1:])
    ]
    if not survivors:
        return None
    best = min((Branch((a,)) for a in survivors), key=_branch_rank_key)
    return best


def _decompose(inp: str, out: str) -> Optional[list[tuple[str, str]]]:
    """Greedy split of `out` into maximal input-substring spans and constants."""
    parts: list[tuple[str, str]] = []
    k = 0
    while k < len(out):
        best = 0
        for length in range(len(out) - k, 0, -1):
            if out[k : k + length] in inp:
                best = length
                break
        if best:
            parts.append(("sub", out[k : k + best]))
            k += best
        else:
            c = k
            while k < len(out) and out[k] not in inp:
                k += 1
            parts.append(("const", out[c:k]))
    return parts


def _align_parts(out: str, parts: list[tuple[str, str]]) -> Optional[list[str]]:
    """Split another pair's output into the sub-slot texts of `parts`."""
    slots: list[str] = []
    pos = 0
    for idx, (kind, text) in enumerate(parts):
        if kind == "const":
            at = out.find(text, pos)
            if at < 0:
                return None
            if idx > 0 and parts[idx - 1][0] == "sub":
                slots.append(out[pos:at])
            elif at != pos:
                return None
            pos = at + len(text)
        elif idx + 1 == len(parts):
            slots.append(out[pos:])
            pos = len(out)
    if parts and parts[-1][0] == "const" and pos != len(out):
        return None
    return slots


def _multi_atom_branch(pairs: list[tuple[str, str]], bounds: Bounds) -> Optional[Branch]:
    first_in, first_out = pairs[0]
    parts = _decompose(first_in, first_out)
    if parts is None or len(parts) > bounds.max_atoms:
        return None
    if all(kind == "const" for kind, _ in parts):
        return None
    sub_slots = [text for kind, text in parts if kind == "sub"]
    per_pair_slots = [sub_slots]
    for inp, out in pairs[1:]:
        slots = _align_parts(out, parts)
        if slots is None or len(slots) != len(sub_slots):
            return None
        per_pair_slots.append(slots)
    atoms: list[Atom] = []
    slot_idx = 0
    for kind, text in parts:
        if kind == "const":
            atoms.append(ConstStr(text))
            continue
        slot_texts = [slots[slot_idx] for slots in per_pair_slots]
        slot_idx += 1
        if any(not t for t in slot_texts) or slot_texts[0] not in pairs[0][0]:
            return None
        cands = [
            a
            for a in generate_atoms(pairs[0][0], slot_texts[0], bounds)
            if all(_atom_ok(a, p[0], t) for p, t in zip(pairs[1:], slot_texts[1:]))
        ]
        cands = [a for a in cands if not isinstance(a, ConstStr)]
        if not cands:
            return None
        atoms.append(min((Branch((a,)) for a in cands), key=_branch_rank_key).atoms[0])
    branch = Branch(tuple(atoms))
    if all(_atom_ok_branch(branch, i, o) for i, o in pairs):
        return branch
    return None


def _atom_ok_branch(branch: Branch, inp: str, out: str) -> bool:
    try:
        return branch.eval(inp) == out
    except EvalFailure:
        return False


def synthesize_branch(
    spec: ExampleSpec, bounds: Bounds = DEFAULT_BOUNDS
) -> Optional[Branch]:
    """Highest-ranked branch consistent with every pair, or None."""
    return _branch_for_pairs(spec.pairs, bounds)


def _branch_for_pairs(pairs: list[tuple[str, str]], bounds: Bounds) -> Optional[Branch]:
    single = _best_single_atom(pairs, bounds)
    if single is not None:
        return single
    return _multi_atom_branch(pairs, bounds)


# ---------------------------------------------------------------------------
# Conditionals


def _predicate_candidates(bounds: Bounds):
    for kind in ("startswith", "endswith"):
        for tc in ALPHABET:
            yield Predicate(kind, tc)
    for tc in ALPHABET:
        for occ in range(1, bounds.max_occurrence + 1):
            yield Predicate("contains", tc, occ)


def _find_predicate(
    true_on: list[str], false_on: list[str], bounds: Bounds
) -> Optional[Predicate]:
    for pred in _predicate_candidates(bounds):
        if all(pred.holds(s) for s in true_on) and not any(
            pred.holds(s) for s in false_on
        ):
            return pred
    return None


def _program_succeeds(prog: ExtractionProgram, s: str) -> bool:
    try:
        prog.eval(s)
        return True
    except EvalFailure:
        return False


def synthesize(
    spec: ExampleSpec, bounds: Bounds = DEFAULT_BOUNDS
) -> ExtractionProgram:
    """Synthesize the top-ranked program reproducing every spec pair.

    Raises SynthesisFailure naming the pairs that could not be covered.
    """
    spec.validate()
    pairs = list(spec.pairs)
    negatives = list(spec.negatives)

    single = _branch_for_pairs(pairs, bounds)
    if single is not None:
        prog: ExtractionProgram = Single(single)
        if not any(_program_succeeds(prog, n) for n in negatives):
            _verify(prog, pairs, negatives)
            return prog

    branch_cache: dict[tuple[int, ...], Optional[Branch]] = {}

    def branch_for(subset: tuple[int, ...]) -> Optional[Branch]:
        if subset not in branch_cache:
            branch_cache[subset] = _branch_for_pairs([pairs[i] for i in subset], bounds)
        return branch_cache[subset]

    remaining = list(range(len(pairs)))
    partitions: list[tuple[Optional[Predicate], Branch]] = []
    while remaining:
        if len(partitions) >= bounds.max_branches:
            raise SynthesisFailure(
                f"more than {bounds.max_branches} branches required",
                [pairs[i] for i in remaining],
            )
        found = None
        # Largest coverable subset first; combinations() emits same-size
        # subsets in index order, so ties go to the earliest example.
        for size in range(len(remaining), 0, -1):
            for subset in combinations(remaining, size):
                branch = branch_for(subset)
                if branch is None:
                    continue
                rest = [i for i in remaining if i not in subset]
                needs_predicate = bool(rest) or bool(negatives)
                pred = None
                if needs_predicate:
                    pred = _find_predicate(
                        [pairs[i][0] for i in subset],
                        [pairs[i][0] for i in rest] + negatives,
                        bounds,
                    )
                    if pred is None:
                        continue
                found = (list(subset), branch, pred)
                break
            if found:
                break
        if found is None:
            raise SynthesisFailure(
                "no branch/predicate covers the remaining examples",
                [pairs[i] for i in remaining],
            )
        subset, branch, pred = found
        partitions.append((pred, branch))
        remaining = [i for i in remaining if i not in subset]

    if len(partitions) == 1 and partitions[0][0] is None:
        prog = Single(partitions[0][1])
    elif partitions[-1][0] is None:
        cases = tuple((p, b) for p, b in partitions[:-1])
        prog = Switch(cases, default=partitions[-1][1])
    else:
        prog = Switch(tuple((p, b) for p, b in partitions), default=None)
    _verify(prog, pairs, negatives)
    return prog


def _verify(
    prog: ExtractionProgram, pairs: list[tuple[str, str]], negatives: list[str]
) -> None:
    bad = []
    for inp, out in pairs:
        try:
            if prog.eval(inp) != out:
                bad.append((inp, out))
        except EvalFailure:
            bad.append((inp, out))
    for neg in negatives:
        if _program_succeeds(prog, neg):
            bad.append((neg, "<must fail>"))
    if bad:
        raise SynthesisFailure(
            f"synthesized program does not reproduce {len(bad)} example(s)", bad
        )
