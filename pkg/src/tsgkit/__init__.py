"""tsgkit: troubleshooting-guide automation.

Segment a Markdown TSG into statements, identify each statement's
component type with a few-shot twin-network classifier, extract its
constituents with parsers synthesized from input/output examples, and
emit a schematized document plus a notebook-style workflow.
"""

from .clauses import Lexicon, TaggedSentence, load_lexicon, strip_tags, tag_clauses
from .dsl import (
    AbsPos,
    Branch,
    ConstStr,
    EvalFailure,
    ExtractionProgram,
    ParseError,
    Predicate,
    RegPos,
    Single,
    SubStr,
    Switch,
    eval_program,
    parse,
    rank,
    resolve_position,
    serialize,
)
from .extract import (
    ParsedComponent,
    ParserRegistry,
    RegistryEntry,
    extract,
    extract_repeating,
    load_registry,
    save_registry,
    split_pipes,
)
from .identify import (
    Classification,
    Prototype,
    classify,
    compute_prototypes,
    knn_bow_classify,
)
from .ingest import RawDocument, Statement, clean_document, segment, tokenize
from .pipeline import SchematizedTSG, Workflow, emit_workflow, schematize
from .siamese import (
    Hyper,
    SiameseModel,
    TrainingPair,
    embed,
    pair_loss,
    pair_similarity,
    sample_pairs,
    train,
)
from .synthesis import (
    Bounds,
    ExampleSpec,
    SynthesisFailure,
    generate_atoms,
    load_spec,
    synthesize,
    synthesize_branch,
)
from .vectorize import BowVector, IndexSequence, Vocabulary, bow, build_vocabulary, encode

__version__ = "0.1.0"
