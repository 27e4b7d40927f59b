"""Walk a Markdown troubleshooting guide through cleaning, segmentation,
and component-type classification.

Run from the repository root:

    python3 demos/01_ingest_and_classify.py
"""

from tsgkit import evalharness
from tsgkit.config import data_path
from tsgkit.identify import classify, compute_prototypes
from tsgkit.ingest import RawDocument, clean_document, segment
from tsgkit.siamese import Hyper, sample_pairs, train
from tsgkit.vectorize import build_vocabulary, encode

# --- ingest ------------------------------------------------------------------
# Cleaning blanks image embeds and table rows in place, so the line
# numbers of everything that survives still point into the original file.

with open(data_path("sample_tsg.md"), encoding="utf-8") as fh:
    doc = RawDocument(fh.read(), "sample_tsg.md")

statements = segment(clean_document(doc))
print(f"{len(statements)} statements segmented from {doc.source_name}")
for s in statements[:4]:
    print(f"  L{s.line_start}-{s.line_end}: {s.raw[:60]}")
print()

# --- train the twin network on the bundled corpus ----------------------------
# The meta-task is pairwise: "do these two statements share a component
# type?"  Classification afterwards is nearest-prototype search.

corpus = evalharness.load_corpus(data_path("corpus.jsonl"))
vocab = build_vocabulary([s for s, _ in corpus.examples])
hyper = Hyper(max_len=32, seed=42, epochs=15)
encoded = [(encode(s, vocab, hyper.max_len), label) for s, label in corpus.examples]
pairs = sample_pairs(encoded, seed=42, n_pairs=2000)
print(f"training on {len(pairs)} statement pairs ...")
model = train(pairs, hyper, vocab.size)
print(f"epoch mean loss: {model.loss_trace[0]:.3f} -> {model.loss_trace[-1]:.3f}\n")

support: dict[str, list] = {}
for x, label in encoded:
    support.setdefault(label, []).append(x)
prototypes = compute_prototypes(model, support)

# --- classify every statement of the guide -----------------------------------

for s in statements:
    result = classify(model, prototypes, encode(s, vocab, hyper.max_len))
    print(f"{result.label:<17} {result.similarity:.3f}  {s.raw[:58]}")
