#!/usr/bin/env python3
"""Generate the bundled synthetic fixture under tests/fixtures/synthetic/.

200 node pairs over 400 nodes. A pair is labeled 1 iff the two cleaned
texts share at least one token, which the generator enforces by drawing
each side's filler words from disjoint vocabulary pools and injecting
shared tokens only for positive pairs. Raw node texts carry wikitext-style
noise (brace spans, stray braces, punctuation, ragged spacing) that the
cleaning stages must remove without changing token overlap.

Deterministic for a fixed seed; the manifest records the exact label
counts the stats command must reproduce.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

SEED = 20230923
N_POSITIVE = 97
N_NEGATIVE = 103

POOL_A = [f"alfa{i}" for i in range(40)]
POOL_B = [f"bravo{i}" for i in range(40)]
POOL_SHARED = [f"core{i}" for i in range(30)]
POOL_JUNK = [f"junk{i}" for i in range(20)]  # only ever inside brace spans

PUNCT = list(",.;:!?()[]'\"")


def noisy(words: list[str], rng: random.Random) -> str:
    """Render words with punctuation, brace-span junk, and ragged spaces."""
    parts: list[str] = []
    for w in words:
        if rng.random() < 0.3:
            w = w + rng.choice(PUNCT)
        if rng.random() < 0.15:
            w = rng.choice(PUNCT) + w
        parts.append(w)
        if rng.random() < 0.25:
            junk = " ".join(rng.sample(POOL_JUNK, rng.randint(1, 3)))
            parts.append("{{" + junk + "}}")
        if rng.random() < 0.2:
            parts.append(" " * rng.randint(1, 3))
    text = " ".join(parts)
    roll = rng.random()
    if roll < 0.1:
        text = "{" + text  # surplus opener, removed by the balance stage
    elif roll < 0.2:
        text = text + " }"  # surplus closer
    return text


def main() -> None:
    rng = random.Random(SEED)
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "synthetic"
    out_dir.mkdir(parents=True, exist_ok=True)

    labels = [1] * N_POSITIVE + [0] * N_NEGATIVE
    rng.shuffle(labels)

    nodes: list[tuple[int, str]] = []
    pair_rows: list[tuple[str, int, int, int]] = []
    for i, label in enumerate(labels):
        id1, id2 = 2 * i, 2 * i + 1
        words_a = rng.sample(POOL_A, rng.randint(3, 6))
        words_b = rng.sample(POOL_B, rng.randint(3, 6))
        if label == 1:
            shared = rng.sample(POOL_SHARED, rng.randint(2, 3))
            words_a += shared
            words_b += shared
        rng.shuffle(words_a)
        rng.shuffle(words_b)
        nodes.append((id1, noisy(words_a, rng)))
        nodes.append((id2, noisy(words_b, rng)))
        pair_rows.append((f"p{i}", id1, id2, label))

    with open(out_dir / "nodes.tsv", "w", encoding="utf-8") as f:
        for node_id, text in nodes:
            f.write(f"{node_id}\t{text}\n")
    with open(out_dir / "train.csv", "w", encoding="utf-8") as f:
        f.write("id,id1,id2,label\n")
        for pair_id, id1, id2, label in pair_rows:
            f.write(f"{pair_id},{id1},{id2},{label}\n")
    with open(out_dir / "test.csv", "w", encoding="utf-8") as f:
        f.write("id,id1,id2\n")
        for pair_id, id1, id2, _ in pair_rows:
            f.write(f"{pair_id},{id1},{id2}\n")

    manifest = {
        "seed": SEED,
        "pairs": len(pair_rows),
        "nodes": len(nodes),
        "count_0": sum(1 for row in pair_rows if row[3] == 0),
        "count_1": sum(1 for row in pair_rows if row[3] == 1),
        "label_rule": "1 iff the cleaned texts share at least one token",
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote fixture to {out_dir}: {manifest}")


if __name__ == "__main__":
    main()
