"""Wikipedia link prediction as sentence-pair classification.

Deterministic pipeline: wikitext noise removal, premise/hypothesis
construction from node pairs, a hashed-feature logistic baseline with
AdamW, macro-F1 evaluation, and competition-format submission output.
"""

__version__ = "0.1.0"
