"""benchcat: a self-hostable registry toolkit for RDF benchmark datasets.

Parsing, validation, deterministic packaging, result-report exchange,
site generation, and a small linked-data server, with no mandatory
external services.
"""

__version__ = "0.1.0"
