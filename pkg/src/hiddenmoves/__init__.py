"""Game models with staged hiding of intermediate moves, a small functional
language with execution counters, its game interpretation, and checkers for
the step-by-step correspondence between syntactic and semantic reduction."""

__version__ = "0.1.0"
