"""A small text language for declaring models and querying them."""

from .evaluate import EvalError, Result, evaluate
from .model import Model, ModelConsistencyError, ResolveError, parse
from .parser import DslError, LexError, ParseError, Span, parse_statements
from .printer import print_model

__all__ = [
    "DslError", "EvalError", "LexError", "Model", "ModelConsistencyError", "ParseError",
    "ResolveError", "Result", "Span", "evaluate", "parse", "parse_statements", "print_model",
]
