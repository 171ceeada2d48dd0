"""Temporal deontic STIT logic: formulas, finite models and checkers."""

from .syntax import parse, to_text, enumerate_formulas
from .model import NeutralModel, UtilModel, load_model, dump_model, model_from_json
from .semantics import eval_neutral, eval_util, evaluate, extension, valid_on_model

__version__ = "0.1.0"
