"""
Coefficient expression language: tokenizer, Pratt parser, constant folder
and vectorised evaluator.
"""

from .nodes import CONSTANTS, FUNCTIONS, VARIABLES, Binary, Call, Const, Expr, Neg, Number, Var
from .parser import Token, parse, tokenize
from .evaluator import CompiledExpression, compile_expression, evaluate, fold, format_expr

__all__ = [
    'CONSTANTS',
    'FUNCTIONS',
    'VARIABLES',
    'Binary',
    'Call',
    'Const',
    'Expr',
    'Neg',
    'Number',
    'Var',
    'Token',
    'parse',
    'tokenize',
    'CompiledExpression',
    'compile_expression',
    'evaluate',
    'fold',
    'format_expr',
]
