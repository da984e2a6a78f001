import logging

from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Formula, Implies, Not, Or,
                                Rule, Top, Var)

logger = logging.getLogger(__name__)

IMPLIES, OR, AND, UNARY = 1, 2, 3, 4


def _modality_name(box: Formula) -> str:
    if isinstance(box, BoxT):
        return 'T'
    if isinstance(box, BoxE):
        return 'E'
    return f"A{box.agent}"


def _diamond_body(f: Formula):
    """Return (box, body) when f is ~[M]~body, else None."""
    if isinstance(f, Not) and isinstance(f.sub, (BoxT, BoxE, BoxAgent)) and isinstance(f.sub.sub, Not):
        return f.sub, f.sub.sub.sub
    return None


def _render(f: Formula, prefix: str):
    """Return (text, precedence level) of `f`."""
    if isinstance(f, Var):
        return f"{prefix}{f.index}", UNARY
    if isinstance(f, Top):
        return 'T', UNARY
    if isinstance(f, Bottom):
        return 'F', UNARY
    diamond = _diamond_body(f)
    if diamond is not None:
        box, body = diamond
        return f"<{_modality_name(box)}> {_wrap(body, prefix, UNARY)}", UNARY
    if isinstance(f, Not):
        return f"~{_wrap(f.sub, prefix, UNARY)}", UNARY
    if isinstance(f, (BoxT, BoxE, BoxAgent)):
        return f"[{_modality_name(f)}] {_wrap(f.sub, prefix, UNARY)}", UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, prefix, AND)} & {_wrap(f.right, prefix, AND + 1)}", AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, prefix, OR)} | {_wrap(f.right, prefix, OR + 1)}", OR
    if isinstance(f, Implies):
        return f"{_wrap(f.left, prefix, IMPLIES + 1)} -> {_wrap(f.right, prefix, IMPLIES)}", IMPLIES
    raise TypeError(f"Not a formula: {f!r}")


def _wrap(f: Formula, prefix: str, minimum: int) -> str:
    text, level = _render(f, prefix)
    return text if level >= minimum else f"({text})"


def format_formula(f: Formula, prefix: str = 'p') -> str:
    """Canonical text of a formula; diamonds are re-sugared and parentheses kept minimal."""
    return _render(f, prefix)[0]


def format_rule(rule: Rule, prefix: str = 'x') -> str:
    premises = " ; ".join(format_formula(p, prefix) for p in rule.premises)
    return f"{premises} / {format_formula(rule.conclusion, prefix)}"
