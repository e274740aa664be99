"""Pattern matching of input-arc expressions against token values.

Variables bind at spine positions (through tuple constructors).
Computed subexpressions prune a match as soon as they are fully bound;
otherwise the decision is deferred to the final demand-inclusion check
performed by the engines, which keeps matching sound and complete.
"""

from __future__ import annotations

from ..values import Pointer, Value
from . import tast as t
from .interp import Binding, Store, eval_expr

__all__ = ["match_pattern", "fully_bound"]


def fully_bound(e: t.TExpr, binding: Binding) -> bool:
    return all(
        var.kind == "ptr" or var.name in binding for var, _sp in t.walk_vars(e)
    )


def _has_wild(e: t.TExpr) -> bool:
    return any(True for _w, _sp in t.walk_wilds(e))


def match_pattern(
    pattern: t.TExpr, value: Value, binding: Binding, store: Store
) -> Binding | None:
    """Extend ``binding`` so that ``pattern`` can denote ``value``.

    Returns the extended binding, or None when the match is impossible.
    A returned binding may still fail the engine's inclusion check when
    deferred computed positions disagree.
    """
    if isinstance(pattern, t.TVar) and not pattern.deref:
        if pattern.kind == "ptr":
            return binding if value == Pointer(pattern.name) else None
        bound = binding.get(pattern.name)
        if bound is not None:
            return binding if bound == value else None
        out = dict(binding)
        out[pattern.name] = value
        return out
    if isinstance(pattern, t.TWild):
        return binding
    if isinstance(pattern, t.TConst):
        return binding if pattern.value == value else None
    if isinstance(pattern, t.TTupleX):
        if not isinstance(value, tuple) or len(value) != len(pattern.items):
            return None
        out = binding
        for sub, item in zip(pattern.items, value):
            out = match_pattern(sub, item, out, store)
            if out is None:
                return None
        return out
    # computed position: compare when evaluable, defer otherwise
    if _has_wild(pattern):
        return binding
    if fully_bound(pattern, binding):
        return binding if eval_expr(pattern, binding, store) == value else None
    return binding
