"""Symbolic tensor calculus.

The package has three layers: component calculus over an explicit chart
(curvature of a metric or frame, Petrov classification, a catalog of
standard metrics), abstract-index manipulation of opaque tensor symbols,
and abstract tensor algebras defined by their commutation rules.  All of it
rests on the exact scalar kernel in :mod:`tensoralg.scalars`.
"""

from .scalars import (Expr, ExprSyntaxError, PI, diff, evaluate, is_zero,
                      parse, ratsimp, render, sym, syms, trigsimp)
from .indicial import (IndexConflictError, IndexExpr, IndexedObject,
                       TensorContext, TensorSyntaxError, anti_group, canform,
                       contract, contravariant_indices, covariant_indices,
                       covdiff, equivalent, expand_christoffels, extdiff,
                       ichr1, ichr2, inner, iobj, liediff, parse_tensor_expr,
                       partial, split_indices, sym_group, wedge)
from .curvature import MetricContext, setup_frame, setup_metric
from .petrov import (NPTetrad, PetrovType, UnclassifiableError, WeylScalars,
                     classify, invariant_I, invariant_J, np_tetrad,
                     petrov_of_metric, weyl_scalars)
from .catalog import MetricEntry, list_entries, load, entry
from .algebras import AlgebraConfig, MVec, af, atensimp, av, init_atensor, \
    multiplication_table, sf

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
