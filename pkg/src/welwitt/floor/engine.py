"""Enumeration kernel selection: compiled extension if built, else pure Python."""

try:
    from . import _engine_cy as impl  # type: ignore[attr-defined]

    COMPILED = True
except ImportError:  # pragma: no cover - depends on the build
    from . import _engine as impl

    COMPILED = False

GEN_VERSION = impl.GEN_VERSION
class_budgets = impl.class_budgets
canonical_form = impl.canonical_form
enumerate_marked_raw = impl.enumerate_marked_raw
first_move_count = impl.first_move_count
