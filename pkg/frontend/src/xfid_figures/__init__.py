"""Figure rendering for the xfid sweep CSV files."""

from .render import (
    FIGURE_IDS,
    SWEPT_BY_FIGURE,
    RenderJob,
    SchemaError,
    build_figure,
    read_table,
    render,
)

__all__ = [
    "FIGURE_IDS",
    "SWEPT_BY_FIGURE",
    "RenderJob",
    "SchemaError",
    "build_figure",
    "read_table",
    "render",
]

__version__ = "0.1.0"
