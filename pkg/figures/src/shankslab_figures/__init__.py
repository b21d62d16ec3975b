"""Static figures from shankslab CSV exports.

The package reads only the CSV formats the computation side ships
(scatter: index,gamma,re,im; series: T,n,empirical_re,... ) and renders
PNG files; everything is a pure function of file content and PlotSpec.
"""

from .plots import (
    IMAGE_SIZE,
    DEFAULT_POINT_LIMIT,
    PlotDataError,
    PlotSpec,
    read_scatter,
    read_series,
    render,
    scatter_centroid,
)

__version__ = "0.1.0"

__all__ = [
    "IMAGE_SIZE", "DEFAULT_POINT_LIMIT", "PlotDataError", "PlotSpec",
    "read_scatter", "read_series", "render", "scatter_centroid",
    "__version__",
]
