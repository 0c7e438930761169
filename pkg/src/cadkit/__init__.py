"""cadkit: exact polynomial machinery for CAD variable-ordering selection.

Modules: polynomial (sparse exact arithmetic), projection (first projection
factor sets), features (term-measure algebra), heuristics (Table-style
ordering rules), tokenizer (sequence encodings), datagen (random systems),
labeling (ordering labels and corpora), eval (accuracy metrics), cli.
"""

from cadkit._kernel import IMPLEMENTATION as KERNEL_IMPLEMENTATION

__version__ = "0.1.0"

__all__ = ["KERNEL_IMPLEMENTATION", "__version__"]
