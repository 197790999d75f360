"""Rainbow subgraphs in randomly perturbed graphs.

Modules: ``graph`` (gadgets, copies), ``densities``, ``coloring``,
``solver`` (exact rainbow-arrow decisions), ``constructions`` and
``simulate``.  The ``rainbowlab`` command wraps them.
"""

__version__ = "0.1.0"
