"""Exact multi-way isoperimetric constants of finite graphs and checks on them.

The constants are computed by exact branch and bound over set partitions with
rational arithmetic; around them sit Laplacian spectra, permutation groups
acting by automorphisms, block systems, and the verification suites.
"""

from mwiso.graph import Graph, VertexSet, new_graph, read_graph
from mwiso.isoperimetry import IsoResult, Quantity, h_n, iota_n, iota_tilde_n, minimize, rho_n
from mwiso.partition import Partition
from mwiso.perm import BlockSystem, Perm, PermGroup, automorphism_group, generate_group
from mwiso.spectral import Spectrum, eigenvalues, lambda_n

__version__ = "0.1.0"

__all__ = [
    "BlockSystem", "Graph", "IsoResult", "Partition", "Perm", "PermGroup", "Quantity", "Spectrum",
    "VertexSet", "automorphism_group", "eigenvalues", "generate_group", "h_n", "iota_n",
    "iota_tilde_n", "lambda_n", "minimize", "new_graph", "read_graph", "rho_n",
]
