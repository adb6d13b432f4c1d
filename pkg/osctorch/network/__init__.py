"""Networks: graph construction, builtin datasets and Laplacians."""

from ._graph import (Graph, from_edge_list, render, degrees, laplacian,
                     density, spectrum, algebraic_connectivity)
from ._datasets import NetworkDataset, DATASETS, builtin, load
