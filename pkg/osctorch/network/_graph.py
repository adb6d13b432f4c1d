"""Undirected simple graphs and their Laplacian."""
import logging
import torch
from scipy.sparse import csgraph
from ..core import constants
from ..core.errors import (ParseError, InvalidEdge, DuplicateEdge,
                           DisconnectedGraph, UndefinedDensity)
from ..core.linalg import eig_sym
from ..core.utils import default_dtype

logger = logging.getLogger(__name__)


class Graph:
    """Connected, undirected, unweighted graph without self-loops.

    The graph is stored as a symmetric 0/1 adjacency matrix and is
    immutable after construction. Node ids are 0-based internally and
    1-based in every text input and output.
    """

    def __init__(self, adjacency, name=None):
        """

        Parameters
        ----------
        adjacency : (N, N) tensor_like
            Symmetric 0/1 matrix with a zero diagonal.
        name : str, optional

        Raises
        ------
        InvalidEdge
            Non 0/1 entries or self-loops.
        DisconnectedGraph

        """
        adj = torch.as_tensor(adjacency, dtype=default_dtype).clone()
        if adj.dim() != 2 or adj.shape[0] != adj.shape[1] or not len(adj):
            raise InvalidEdge('Adjacency must be a non-empty square matrix')
        if not ((adj == 0) | (adj == 1)).all():
            raise InvalidEdge('Adjacency entries must be 0 or 1')
        if not torch.equal(adj, adj.t()):
            raise InvalidEdge('Adjacency must be symmetric')
        if adj.diagonal().any():
            node = int(adj.diagonal().nonzero()[0]) + 1
            raise InvalidEdge(f'Self-loop on node {node}')
        missing = _unreachable(adj)
        if missing:
            raise DisconnectedGraph(f'Nodes unreachable from node 1: '
                                    f'{[i + 1 for i in missing]}')
        self._adjacency = adj
        self._spectrum = None
        self.name = name

    @classmethod
    def from_edges(cls, edges, n=None, name=None):
        """Build a graph from 1-based node pairs.

        Parameters
        ----------
        edges : sequence of (int, int)
        n : int, optional
            Number of nodes. Default: largest node id.
        name : str, optional

        """
        edges = list(edges)
        n = n or max((max(e) for e in edges), default=0)
        if n < 1:
            raise InvalidEdge('A graph needs at least one node')
        adj = torch.zeros(n, n, dtype=default_dtype)
        seen = set()
        for i, j in edges:
            if i < 1 or j < 1 or i > n or j > n:
                raise InvalidEdge(f'Edge {i}-{j}: node ids must lie in '
                                  f'[1, {n}]')
            if i == j:
                raise InvalidEdge(f'Self-loop on node {i}')
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdge(f'Duplicate edge {key[0]}-{key[1]}')
            seen.add(key)
            adj[i - 1, j - 1] = adj[j - 1, i - 1] = 1
        return cls(adj, name=name)

    @property
    def n(self):
        return len(self._adjacency)

    @property
    def adjacency(self):
        return self._adjacency.clone()

    def edges(self):
        """Sorted list of 1-based pairs `(i, j)` with `i < j`."""
        idx = torch.triu(self._adjacency, 1).nonzero().tolist()
        return [(i + 1, j + 1) for i, j in idx]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return torch.equal(self._adjacency, other._adjacency)

    def __hash__(self):
        return hash(tuple(self.edges()) + (self.n,))

    def __repr__(self):
        name = f'{self.name!r}, ' if self.name else ''
        return f'Graph({name}n={self.n}, edges={len(self.edges())})'


def _unreachable(adj):
    """0-based nodes outside the connected component of node 0."""
    _, labels = csgraph.connected_components(adj.numpy(), directed=False)
    return (labels != labels[0]).nonzero()[0].tolist()


def from_edge_list(text, name=None):
    """Parse an edge-list document.

    One edge per line as two whitespace-separated positive integers.
    `#` starts a comment; blank lines are ignored. The number of nodes
    is the largest id.

    Parameters
    ----------
    text : str
    name : str, optional

    Returns
    -------
    Graph

    Raises
    ------
    ParseError
        Non-integer tokens, wrong number of tokens, or no edge at all.
    InvalidEdge
        Self-loop or non-positive id.
    DuplicateEdge
    DisconnectedGraph

    """
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f'line {lineno}: expected two node ids, '
                             f'got {len(tokens)} tokens')
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f'line {lineno}: non-integer node id in '
                             f'{line!r}') from None
        if i < 1 or j < 1:
            raise InvalidEdge(f'line {lineno}: node ids must be positive')
        edges.append((i, j))
    if not edges:
        raise ParseError('Edge list holds no edge')
    return Graph.from_edges(edges, name=name)


def render(g):
    """Edge-list text for `g`, parseable by `from_edge_list`."""
    return ''.join(f'{i} {j}\n' for i, j in g.edges())


def degrees(g):
    return g._adjacency.sum(dim=1)


def laplacian(g):
    """Graph Laplacian L = K - A, with K the diagonal degree matrix."""
    return torch.diag(degrees(g)) - g._adjacency


def density(g):
    """Density k_mean / (n - 1)."""
    if g.n < 2:
        raise UndefinedDensity('Density is undefined for a single node')
    return degrees(g).mean().item() / (g.n - 1)


def spectrum(g, method='eigh'):
    """Laplacian spectral decomposition (eigenvalues in decreasing order).

    Eigenvalues below the null-space threshold are set to exactly zero.
    The 'eigh' decomposition is cached on the graph.
    """
    if method == 'eigh' and g._spectrum is not None:
        return g._spectrum
    decomp = eig_sym(laplacian(g), method=method)
    val = decomp.eigenvalues.clone()
    val[val.abs() < constants.zero_eig] = 0
    decomp = decomp._replace(eigenvalues=val)
    if method == 'eigh':
        g._spectrum = decomp
    return decomp


def algebraic_connectivity(g):
    """Smallest non-zero Laplacian eigenvalue (0 for a single node)."""
    if g.n < 2:
        return 0.
    return spectrum(g).eigenvalues[-2].item()
