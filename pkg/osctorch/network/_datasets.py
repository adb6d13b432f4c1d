"""Builtin networks.

Named datasets
--------------
toy4
    Four nodes, edges 1-2, 1-3, 2-3, 3-4 (a triangle with a pendant
    node). Laplacian spectrum {4, 3, 1, 0}.
zachary
    Zachary's karate club: 34 nodes, 78 edges.
sync-a ... sync-f
    Six small networks whose synchronization times are compared:
    sync-a = path P4, sync-b = toy4, sync-c = K4, sync-d = path P5,
    sync-e = the 5-node graph with edges 1-4, 2-4, 1-5, 2-5, 3-5, 4-5
    (node 5 is a hub; spectrum {5, 4, 2, 1, 0}), sync-f = K5.
    sync-b and sync-e are identified from their dominant decay rates
    (-0.2679492 and -0.2087122, second -0.3819660 and -0.2679492).

Families
--------
path:N, cycle:N (N >= 3), complete:N, star:N (N >= 2, hub = node 1).

Any other name is looked up as an edge-list file in the data directory
(see `osctorch.core.datasets`).
"""
import logging
import pathlib
from typing import NamedTuple, Optional, Sequence, Tuple
from ..core import datasets
from ..core.errors import UnknownDataset
from ._graph import Graph, from_edge_list

logger = logging.getLogger(__name__)


class NetworkDataset(NamedTuple):
    name: str
    edges: Sequence[Tuple[int, int]]
    n: Optional[int] = None
    expected_spectrum: Optional[Sequence[float]] = None

    def graph(self):
        return Graph.from_edges(self.edges, n=self.n, name=self.name)


def _adjacency_lists(lists):
    return [(i, j) for i, nbrs in lists.items() for j in nbrs]


_zachary = _adjacency_lists({
    1: [2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 18, 20, 22, 32],
    2: [3, 4, 8, 14, 18, 20, 22, 31],
    3: [4, 8, 9, 10, 14, 28, 29, 33],
    4: [8, 13, 14],
    5: [7, 11],
    6: [7, 11, 17],
    7: [17],
    9: [31, 33, 34],
    10: [34],
    14: [34],
    15: [33, 34],
    16: [33, 34],
    19: [33, 34],
    20: [34],
    21: [33, 34],
    23: [33, 34],
    24: [26, 28, 30, 33, 34],
    25: [26, 28, 32],
    26: [32],
    27: [30, 34],
    28: [34],
    29: [32, 34],
    30: [33, 34],
    31: [33, 34],
    32: [33, 34],
    33: [34],
})


def path_edges(n):
    return [(i, i + 1) for i in range(1, n)]


def cycle_edges(n):
    return path_edges(n) + [(n, 1)]


def complete_edges(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def star_edges(n):
    return [(1, j) for j in range(2, n + 1)]


_toy4 = [(1, 2), (1, 3), (2, 3), (3, 4)]

DATASETS = {
    'toy4': NetworkDataset('toy4', _toy4, 4, (4., 3., 1., 0.)),
    'zachary': NetworkDataset('zachary', _zachary, 34),
    'sync-a': NetworkDataset('sync-a', path_edges(4), 4),
    'sync-b': NetworkDataset('sync-b', _toy4, 4, (4., 3., 1., 0.)),
    'sync-c': NetworkDataset('sync-c', complete_edges(4), 4,
                             (4., 4., 4., 0.)),
    'sync-d': NetworkDataset('sync-d', path_edges(5), 5),
    'sync-e': NetworkDataset('sync-e',
                             [(1, 4), (2, 4), (1, 5), (2, 5), (3, 5), (4, 5)],
                             5, (5., 4., 2., 1., 0.)),
    'sync-f': NetworkDataset('sync-f', complete_edges(5), 5,
                             (5., 5., 5., 5., 0.)),
}

FAMILIES = {
    'path': (path_edges, 1),
    'cycle': (cycle_edges, 3),
    'complete': (complete_edges, 1),
    'star': (star_edges, 2),
}


def builtin(name):
    """Return a builtin network by name.

    Parameters
    ----------
    name : str
        Dataset id ('toy4', 'zachary', 'sync-a'...'sync-f'), family
        ('path:N', 'cycle:N', 'complete:N', 'star:N'), or the stem of an
        edge-list file in the data directory.

    Returns
    -------
    Graph

    Raises
    ------
    UnknownDataset

    """
    if name in DATASETS:
        return DATASETS[name].graph()
    if ':' in name:
        family, _, size = name.partition(':')
        if family in FAMILIES:
            make_edges, min_size = FAMILIES[family]
            try:
                size = int(size)
            except ValueError:
                raise UnknownDataset(f'{name}: size must be an integer') \
                    from None
            if size < min_size:
                raise UnknownDataset(f'{name}: {family} graphs need at '
                                     f'least {min_size} nodes')
            return Graph.from_edges(make_edges(size), n=size, name=name)
    path = datasets.find_data(name)
    if path is not None:
        logger.info('loading network %r from %s', name, path)
        return from_edge_list(path.read_text(encoding='utf-8'), name=name)
    raise UnknownDataset(f'Unknown network {name!r}')


def load(source):
    """Load a network from a builtin id or an edge-list file path."""
    path = pathlib.Path(source)
    if path.is_file():
        return from_edge_list(path.read_text(encoding='utf-8'),
                              name=path.stem)
    return builtin(source)
