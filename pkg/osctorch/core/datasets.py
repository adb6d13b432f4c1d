"""For locating user-provided network data."""
import os
import pathlib
import logging
import appdirs

logger = logging.getLogger(__name__)

# Environment variable that overrides the per-user data directory.
env_data_dir = 'OSCTORCH_DATA'

# Extensions searched, in order, for an edge-list file.
extensions = ('.edges', '.txt', '')


def data_dir():
    """Directory searched for edge-list files.

    Returns
    -------
    pathlib.Path
        `$OSCTORCH_DATA` if set, else the per-user data directory
        (e.g. `~/.local/share/osctorch` on linux).

    """
    override = os.environ.get(env_data_dir)
    if override:
        return pathlib.Path(override).expanduser()
    return pathlib.Path(appdirs.user_data_dir('osctorch'))


def find_data(name):
    """Look for an edge-list file named `name` in the data directory.

    Parameters
    ----------
    name : str
        File stem, e.g. 'syria' looks for 'syria.edges' then 'syria.txt'.

    Returns
    -------
    path : pathlib.Path or None

    """
    root = data_dir()
    for ext in extensions:
        path = root / (name + ext)
        if path.is_file():
            logger.debug('dataset %r found at %s', name, path)
            return path
    logger.debug('dataset %r not found under %s', name, root)
    return None
