"""Check which optional modules are available."""
import importlib


def try_import(path, keys=None):
    """Try to import from a module.

    Parameters
    ----------
    path : str
        Path to module, e.g. 'scipy.linalg'
    keys : str or list[str], optional
        Keys to load from the module

    Returns
    -------
    loaded_stuff : module or object or tuple
        A tuple is returned if `keys` is a list.
        Return None if import fails.

    """
    try:
        module = importlib.import_module(path)
    except ImportError:
        module = None
    if keys is None:
        return module
    single = isinstance(keys, str)
    keys = [keys] if single else list(keys)
    loaded = [getattr(module, key, None) if module is not None else None
              for key in keys]
    return loaded[0] if single else tuple(loaded)
