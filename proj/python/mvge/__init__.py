"""Multi-view unsupervised graph embeddings.

Thin wrapper over the C++ core. Embeddings and features are NumPy arrays.
"""

import json as _json

from ._mvge import (
    Dataset,
    NumericalError,
    ValidationError,
    __version__,
    embedding_dim_std,
    generate_synthetic,
    global_homophily,
    load_dataset,
    local_homophily,
    micro_f1,
    node_classification_eval,
    roc_auc,
    run_cli,
)
from ._mvge import default_config as _default_config
from ._mvge import train as _train


def default_config():
    """Default training configuration as a dict."""
    return _json.loads(_default_config())


def train(dataset, **config):
    """Train embeddings on `dataset`. Keyword arguments override config keys,
    e.g. ``train(ds, epochs=50, task_mask=["ego", "adj"], seed=3)``."""
    return _train(dataset, _json.dumps(config) if config else "")


__all__ = [
    "Dataset",
    "NumericalError",
    "ValidationError",
    "__version__",
    "default_config",
    "embedding_dim_std",
    "generate_synthetic",
    "global_homophily",
    "load_dataset",
    "local_homophily",
    "micro_f1",
    "node_classification_eval",
    "roc_auc",
    "run_cli",
    "train",
]
