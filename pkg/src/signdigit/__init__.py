"""Hand-sign digit recognition with a from-scratch CNN and Bangla speech output."""

__version__ = "0.1.0"

from . import augment, dataset, imaging, metrics, model_io, nn, service, speech, synth, train

__all__ = [
    "augment",
    "dataset",
    "imaging",
    "metrics",
    "model_io",
    "nn",
    "service",
    "speech",
    "synth",
    "train",
]
