from .dataset import (
    CACHE_MANIFEST,
    CACHE_TENSORS,
    Dataset,
    SpectralSample,
    build_dataset,
    load_dataset,
    save_dataset,
)
from .stft import StftConfig, hann_window, stft_featurize
from .timing import (
    INTERICTAL_FOLD,
    Label,
    LabeledInterval,
    TimingPolicy,
    label_intervals,
    select_leading_seizures,
    slide_windows,
)

__all__ = [
    "CACHE_MANIFEST",
    "CACHE_TENSORS",
    "Dataset",
    "INTERICTAL_FOLD",
    "Label",
    "LabeledInterval",
    "SpectralSample",
    "StftConfig",
    "TimingPolicy",
    "build_dataset",
    "hann_window",
    "label_intervals",
    "load_dataset",
    "save_dataset",
    "select_leading_seizures",
    "slide_windows",
    "stft_featurize",
]
