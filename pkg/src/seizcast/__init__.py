"""Desk-scale EEG seizure prediction: EDF ingestion, STFT featurization,
and a from-scratch multi-scale dilated 3D CNN with exact gradients."""

__version__ = "0.1.0"
