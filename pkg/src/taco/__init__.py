"""Visuotactile imitation learning toolkit.

Subpackages:
  data          episodic multi-rate dataset format, alignment, normalization
  encoders      modality-specific feature extractors (512-d tokens)
  policy        CVAE action-chunking transformer and its loss
  training      behavior-cloning trainer, augmentation, offline evaluation
  rollout       toy closed-loop tasks, synthetic sensors, receding-horizon runner
  repeatability press-release protocol simulation and analysis
"""

__version__ = "0.1.0"
