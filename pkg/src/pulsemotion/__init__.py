"""Heart-rate estimation from facial feature-point motion trajectories.

Pipeline: cubic-spline upsampling -> unstable-feature rejection ->
Butterworth band-pass -> blind source separation (PCA / FastICA / JADE /
SHIBBS) -> per-component moving-DTW template matching -> peak detection ->
automatic component selection by inter-peak skewness -> beats per minute.
An evaluation harness compares every method against ECG ground truth.
"""

from ._kernels import USING_NUMBA
from .bss import (ComponentSet, WhiteningTransform, extract_components,
                  fastica_components, jade_components, normalize_components,
                  pca_components, read_components, shibbs_components, whiten,
                  write_components)
from .config import PipelineConfig, from_dict, load_config
from .ecg import EcgRecord, ecg_ground_truth_bpm, read_ecg
from .errors import (ConfigError, ConvergenceError, DataError,
                     EstimationError, GroundTruthUnavailableError,
                     PulseMotionError, RankDeficiencyError)
from .evaluate import EvaluationReport, rmse, run_benchmark, write_report
from .preprocess import (butterworth_bandpass, cubic_spline_resample,
                         preprocess, remove_unstable_features)
from .pulse import (MatchCurve, MotionPattern, PeakSet, PulseEstimate,
                    detect_peaks, dtw_distance, estimate_pulse,
                    estimate_pulse_with_artifacts, extract_pattern,
                    is_bad_component, mdtw, pulse_rate,
                    select_optimal_component, skewness)
from .ssa import SsaDecomposition, ssa_decompose, ssa_reconstruct
from .trajectories import (BandPassSpec, FeatureTrajectories,
                           read_trajectories, write_trajectories)

__version__ = "0.1.0"

__all__ = [
    "BandPassSpec", "ComponentSet", "ConfigError", "ConvergenceError",
    "DataError", "EcgRecord", "EstimationError", "EvaluationReport",
    "FeatureTrajectories", "GroundTruthUnavailableError", "MatchCurve",
    "MotionPattern", "PeakSet", "PipelineConfig", "PulseEstimate",
    "PulseMotionError", "RankDeficiencyError", "SsaDecomposition",
    "USING_NUMBA", "WhiteningTransform", "butterworth_bandpass",
    "cubic_spline_resample", "detect_peaks", "dtw_distance",
    "ecg_ground_truth_bpm", "estimate_pulse", "estimate_pulse_with_artifacts",
    "extract_components", "extract_pattern", "fastica_components",
    "from_dict", "is_bad_component", "jade_components", "load_config",
    "mdtw", "normalize_components", "pca_components", "preprocess",
    "pulse_rate", "read_components", "read_ecg", "read_trajectories",
    "remove_unstable_features", "rmse", "run_benchmark",
    "select_optimal_component", "shibbs_components", "skewness",
    "ssa_decompose", "ssa_reconstruct", "whiten", "write_components",
    "write_report", "write_trajectories",
]
