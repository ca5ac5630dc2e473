"""Memetic wrapper-filter feature selection."""

from .baselines import info_gain, relieff_weights, select_top_m
from .classifier import cv_accuracy, fold_accuracy, nn1_predict, repeated_cv
from .dataset import Dataset, DatasetError, FoldAssignment, RawTable, finalize, impute_missing, load_csv, load_dataset, make_folds, project
from .filter_metrics import CorrelationCache, build_cache, fe_subset, merit, pearson
from .memetic import FitnessValue, GAConfig, MFSResult, local_search, run_mfs

__version__ = "0.1.0"
