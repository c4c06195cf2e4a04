"""From-scratch classifiers and the model-selection protocol."""

from .data import CLASSES, Dataset, accuracy, Standardizer, holdout_split, per_class_metrics, standardize_fit, stratified_kfold
from .select import CLASSIFIERS, DEFAULT_GRIDS, SelectionReport, cross_validate_select, select_model
from .svm import HyperplaneModel, svm_objective, svm_scores, train_svm
from .trees import BoostModel, DecisionTree, ForestModel, boost_scores, fit_tree, forest_scores, train_adaboost, train_forest

__all__ = [
    "CLASSES", "CLASSIFIERS", "DEFAULT_GRIDS", "BoostModel", "Dataset", "DecisionTree", "ForestModel",
    "HyperplaneModel", "SelectionReport", "Standardizer", "accuracy", "boost_scores", "cross_validate_select",
    "fit_tree", "forest_scores", "holdout_split", "per_class_metrics", "select_model", "standardize_fit",
    "stratified_kfold", "svm_objective", "svm_scores", "train_adaboost", "train_forest", "train_svm",
]
