"""MCME: hybrid Bayesian-network structure learning for discrete data.

The pipeline finds candidate neighbours of every variable with a
memory-limited CI search (:func:`citm`), screens the leftovers by
entropy-eliminated mutual information (:func:`eemi_search`), merges the
proposals into a skeleton (:func:`build_skeleton`) and orients it with the
two-node TN score (:func:`generate_dag`). A BIC hill climber
(:func:`hill_climb`) serves as the baseline.
"""

__version__ = "0.1.0"

from .citest import assoc, chi2_isf, chi2_sf, degrees_of_freedom, g2_statistic, min_assoc
from .citm import CitmParams, CpcResult, citm
from .dataset import ContingencyTable, Dataset, VariableMeta, contingency, load_csv
from .eemi_search import EemiParams, eemi_search
from .errors import (
    CapacityError,
    FormatError,
    McmeError,
    StructureError,
    UnknownReferenceError,
    ValidationError,
)
from .evaluation import BenchReport, StructureDiff, run_benchmark, structure_diff
from .info import (
    conditional_entropy,
    conditional_mutual_information,
    eemi,
    entropy,
    joint_entropy,
    mutual_information,
)
from .network import (
    BayesNet,
    Cpt,
    Dag,
    forward_sample,
    joint_probability,
    load_reference,
    parse_network,
    write_network,
)
from .orientation import generate_dag, orient_edge, tn_score
from .pipeline import McmeConfig, Skeleton, build_skeleton, mcme_cpc
from .scores import bic_score, hill_climb, lld_score
