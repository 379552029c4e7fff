"""Task-driven link-trace sampling of attributed networks.

Samplers grow a connected node sample one frontier node at a time; the
attribute-aware ones pick the next node by the surprise of its candidate set
under the sample's empirical attribute distribution. The package also ships a
synthetic attributed-graph generator, task pipelines (characterization,
clustering, classification), and an experiment harness with a CLI.
"""

from .generator import GenerationError, SyntheticSpec, generate
from .graph import (
    Attribute,
    AttributedGraph,
    AttributeSchema,
    GraphFormatError,
    drop_missing,
    largest_connected_component,
    load_attributes,
    load_edge_list,
    save_attributes,
    save_edge_list,
)
from .harness import (
    ExperimentConfig,
    ExperimentError,
    ExperimentReport,
    aggregate,
    compare,
    load_records,
    report_emit,
    run_experiment,
)
from .samplers import (
    BalancedSampler,
    BFSSampler,
    ClusterAwareSampler,
    ExpansionSampler,
    ExtremalPointSampler,
    ForestFireSampler,
    HybridInformationSampler,
    InformationExpansionSampler,
    MHRWSampler,
    MixedIXSMHRWSampler,
    ParetoIMSampler,
    ParetoIXSampler,
    PriorSurpriseSampler,
    RandomWalkSampler,
    Sample,
    SamplerSpec,
    SamplingError,
    UniformSampler,
    VNSSampler,
    make_sampler,
    run_sampler,
)
from .state import SampleState
from .surprise import BinningRule, SurpriseScore, hansen_hurwitz_estimate, surprise
from .tasks import TaskSpec, characterize, classify_task, cluster_task, kmeans, run_task

__version__ = "0.1.0"
