"""Scoped content propagation and consistency engine for multi-country,
multilingual site networks."""

from .analysis import (
    ComparisonRecord,
    CouplingLabel,
    Outcome,
    ScaleLabel,
    Thresholds,
    analyze_dataset,
    build_pairwise,
    classify_source,
    coupling_summary,
    infer_coupling,
    infer_scale,
    load_dataset,
    summarize_category,
)
from .network import CountrySite, ReplicaId, SiteNetwork, load_network, load_network_file
from .patterns import (
    Catalog,
    Component,
    ConsistencyLevel,
    ContentCategory,
    ContentItem,
    Scope,
    SharingPattern,
    default_policy,
    load_catalog,
    load_catalog_file,
    scope_of_item,
    scope_of_pattern,
)
from .simulate import FaultModel, SimulationMetrics, Workload, baseline_no_policy, run
from .sync import (
    Finding,
    FindingKind,
    InconsistencyReport,
    LanguageRelation,
    PropagationTask,
    Revision,
    SyncState,
    UpdateEvent,
    dump_log,
    replay_log,
)

__all__ = [name for name in dir() if not name.startswith("_")]
