"""Propagation-analysis over webpage comparison datasets.

Two views are computed from one record corpus:

  * complete graph: each source website's webpages are judged against
    every other site, and each webpage is classified All / Some / None
    by how many targets received the content;
  * website pairs: undirected per-pair propagation counts, accumulated
    triangularly (each unordered pair attributed once, to the earlier
    site in a fixed site order).

Category summaries feed threshold rules that label each category with a
sharing scale (Global / Regional / Local / LocalAndRegional) and a
coupling strength (High / Neutral / Low). Percentages are integers,
rounded half-to-even, which reproduces the published summary tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import AsymmetricDataset, IncompleteRecords, InvalidPercentages, ParseError
from .patterns import ContentCategory


class Outcome(str, Enum):
    PROPAGATED = "Propagated"
    NOT_PROPAGATED = "NotPropagated"


class Verdict(str, Enum):
    ALL = "All"
    SOME = "Some"
    NONE = "None"


class ScaleLabel(str, Enum):
    GLOBAL = "Global"
    REGIONAL = "Regional"
    LOCAL = "Local"
    LOCAL_AND_REGIONAL = "LocalAndRegional"


class CouplingLabel(str, Enum):
    HIGH = "High"
    NEUTRAL = "Neutral"
    LOW = "Low"


@dataclass(frozen=True)
class ComparisonRecord:
    brand: str
    category: ContentCategory
    webpage_id: str
    source: str
    target: str
    outcome: Outcome


@dataclass
class Thresholds:
    theta_global: int = 50
    theta_local: int = 60
    theta_comparable: int = 15
    theta_neutral: int = 40


def pct(count: int, total: int) -> int:
    """Integer percentage, exact arithmetic, ties rounded half-to-even."""
    if total == 0:
        return 0
    return round(Fraction(100 * count, total))


# -- dataset ingestion -------------------------------------------------------

_HEADER = ["brand", "category", "webpage_id", "source", "target", "outcome"]


def load_dataset(text: str) -> List[ComparisonRecord]:
    """Parse a tab-separated comparison dataset (header required)."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty dataset")
    header = lines[0].rstrip("\n").split("\t")
    if header != _HEADER:
        raise ParseError(f"dataset header must be {_HEADER}, got {header}")
    records: List[ComparisonRecord] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ParseError(f"line {line_no}: expected 6 tab-separated fields")
        brand, raw_category, webpage_id, source, target, raw_outcome = parts
        try:
            category = ContentCategory(raw_category)
        except ValueError:
            raise ParseError(f"line {line_no}: unknown category {raw_category!r}") from None
        try:
            outcome = Outcome(raw_outcome)
        except ValueError:
            raise ParseError(f"line {line_no}: unknown outcome {raw_outcome!r}") from None
        source = source.upper()
        target = target.upper()
        if source == target:
            raise ParseError(f"line {line_no}: source equals target ({source})")
        records.append(
            ComparisonRecord(brand, category, webpage_id, source, target, outcome)
        )
    if not records:
        raise ParseError("dataset has a header but no records")
    return records


def partition_dataset(
    records: Sequence[ComparisonRecord],
) -> Tuple[List[ComparisonRecord], List[ComparisonRecord]]:
    """Split a corpus into complete-graph records and pairwise records.

    Webpages are grouped by (brand, category, webpage_id). A group of two
    mirrored records (a->b, b->a) is a pairwise judgment; a group with a
    single source and several targets is a complete-graph judgment.
    """
    groups: Dict[Tuple[str, ContentCategory, str], List[ComparisonRecord]] = {}
    for record in records:
        groups.setdefault((record.brand, record.category, record.webpage_id), []).append(record)

    graph: List[ComparisonRecord] = []
    pairwise: List[ComparisonRecord] = []
    for key, group in groups.items():
        sources = {r.source for r in group}
        if len(group) == 2 and len(sources) == 2:
            a, b = group
            if a.source != b.target or a.target != b.source:
                raise AsymmetricDataset(f"webpage {key[2]}: records do not mirror each other")
            pairwise.extend(group)
        elif len(sources) == 1 and len(group) >= 2:
            targets = [r.target for r in group]
            if len(set(targets)) != len(targets):
                raise IncompleteRecords(f"webpage {key[2]}: duplicate target judgments")
            graph.extend(group)
        else:
            raise IncompleteRecords(
                f"webpage {key[2]}: cannot classify record group "
                f"({len(group)} records, {len(sources)} sources)"
            )
    return graph, pairwise


# -- complete graph (1:n-1) --------------------------------------------------


@dataclass
class SourceClassification:
    source: str
    category: ContentCategory
    verdicts: Dict[str, Verdict]
    counts: Tuple[int, int, int]  # (n_all, n_some, n_none)

    def to_json(self) -> dict:
        n_all, n_some, n_none = self.counts
        return {
            "source": self.source,
            "category": self.category.value,
            "all": n_all,
            "some": n_some,
            "none": n_none,
            "webpages": len(self.verdicts),
        }


def classify_source(
    records: Iterable[ComparisonRecord],
    source: str,
    category: ContentCategory,
    site_count: int,
) -> SourceClassification:
    """Classify each of a source's webpages as All / Some / None propagation."""
    per_webpage: Dict[str, List[ComparisonRecord]] = {}
    for record in records:
        if record.source != source or record.category != category:
            continue
        per_webpage.setdefault(record.webpage_id, []).append(record)

    verdicts: Dict[str, Verdict] = {}
    tallies = {Verdict.ALL: 0, Verdict.SOME: 0, Verdict.NONE: 0}
    for webpage_id, group in sorted(per_webpage.items()):
        targets = {r.target for r in group}
        if len(group) != site_count - 1 or len(targets) != site_count - 1:
            raise IncompleteRecords(
                f"webpage {webpage_id}: expected {site_count - 1} target judgments, "
                f"got {len(group)}"
            )
        yes = sum(1 for r in group if r.outcome is Outcome.PROPAGATED)
        if yes == site_count - 1:
            verdict = Verdict.ALL
        elif yes == 0:
            verdict = Verdict.NONE
        else:
            verdict = Verdict.SOME
        verdicts[webpage_id] = verdict
        tallies[verdict] += 1
    return SourceClassification(
        source=source,
        category=category,
        verdicts=verdicts,
        counts=(tallies[Verdict.ALL], tallies[Verdict.SOME], tallies[Verdict.NONE]),
    )


@dataclass
class CategorySummary:
    category: ContentCategory
    totals: Tuple[int, int, int]
    percentages: Tuple[int, int, int]
    webpages: int

    def to_json(self) -> dict:
        return {
            "category": self.category.value,
            "totals": {"all": self.totals[0], "some": self.totals[1], "none": self.totals[2]},
            "percentages": {
                "all": self.percentages[0],
                "some": self.percentages[1],
                "none": self.percentages[2],
            },
            "webpages": self.webpages,
        }


def summarize_category(
    classifications: Sequence[SourceClassification], category: ContentCategory
) -> CategorySummary:
    relevant = [c for c in classifications if c.category == category]
    totals = tuple(sum(c.counts[i] for c in relevant) for i in range(3))
    grand = sum(totals)
    percentages = tuple(pct(t, grand) for t in totals)
    return CategorySummary(category, totals, percentages, grand)


# -- website pairs (1:1) ------------------------------------------------------


@dataclass
class PairwiseMatrix:
    category: ContentCategory
    site_order: Tuple[str, ...]
    cells: Dict[Tuple[str, str], Tuple[int, int]]  # ordered-by-site_order pair -> (yes, total)
    cumulative: Dict[str, Tuple[int, int]]  # source -> (yes, total), triangular
    grand: Tuple[int, int]  # (yes, total) over all pairs

    def to_json(self) -> dict:
        return {
            "category": self.category.value,
            "site_order": list(self.site_order),
            "cells": {
                f"{a}-{b}": {"yes": yes, "total": total}
                for (a, b), (yes, total) in sorted(self.cells.items())
            },
            "cumulative": {
                source: {"yes": yes, "total": total, "pct_yes": pct(yes, total)}
                for source, (yes, total) in self.cumulative.items()
            },
            "grand": {
                "yes": self.grand[0],
                "total": self.grand[1],
                "pct_yes": pct(self.grand[0], self.grand[1]),
            },
        }


def build_pairwise(
    records: Iterable[ComparisonRecord],
    category: ContentCategory,
    site_order: Sequence[str],
) -> PairwiseMatrix:
    """Aggregate mirrored pair records into a symmetric propagation matrix."""
    rank = {site: i for i, site in enumerate(site_order)}

    def ordered(a: str, b: str) -> Tuple[str, str]:
        return (a, b) if rank[a] < rank[b] else (b, a)

    judgments: Dict[Tuple[str, str, str, str], Dict[Tuple[str, str], Outcome]] = {}
    for record in records:
        if record.category != category:
            continue
        if record.source not in rank or record.target not in rank:
            raise AsymmetricDataset(
                f"record names site outside the site order: "
                f"{record.source}/{record.target}"
            )
        pair = ordered(record.source, record.target)
        key = (record.brand, record.webpage_id) + pair
        directions = judgments.setdefault(key, {})
        direction = (record.source, record.target)
        if direction in directions and directions[direction] != record.outcome:
            raise AsymmetricDataset(
                f"webpage {record.webpage_id}: contradictory judgments for "
                f"{record.source}->{record.target}"
            )
        directions[direction] = record.outcome

    cells: Dict[Tuple[str, str], List[int]] = {}
    for (brand, webpage_id, a, b), directions in judgments.items():
        if len(directions) != 2 or len(set(directions.values())) != 1:
            raise AsymmetricDataset(
                f"webpage {webpage_id}: pair ({a},{b}) lacks agreeing mirrored records"
            )
        outcome = next(iter(directions.values()))
        yes_total = cells.setdefault((a, b), [0, 0])
        yes_total[1] += 1
        if outcome is Outcome.PROPAGATED:
            yes_total[0] += 1

    frozen = {pair: (yes, total) for pair, (yes, total) in cells.items()}
    cumulative: Dict[str, Tuple[int, int]] = {}
    for i, source in enumerate(site_order):
        yes = sum(frozen.get(ordered(source, later), (0, 0))[0] for later in site_order[i + 1 :])
        total = sum(
            frozen.get(ordered(source, later), (0, 0))[1] for later in site_order[i + 1 :]
        )
        if total:
            cumulative[source] = (yes, total)
    grand = (sum(v[0] for v in frozen.values()), sum(v[1] for v in frozen.values()))
    return PairwiseMatrix(category, tuple(site_order), frozen, cumulative, grand)


@dataclass
class CouplingSummary:
    category: ContentCategory
    yes: int
    no: int
    yes_pct: int
    no_pct: int

    def to_json(self) -> dict:
        return {
            "category": self.category.value,
            "yes": self.yes,
            "no": self.no,
            "yes_pct": self.yes_pct,
            "no_pct": self.no_pct,
        }


def coupling_summary(matrices: Sequence[PairwiseMatrix]) -> List[CouplingSummary]:
    summaries = []
    for matrix in matrices:
        yes, total = matrix.grand
        no = total - yes
        summaries.append(
            CouplingSummary(matrix.category, yes, no, pct(yes, total), pct(no, total))
        )
    return summaries


# -- label inference -----------------------------------------------------------


def _check_sum(values: Sequence[int], expected: int = 100) -> None:
    if abs(sum(values) - expected) > 1:
        raise InvalidPercentages(f"percentages {values} do not sum to about {expected}")


def infer_scale(
    percentages: Tuple[int, int, int], thresholds: Optional[Thresholds] = None
) -> ScaleLabel:
    """Label a category's sharing scale from its (all, some, none) percentages."""
    thresholds = thresholds or Thresholds()
    pct_all, pct_some, pct_none = percentages
    _check_sum(percentages)
    if pct_all >= thresholds.theta_global:
        return ScaleLabel.GLOBAL
    if pct_none >= thresholds.theta_local:
        return ScaleLabel.LOCAL
    if abs(pct_some - pct_none) <= thresholds.theta_comparable:
        return ScaleLabel.LOCAL_AND_REGIONAL
    if pct_some > pct_all and pct_some > pct_none:
        return ScaleLabel.REGIONAL
    return ScaleLabel.LOCAL


def infer_coupling(
    yes_pct: int, no_pct: int, theta_neutral: int = Thresholds.theta_neutral
) -> CouplingLabel:
    _check_sum((yes_pct, no_pct))
    if abs(yes_pct - no_pct) < theta_neutral:
        return CouplingLabel.NEUTRAL
    return CouplingLabel.HIGH if yes_pct > no_pct else CouplingLabel.LOW


# -- whole-corpus driver ---------------------------------------------------------


@dataclass
class AnalysisResult:
    site_count: int
    site_order: Tuple[str, ...]
    classifications: List[SourceClassification]
    summaries: List[CategorySummary]
    matrices: List[PairwiseMatrix]
    coupling: List[CouplingSummary]
    labels: Dict[ContentCategory, Tuple[ScaleLabel, CouplingLabel]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "site_count": self.site_count,
            "site_order": list(self.site_order),
            "source_classifications": [c.to_json() for c in self.classifications],
            "category_summaries": [s.to_json() for s in self.summaries],
            "pairwise_matrices": [m.to_json() for m in self.matrices],
            "coupling_summaries": [c.to_json() for c in self.coupling],
            "labels": {
                category.value: {"scale": scale.value, "coupling": coupling.value}
                for category, (scale, coupling) in sorted(
                    self.labels.items(), key=lambda kv: kv[0].value
                )
            },
        }


def analyze_dataset(
    records: Sequence[ComparisonRecord],
    thresholds: Optional[Thresholds] = None,
    site_order: Optional[Sequence[str]] = None,
) -> AnalysisResult:
    """Run both views plus label inference over one corpus.

    The pairwise site order defaults to first appearance of each source
    in the file, so a corpus written in a canonical order keeps it.
    """
    thresholds = thresholds or Thresholds()
    graph_records, pair_records = partition_dataset(records)

    categories = [c for c in ContentCategory if any(r.category == c for r in records)]

    classifications: List[SourceClassification] = []
    summaries: List[CategorySummary] = []
    if graph_records:
        sites = sorted(
            {r.source for r in graph_records} | {r.target for r in graph_records}
        )
        site_count = len(sites)
        graph_sources = sorted({r.source for r in graph_records})
        for category in categories:
            for source in graph_sources:
                if any(
                    r.source == source and r.category == category for r in graph_records
                ):
                    classifications.append(
                        classify_source(graph_records, source, category, site_count)
                    )
            summaries.append(summarize_category(classifications, category))
    else:
        site_count = 0

    matrices: List[PairwiseMatrix] = []
    coupling: List[CouplingSummary] = []
    if pair_records:
        if site_order is None:
            order: List[str] = []
            for record in pair_records:
                if record.source not in order:
                    order.append(record.source)
                if record.target not in order:
                    order.append(record.target)
            site_order = order
        for category in categories:
            if any(r.category == category for r in pair_records):
                matrices.append(build_pairwise(pair_records, category, site_order))
        coupling = coupling_summary(matrices)

    labels: Dict[ContentCategory, Tuple[ScaleLabel, CouplingLabel]] = {}
    by_summary = {s.category: s for s in summaries}
    by_coupling = {c.category: c for c in coupling}
    for category in categories:
        if category in by_summary and category in by_coupling:
            scale = infer_scale(by_summary[category].percentages, thresholds)
            strength = infer_coupling(
                by_coupling[category].yes_pct,
                by_coupling[category].no_pct,
                thresholds.theta_neutral,
            )
            labels[category] = (scale, strength)

    return AnalysisResult(
        site_count=site_count,
        site_order=tuple(site_order or ()),
        classifications=classifications,
        summaries=summaries,
        matrices=matrices,
        coupling=coupling,
        labels=labels,
    )


def render_text(result: AnalysisResult) -> str:
    """Plain-text tables mirroring the JSON report."""
    lines: List[str] = []
    if result.classifications:
        lines.append("Complete-graph propagation per source")
        lines.append(f"{'source':<8}{'category':<28}{'all':>5}{'some':>6}{'none':>6}")
        for c in result.classifications:
            n_all, n_some, n_none = c.counts
            lines.append(
                f"{c.source:<8}{c.category.value:<28}{n_all:>5}{n_some:>6}{n_none:>6}"
            )
        lines.append("")
        lines.append("Category summaries (count / %)")
        for s in result.summaries:
            lines.append(
                f"{s.category.value:<28}"
                f"all {s.totals[0]:>4} ({s.percentages[0]:>3}%)  "
                f"some {s.totals[1]:>4} ({s.percentages[1]:>3}%)  "
                f"none {s.totals[2]:>4} ({s.percentages[2]:>3}%)"
            )
        lines.append("")
    for matrix in result.matrices:
        lines.append(f"Pairwise propagation: {matrix.category.value}")
        for source, (yes, total) in matrix.cumulative.items():
            lines.append(f"  {source:<6} yes {yes:>4} of {total:>4} ({pct(yes, total):>3}%)")
        yes, total = matrix.grand
        lines.append(f"  total  yes {yes:>4} of {total:>4} ({pct(yes, total):>3}%)")
        lines.append("")
    if result.labels:
        lines.append("Inferred labels")
        for category, (scale, strength) in sorted(
            result.labels.items(), key=lambda kv: kv[0].value
        ):
            lines.append(f"  {category.value:<28} scale={scale.value}  coupling={strength.value}")
        lines.append("")
    return "\n".join(lines)
