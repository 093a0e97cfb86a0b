"""Sharing patterns, content catalog, and scope evaluation.

A pattern maps an origin country to the set of replicas a piece of
content must reach:

  Internationalisation -> every replica in the network
  Regionalisation      -> every replica of the origin's region peers
  Localisation         -> every replica of the origin site

Multi-component items carry one pattern per component; consistency
obligations are tracked per component, the union scope only answers
"where is this item published at all".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import ParseError, UnknownItem, ValidationError
from .network import ReplicaId, SiteNetwork


class SharingPattern(str, Enum):
    INTERNATIONALISATION = "Internationalisation"
    REGIONALISATION = "Regionalisation"
    LOCALISATION = "Localisation"


class ContentCategory(str, Enum):
    CORPORATE = "CorporateInformation"
    PRODUCT = "ProductInformation"
    SUPPORT = "CustomerSupportInformation"


class ConsistencyLevel(str, Enum):
    STRICT = "Strict"
    BOUNDED = "Bounded"
    LAZY = "Lazy"


# Category defaults: corporate content is shared globally under strict
# consistency, product content regionally under bounded consistency,
# support content locally under lazy consistency.
DEFAULT_POLICY: Dict[ContentCategory, Tuple[SharingPattern, ConsistencyLevel]] = {
    ContentCategory.CORPORATE: (SharingPattern.INTERNATIONALISATION, ConsistencyLevel.STRICT),
    ContentCategory.PRODUCT: (SharingPattern.REGIONALISATION, ConsistencyLevel.BOUNDED),
    ContentCategory.SUPPORT: (SharingPattern.LOCALISATION, ConsistencyLevel.LAZY),
}


def default_policy(category: ContentCategory) -> Tuple[SharingPattern, ConsistencyLevel]:
    return DEFAULT_POLICY[category]


@dataclass(frozen=True)
class Component:
    component_id: str
    pattern: SharingPattern


@dataclass(frozen=True)
class ContentItem:
    item_id: str
    category: ContentCategory
    origin: str
    components: Tuple[Component, ...]
    consistency: ConsistencyLevel

    def component(self, component_id: str) -> Component:
        for comp in self.components:
            if comp.component_id == component_id:
                return comp
        raise UnknownItem(f"item {self.item_id} has no component {component_id}")


@dataclass(frozen=True)
class Scope:
    replicas: FrozenSet[ReplicaId]

    def __contains__(self, replica: ReplicaId) -> bool:
        return replica in self.replicas

    def __len__(self) -> int:
        return len(self.replicas)

    def sorted(self) -> List[ReplicaId]:
        return sorted(self.replicas)


def scope_of_pattern(net: SiteNetwork, origin: str, pattern: SharingPattern) -> Scope:
    """Replica set a pattern propagates to, for content originating at origin."""
    net.site(origin)  # raises UnknownCountry
    if pattern is SharingPattern.INTERNATIONALISATION:
        return Scope(net.all_replicas())
    if pattern is SharingPattern.LOCALISATION:
        return Scope(frozenset(net.site_replicas(origin)))
    replicas = frozenset(
        replica for peer in net.region_peers(origin) for replica in net.site_replicas(peer)
    )
    return Scope(replicas)


def scope_of_item(net: SiteNetwork, item: ContentItem) -> Tuple[Dict[str, Scope], Scope]:
    """Per-component scopes plus their union (the publication surface)."""
    per_component = {
        comp.component_id: scope_of_pattern(net, item.origin, comp.pattern)
        for comp in item.components
    }
    union: FrozenSet[ReplicaId] = frozenset()
    for scope in per_component.values():
        union |= scope.replicas
    return per_component, Scope(union)


@dataclass
class Catalog:
    items: Dict[str, ContentItem] = field(default_factory=dict)

    def item(self, item_id: str) -> ContentItem:
        try:
            return self.items[item_id]
        except KeyError:
            raise UnknownItem(f"unknown item: {item_id}") from None

    def validate(self, net: SiteNetwork) -> None:
        for item in self.items.values():
            if not net.has_site(item.origin):
                raise ValidationError(
                    f"item {item.item_id} has unknown origin {item.origin}"
                )


def _parse_enum(enum_cls, value, context: str):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ParseError(f"{context}: expected one of {choices}, got {value!r}") from None


def load_catalog(text: str) -> Catalog:
    """Parse an item catalog: JSON array of items with per-component patterns.

    Each entry: {"item_id", "category", "origin",
    "components": [{"component_id", "pattern"?}], "consistency"?}.
    Omitted patterns and consistency fall back to the category defaults.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid catalog JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ParseError("catalog must be a JSON array of items")

    catalog = Catalog()
    for raw in doc:
        if not isinstance(raw, dict):
            raise ParseError("each catalog entry must be an object")
        try:
            item_id = str(raw["item_id"])
            category = _parse_enum(ContentCategory, raw["category"], f"item {raw.get('item_id')}")
            origin = str(raw["origin"]).upper()
            raw_components = raw["components"]
        except KeyError as exc:
            raise ParseError(f"catalog item missing field {exc}") from exc
        if item_id in catalog.items:
            raise ValidationError(f"duplicate item_id: {item_id}")
        if not isinstance(raw_components, list) or not raw_components:
            raise ValidationError(f"item {item_id} must have a non-empty components array")

        default_pattern, default_level = DEFAULT_POLICY[category]
        components: List[Component] = []
        seen = set()
        for raw_comp in raw_components:
            comp_id = str(raw_comp["component_id"])
            if comp_id in seen:
                raise ValidationError(f"item {item_id} repeats component {comp_id}")
            seen.add(comp_id)
            pattern = (
                _parse_enum(SharingPattern, raw_comp["pattern"], f"component {comp_id}")
                if "pattern" in raw_comp
                else default_pattern
            )
            components.append(Component(component_id=comp_id, pattern=pattern))

        level = (
            _parse_enum(ConsistencyLevel, raw["consistency"], f"item {item_id}")
            if "consistency" in raw
            else default_level
        )
        catalog.items[item_id] = ContentItem(
            item_id=item_id,
            category=category,
            origin=origin,
            components=tuple(components),
            consistency=level,
        )
    return catalog


def load_catalog_file(path) -> Catalog:
    with open(path, encoding="utf-8") as handle:
        return load_catalog(handle.read())
