"""Site network model: countries, official languages, regions, replicas.

A network is immutable after loading; every other module treats it as a
read-only lookup structure. Country codes are normalized to uppercase and
language codes to lowercase opaque tokens (no locale fallback: "en" and
"en-gb" are distinct unless configured identically).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from .errors import ParseError, UnknownCountry, ValidationError


@dataclass(frozen=True, order=True)
class ReplicaId:
    """One (country, language) publication surface."""

    country: str
    language: str

    def as_key(self) -> str:
        return f"{self.country}-{self.language}"


@dataclass(frozen=True)
class CountrySite:
    country: str
    languages: Tuple[str, ...]  # ordered, no duplicates
    region: str


class SiteNetwork:
    """Immutable collection of country sites partitioned into regions."""

    def __init__(self, sites: Iterable[CountrySite], regions: Dict[str, FrozenSet[str]]):
        self._sites: Dict[str, CountrySite] = {}
        for site in sites:
            if site.country in self._sites:
                raise ValidationError(f"duplicate country: {site.country}")
            if not site.languages:
                raise ValidationError(f"site {site.country} has no languages")
            if len(set(site.languages)) != len(site.languages):
                raise ValidationError(f"site {site.country} repeats a language")
            self._sites[site.country] = site
        if not self._sites:
            raise ValidationError("network has no sites")

        self._regions = {name: frozenset(members) for name, members in regions.items()}
        seen: Dict[str, str] = {}
        for name, members in self._regions.items():
            if not members:
                raise ValidationError(f"region {name} is empty")
            for country in members:
                if country not in self._sites:
                    raise ValidationError(f"region {name} names unknown country {country}")
                if country in seen:
                    raise ValidationError(
                        f"country {country} appears in regions {seen[country]} and {name}"
                    )
                seen[country] = name
        for site in self._sites.values():
            if site.region not in self._regions:
                raise ValidationError(f"site {site.country} names unknown region {site.region}")
            if site.country not in self._regions[site.region]:
                raise ValidationError(
                    f"site {site.country} missing from its region {site.region}"
                )
        orphans = set(self._sites) - set(seen)
        if orphans:
            raise ValidationError(f"countries not covered by any region: {sorted(orphans)}")

    @property
    def countries(self) -> Tuple[str, ...]:
        return tuple(sorted(self._sites))

    @property
    def regions(self) -> Dict[str, FrozenSet[str]]:
        return dict(self._regions)

    def site(self, country: str) -> CountrySite:
        try:
            return self._sites[country]
        except KeyError:
            raise UnknownCountry(f"unknown country: {country}") from None

    def has_site(self, country: str) -> bool:
        return country in self._sites

    def languages(self, country: str) -> Tuple[str, ...]:
        return self.site(country).languages

    def shared_languages(self, a: str, b: str) -> FrozenSet[str]:
        """Languages offered by both countries (possibly empty)."""
        return frozenset(self.site(a).languages) & frozenset(self.site(b).languages)

    def region_peers(self, country: str) -> FrozenSet[str]:
        """All countries in the given country's region, itself included."""
        return self._regions[self.site(country).region]

    def site_replicas(self, country: str) -> Tuple[ReplicaId, ...]:
        return tuple(ReplicaId(country, lang) for lang in self.site(country).languages)

    def all_replicas(self) -> FrozenSet[ReplicaId]:
        return frozenset(
            ReplicaId(site.country, lang)
            for site in self._sites.values()
            for lang in site.languages
        )

    def is_replica(self, replica: ReplicaId) -> bool:
        return (
            replica.country in self._sites
            and replica.language in self._sites[replica.country].languages
        )


def load_network(text: str) -> SiteNetwork:
    """Parse a network config JSON document into a validated SiteNetwork.

    Schema: {"sites": [{"country", "languages": [...], "region"}],
    "regions": optional {region: [countries]} override}. When "regions"
    is omitted the partition is derived from each site's region field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid network JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("sites"), list):
        raise ParseError("network config must be an object with a 'sites' array")

    sites = []
    seen = set()
    for raw in doc["sites"]:
        if not isinstance(raw, dict):
            raise ParseError("each site must be an object")
        try:
            country = str(raw["country"]).upper()
            languages = tuple(str(lang).lower() for lang in raw["languages"])
            region = str(raw["region"])
        except KeyError as exc:
            raise ParseError(f"site missing field {exc}") from exc
        if country in seen:
            raise ValidationError(f"duplicate country: {country}")
        seen.add(country)
        sites.append(CountrySite(country=country, languages=languages, region=region))

    if "regions" in doc:
        raw_regions = doc["regions"]
        if not isinstance(raw_regions, dict):
            raise ParseError("'regions' must map region name to country list")
        regions = {
            str(name): frozenset(str(c).upper() for c in members)
            for name, members in raw_regions.items()
        }
    else:
        derived: Dict[str, set] = {}
        for site in sites:
            derived.setdefault(site.region, set()).add(site.country)
        regions = {name: frozenset(members) for name, members in derived.items()}

    return SiteNetwork(sites, regions)


def load_network_file(path) -> SiteNetwork:
    with open(path, encoding="utf-8") as handle:
        return load_network(handle.read())
