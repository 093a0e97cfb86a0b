import json

import pytest

from glocalsync import ReplicaId, load_network
from glocalsync.errors import ParseError, UnknownCountry, ValidationError


def test_fig6_network_shape(fig6_network):
    assert len(fig6_network.countries) == 5
    assert len(fig6_network.all_replicas()) == 7
    assert fig6_network.languages("CA") == ("en", "fr")


def test_single_site_network():
    net = load_network(json.dumps({"sites": [{"country": "XX", "languages": ["en"], "region": "R"}]}))
    assert net.countries == ("XX",)
    assert net.all_replicas() == frozenset({ReplicaId("XX", "en")})


def test_duplicate_country_rejected():
    doc = {
        "sites": [
            {"country": "CA", "languages": ["en"], "region": "R"},
            {"country": "CA", "languages": ["fr"], "region": "R"},
        ]
    }
    with pytest.raises(ValidationError, match="duplicate country"):
        load_network(json.dumps(doc))


def test_empty_languages_rejected():
    doc = {"sites": [{"country": "CA", "languages": [], "region": "R"}]}
    with pytest.raises(ValidationError):
        load_network(json.dumps(doc))


def test_region_overlap_rejected():
    doc = {
        "sites": [
            {"country": "CA", "languages": ["en"], "region": "A"},
            {"country": "US", "languages": ["en"], "region": "B"},
        ],
        "regions": {"A": ["CA", "US"], "B": ["US"]},
    }
    with pytest.raises(ValidationError):
        load_network(json.dumps(doc))


def test_region_orphan_rejected():
    doc = {
        "sites": [
            {"country": "CA", "languages": ["en"], "region": "A"},
            {"country": "US", "languages": ["en"], "region": "A"},
        ],
        "regions": {"A": ["CA"]},
    }
    with pytest.raises(ValidationError):
        load_network(json.dumps(doc))


def test_malformed_document():
    with pytest.raises(ParseError):
        load_network("{not json")
    with pytest.raises(ParseError):
        load_network(json.dumps({"no_sites": []}))


def test_shared_languages(fig6_network):
    assert fig6_network.shared_languages("CA", "UK") == {"en"}
    assert fig6_network.shared_languages("CA", "NP") == frozenset()
    assert fig6_network.shared_languages("IN", "US") == {"en"}
    # symmetric
    assert fig6_network.shared_languages("UK", "CA") == fig6_network.shared_languages("CA", "UK")


def test_region_peers(fig6_network):
    assert fig6_network.region_peers("US") == {"US", "CA"}
    assert fig6_network.region_peers("IN") == {"IN", "NP"}
    assert fig6_network.region_peers("UK") == {"UK"}


def test_unknown_country(fig6_network):
    with pytest.raises(UnknownCountry):
        fig6_network.shared_languages("CA", "XX")
    with pytest.raises(UnknownCountry):
        fig6_network.region_peers("XX")


def test_replica_count_is_language_sum(fig6_network):
    total = sum(len(fig6_network.languages(c)) for c in fig6_network.countries)
    assert len(fig6_network.all_replicas()) == total


def test_codes_are_normalized():
    doc = {"sites": [{"country": "ca", "languages": ["EN", "Fr"], "region": "R"}]}
    net = load_network(json.dumps(doc))
    assert net.languages("CA") == ("en", "fr")
