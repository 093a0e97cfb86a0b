from pathlib import Path

import pytest

from glocalsync import load_catalog_file, load_network_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fig6_network():
    return load_network_file(FIXTURES / "fig6_network.json")


@pytest.fixture(scope="session")
def fig6_catalog():
    return load_catalog_file(FIXTURES / "fig6_catalog.json")


@pytest.fixture(scope="session")
def fig1_network():
    return load_network_file(FIXTURES / "fig1_network.json")


@pytest.fixture(scope="session")
def fig1_catalog():
    return load_catalog_file(FIXTURES / "fig1_catalog.json")


@pytest.fixture(scope="session")
def tables_corpus_text():
    return (FIXTURES / "tables_corpus.tsv").read_text(encoding="utf-8")
