import glob
import json
import os

import pytest

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
FIXTURES_DIR = os.path.join(DATA_DIR, "fixtures")
ROUNDTRIP_DIR = os.path.join(DATA_DIR, "roundtrip")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def roundtrip_dir():
    return ROUNDTRIP_DIR


@pytest.fixture(scope="session")
def manifest():
    with open(os.path.join(FIXTURES_DIR, "manifest.json"), encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixture_paths(manifest):
    return {
        name: os.path.join(FIXTURES_DIR, name) for name in sorted(manifest)
    }


def read_text(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def roundtrip_paths():
    return sorted(glob.glob(os.path.join(ROUNDTRIP_DIR, "*.Dockerfile"))) + sorted(
        glob.glob(os.path.join(FIXTURES_DIR, "*.Dockerfile"))
    )
