import pytest

from cvnnuniv.activations import activation_catalog
from cvnnuniv.classifier import classify


@pytest.fixture(scope="session")
def catalog_reports():
    """Classification of the whole catalog at default config (computed once)."""
    return {spec.name: classify(spec) for spec in activation_catalog()}
