import pytest

from quartic_chow.pipeline.stages import STAGE_ORDER, Pipeline


@pytest.fixture(scope="session")
def pipeline():
    """One verification-mode pipeline with every stage run, shared by the suite."""
    p = Pipeline()
    p.run_all(STAGE_ORDER)
    return p
