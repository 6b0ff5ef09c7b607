import pytest

from centrallift import metacyclic


@pytest.fixture(scope="session")
def case_study():
    """The full (3,4) run, shared by the metacyclic and acceptance tests."""
    cfg = metacyclic.CaseStudyConfig(3, 4)
    return metacyclic.run_case_study(cfg)
