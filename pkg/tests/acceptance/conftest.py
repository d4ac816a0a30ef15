import pytest

from app.workflow.RunConfig import parse_config
from app.workflow.RunWorkflow import run


@pytest.fixture(scope="module")
def run_config(tmp_path_factory):
    """Runs a `key = value` configuration through the full pipeline in a fresh directory."""

    def execute(text):
        state = run(parse_config(text), str(tmp_path_factory.mktemp("run")))
        assert state["errors"] == [], state["errors"]
        return state

    return execute
