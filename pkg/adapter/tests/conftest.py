import pytest

from sam_adapter.model import StubBoxModel
from sam_adapter.service import AdapterApp, AdapterServer


@pytest.fixture
def stub_app():
    app = AdapterApp()
    app.attach_model(StubBoxModel())
    return app


@pytest.fixture
def stub_server(stub_app):
    with AdapterServer(stub_app) as server:
        yield server
