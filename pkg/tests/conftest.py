import os

import pytest

LONG = os.environ.get("SIFTBOUND_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long-running; set SIFTBOUND_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)
