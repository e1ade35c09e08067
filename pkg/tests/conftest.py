import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridfrechet.gridreach import available_backends


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param
